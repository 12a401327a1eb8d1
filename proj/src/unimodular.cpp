#include "rnls/unimodular.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace rnls {

namespace {

using i128 = __int128;

long long checked(i128 x) {
  if (x > i128(9'000'000'000'000'000'000LL) || x < -i128(9'000'000'000'000'000'000LL))
    throw std::overflow_error("unimodular completion: integer overflow");
  return static_cast<long long>(x);
}

// g = u*a + v*b with g = gcd(a,b) >= 0
long long xgcd(long long a, long long b, long long& u, long long& v) {
  long long old_r = a, r = b;
  long long old_u = 1, uu = 0;
  long long old_v = 0, vv = 1;
  while (r != 0) {
    long long q = old_r / r;
    long long t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_u - q * uu;
    old_u = uu;
    uu = t;
    t = old_v - q * vv;
    old_v = vv;
    vv = t;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_u = -old_u;
    old_v = -old_v;
  }
  u = old_u;
  v = old_v;
  return old_r;
}

}  // namespace

std::vector<long long> UnimodularBasis::column(int j) const {
  std::vector<long long> col(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) col[static_cast<size_t>(i)] = at(i, j);
  return col;
}

UnimodularBasis unimodular_completion(std::span<const long long> W_in) {
  const int n = static_cast<int>(W_in.size());
  if (n == 0) throw std::invalid_argument("unimodular completion: empty vector");

  long long g = 0;
  for (long long w : W_in) g = std::gcd(g, std::llabs(w));
  if (g == 0) throw std::invalid_argument("unimodular completion: zero vector");

  UnimodularBasis out;
  out.n = n;
  out.gcd_factor = g;
  out.W.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out.W[static_cast<size_t>(i)] = W_in[static_cast<size_t>(i)] / g;

  // Reduce w to e^n by unimodular row operations, applying the same ops to
  // B = I. Afterwards B w = e^n, and R = B^T.
  std::vector<long long> w = out.W;
  std::vector<long long> B(static_cast<size_t>(n) * static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i) B[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(i)] = 1;

  auto row_combine = [&](int i, int j, long long a11, long long a12, long long a21, long long a22) {
    // (row_i, row_j) <- (a11 row_i + a12 row_j, a21 row_i + a22 row_j)
    for (int col = 0; col < n; ++col) {
      i128 bi = B[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(col)];
      i128 bj = B[static_cast<size_t>(j) * static_cast<size_t>(n) + static_cast<size_t>(col)];
      B[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(col)] = checked(a11 * bi + a12 * bj);
      B[static_cast<size_t>(j) * static_cast<size_t>(n) + static_cast<size_t>(col)] = checked(a21 * bi + a22 * bj);
    }
  };

  int det_sign = 1;
  for (int i = 0; i < n - 1; ++i) {
    long long a = w[static_cast<size_t>(i)], b = w[static_cast<size_t>(n) - 1];
    if (a == 0) continue;
    long long u, v;
    long long d = xgcd(a, b, u, v);
    // values: w_i -> -(b/d) a + (a/d) b = 0,  w_n -> u a + v b = d
    row_combine(i, n - 1, -(b / d), a / d, u, v);
    w[static_cast<size_t>(i)] = 0;
    w[static_cast<size_t>(n) - 1] = d;
    det_sign = -det_sign;  // each 2x2 block has determinant -1
  }
  if (w[static_cast<size_t>(n) - 1] == -1) {
    for (int col = 0; col < n; ++col)
      B[static_cast<size_t>(n - 1) * static_cast<size_t>(n) + static_cast<size_t>(col)] *= -1;
    w[static_cast<size_t>(n) - 1] = 1;
    det_sign = -det_sign;
  }
  if (w[static_cast<size_t>(n) - 1] != 1)
    throw std::logic_error("unimodular completion: reduction failed");
  if (det_sign < 0 && n >= 2) {
    // negating the first resonance column (= row 0 of B) keeps the basis
    // valid and makes det R = +1
    for (int col = 0; col < n; ++col)
      B[static_cast<size_t>(0) * static_cast<size_t>(n) + static_cast<size_t>(col)] *= -1;
  }

  out.R.resize(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.R[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)] =
          B[static_cast<size_t>(j) * static_cast<size_t>(n) + static_cast<size_t>(i)];
  return out;
}

std::vector<double> phase_coordinates(std::span<const double> phi, const UnimodularBasis& basis) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const int n = basis.n;
  if (static_cast<int>(phi.size()) != n)
    throw std::invalid_argument("phase coordinates: dimension mismatch");
  std::vector<double> y(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += static_cast<double>(basis.at(i, j)) * phi[static_cast<size_t>(i)];
    acc = std::fmod(acc, two_pi);
    if (acc < 0.0) acc += two_pi;
    if (acc >= two_pi) acc = 0.0;
    y[static_cast<size_t>(j)] = acc;
  }
  return y;
}

long long integer_determinant(const std::vector<long long>& A, int n) {
  // Bareiss fraction-free elimination.
  std::vector<i128> m(A.begin(), A.end());
  auto at = [&](int i, int j) -> i128& { return m[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)]; };
  i128 prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k) == 0) {
      int p = k + 1;
      while (p < n && at(p, k) == 0) ++p;
      if (p == n) return 0;
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
    prev = at(k, k);
  }
  return sign * checked(at(n - 1, n - 1));
}

}  // namespace rnls
