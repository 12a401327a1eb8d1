#include <doctest.h>

#include <algorithm>

#include "rnls/reference.hpp"
#include "rnls/rng.hpp"
#include "rnls/unimodular.hpp"

using namespace rnls;

namespace {

bool tables_equal(const ResonanceTable& a, const ResonanceTable& b) {
  if (a.total() != b.total()) return false;
  for (int k = 0; k < a.grid().size(); ++k) {
    if (a.count(k) != b.count(k)) return false;
    auto ta = a.tuples_of(k), tb = b.tuples_of(k);
    for (size_t i = 0; i < ta.size(); ++i)
      if (ta[i] != tb[i]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("tuple enumeration matches the quadruple-loop brute force") {
  // every grid with (2N+1)^d <= 81
  for (int N = 1; N <= 4; ++N) {
    SpectralGrid g(1, N);
    CHECK(tables_equal(enumerate_resonant_tuples(g, 1), reference::brute_force_table(g, 1)));
  }
  SpectralGrid g21(2, 1);
  CHECK(tables_equal(enumerate_resonant_tuples(g21, 1), reference::brute_force_table(g21, 1)));
  // q* = 2 goes through the nested-loop path
  SpectralGrid g11(1, 1);
  CHECK(tables_equal(enumerate_resonant_tuples(g11, 2), reference::brute_force_table(g11, 2)));
  CHECK(tables_equal(enumerate_resonant_tuples(g21, 2), reference::brute_force_table(g21, 2)));
}

TEST_CASE("one-dimensional quadruple resonances are trivial") {
  SpectralGrid g(1, 3);
  ResonanceTable table = enumerate_resonant_tuples(g, 1);
  CHECK(table.total() > 0);
  for (int k = 0; k < g.size(); ++k)
    for (std::size_t t = 0; t < table.count(k); ++t) {
      auto tup = table.tuple(k, t);
      int c1 = static_cast<int>(tup[0]), c2 = static_cast<int>(tup[1]), a = static_cast<int>(tup[2]);
      bool multiset = (c1 == a && c2 == k) || (c2 == a && c1 == k);
      CHECK(multiset);
    }
}

TEST_CASE("known resonant tuples are present") {
  SpectralGrid g(2, 1);
  ResonanceTable table = enumerate_resonant_tuples(g, 1);
  // creators (1,0), (0,1); annihilator (1,1); output (0,0)
  int c1 = g.flat(WaveIndex{{1, 0, 0}});
  int c2 = g.flat(WaveIndex{{0, 1, 0}});
  int a = g.flat(WaveIndex{{1, 1, 0}});
  int k = g.flat(WaveIndex{{0, 0, 0}});
  bool found = false;
  for (std::size_t t = 0; t < table.count(k); ++t) {
    auto tup = table.tuple(k, t);
    if (static_cast<int>(tup[0]) == c1 && static_cast<int>(tup[1]) == c2 && static_cast<int>(tup[2]) == a)
      found = true;
  }
  CHECK(found);

  // identity resonances (j, k; j) -> k for every pair
  for (int j : {0, 4, 7})
    for (int kk : {1, 3, 8}) {
      bool present = false;
      for (std::size_t t = 0; t < table.count(kk); ++t) {
        auto tup = table.tuple(kk, t);
        if (static_cast<int>(tup[0]) == j && static_cast<int>(tup[1]) == kk && static_cast<int>(tup[2]) == j)
          present = true;
      }
      CHECK(present);
    }
}

TEST_CASE("q* = 1, d = 2 tuples are lattice rectangles") {
  SpectralGrid g(2, 1);
  ResonanceTable table = enumerate_resonant_tuples(g, 1);
  for (int k = 0; k < g.size(); ++k)
    for (std::size_t t = 0; t < table.count(k); ++t) {
      auto tup = table.tuple(k, t);
      WaveIndex c1 = g.index(static_cast<int>(tup[0]));
      WaveIndex c2 = g.index(static_cast<int>(tup[1]));
      WaveIndex a = g.index(static_cast<int>(tup[2]));
      WaveIndex out = g.index(k);
      // both conservation laws, checked from scratch
      CHECK(c1 + c2 - a - out == WaveIndex{});
      long long lam = 0;
      for (int i = 0; i < 2; ++i) lam += c1[i] * c1[i] + c2[i] * c2[i] - a[i] * a[i] - out[i] * out[i];
      CHECK(lam == 0);
      // diagonals of equal length with the same midpoint: a rectangle
      // (possibly degenerate), vertices c1, a, c2, out
      WaveIndex d1 = c1 - a, d2 = out - c2;
      CHECK(d1 == d2);
      long long dot = 0;
      for (int i = 0; i < 2; ++i) dot += static_cast<long long>(c1[i] - a[i]) * (c1[i] - out[i]);
      CHECK(dot == 0);
    }
}

TEST_CASE("tuple enumeration honors the budget guard") {
  SpectralGrid g(2, 2);
  CHECK_THROWS_AS(enumerate_resonant_tuples(g, 2, 1000), BudgetError);
  CHECK_THROWS_AS(enumerate_resonant_tuples(g, 0), ConfigError);
}

TEST_CASE("resonance module enumeration") {
  SpectralGrid g1(1, 1);  // lambda = (1, 0, 1)
  auto mod2 = enumerate_resonance_module(g1, 2);
  auto has = [](const std::vector<std::vector<int>>& m, const std::vector<int>& s) {
    return std::find(m.begin(), m.end(), s) != m.end();
  };
  CHECK(has(mod2, {1, 0, -1}));
  CHECK(has(mod2, {0, 1, 0}));   // zero mode has lambda = 0
  CHECK(has(mod2, {0, -1, 0}));
  CHECK(!has(mod2, {1, 0, 0}));

  for (const auto& s : mod2) {
    CHECK(l1_norm(s) <= 2);
    CHECK(l1_norm(s) > 0);
    CHECK(lambda_dot(g1, s) == 0);
  }

  SpectralGrid g2(2, 1);
  auto mod4 = enumerate_resonance_module(g2, 4);
  std::vector<int> rect(static_cast<size_t>(g2.size()), 0);
  rect[static_cast<size_t>(g2.flat(WaveIndex{{1, 0, 0}}))] = 1;
  rect[static_cast<size_t>(g2.flat(WaveIndex{{0, 1, 0}}))] = 1;
  rect[static_cast<size_t>(g2.flat(WaveIndex{{1, 1, 0}}))] = -1;
  rect[static_cast<size_t>(g2.flat(WaveIndex{{0, 0, 0}}))] = -1;
  CHECK(has(mod4, rect));
  for (const auto& s : mod4) CHECK(lambda_dot(g2, s) == 0);

  // ordered by max support index, ties left in lexicographic order
  auto top = [](const std::vector<int>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i)
      if (v[static_cast<size_t>(i)] != 0) return i;
    return -1;
  };
  for (size_t i = 0; i + 1 < mod4.size(); ++i) {
    CHECK(top(mod4[i]) <= top(mod4[i + 1]));
    if (top(mod4[i]) == top(mod4[i + 1])) CHECK(mod4[i] < mod4[i + 1]);
  }

  CHECK_THROWS_AS(enumerate_resonance_module(g2, 1), ConfigError);
  CHECK_THROWS_AS(enumerate_resonance_module(g2, 4, 10), BudgetError);
}

TEST_CASE("unimodular completion: pinned cases") {
  {
    auto basis = unimodular_completion(std::vector<long long>{1});
    CHECK(basis.n == 1);
    CHECK(basis.R == std::vector<long long>{1});
  }
  {
    auto basis = unimodular_completion(std::vector<long long>{1, 1});
    CHECK(basis.gcd_factor == 1);
    CHECK(integer_determinant(basis.R, 2) == 1);
    auto zeta = basis.column(0);
    CHECK((zeta == std::vector<long long>{1, -1} || zeta == std::vector<long long>{-1, 1}));
    // R^T W = e^n
    CHECK(basis.at(0, 0) * 1 + basis.at(1, 0) * 1 == 0);
    CHECK(basis.at(0, 1) * 1 + basis.at(1, 1) * 1 == 1);
  }
  {
    auto basis = unimodular_completion(std::vector<long long>{2, 1});
    CHECK(std::abs(integer_determinant(basis.R, 2)) == 1);
    auto zeta = basis.column(0);
    CHECK((zeta == std::vector<long long>{1, -2} || zeta == std::vector<long long>{-1, 2}));
  }
  {
    auto basis = unimodular_completion(std::vector<long long>{4, 6});
    CHECK(basis.gcd_factor == 2);
    CHECK(basis.W == std::vector<long long>{2, 3});
  }
  CHECK_THROWS_AS(unimodular_completion(std::vector<long long>{0, 0}), std::invalid_argument);
}

TEST_CASE("unimodular completion: randomized identities") {
  GaussianRng rng(2024);
  for (int rep = 0; rep < 60; ++rep) {
    int n = 2 + static_cast<int>(rng.uniform() * 5);
    std::vector<long long> W(static_cast<size_t>(n), 0);
    bool nonzero = false;
    for (auto& w : W) {
      w = static_cast<long long>(rng.uniform() * 19) - 9;
      nonzero = nonzero || w != 0;
    }
    if (!nonzero) W[0] = 1;
    auto basis = unimodular_completion(W);
    CHECK(std::abs(integer_determinant(basis.R, n)) == 1);
    for (int j = 0; j < n; ++j) {
      long long dot = 0;
      for (int i = 0; i < n; ++i) dot += basis.at(i, j) * basis.W[static_cast<size_t>(i)];
      CHECK(dot == (j == n - 1 ? 1 : 0));
    }
  }
}

TEST_CASE("phase coordinates resolve the rotation flow") {
  SpectralGrid g(1, 1);  // lambda = (1, 0, 1)
  std::vector<long long> W(g.lambda_ints().begin(), g.lambda_ints().end());
  auto basis = unimodular_completion(W);
  CHECK(basis.gcd_factor == 1);

  std::vector<double> zero(3, 0.0);
  auto y0 = phase_coordinates(zero, basis);
  for (double y : y0) CHECK(y == 0.0);

  GaussianRng rng(7);
  std::vector<double> phi(3);
  for (auto& p : phi) p = rng.uniform() * 6.28;
  double t = 1.234;
  std::vector<double> shifted(3);
  for (int i = 0; i < 3; ++i) shifted[static_cast<size_t>(i)] = phi[static_cast<size_t>(i)] + t * g.lambda_int(i);
  auto ya = phase_coordinates(phi, basis);
  auto yb = phase_coordinates(shifted, basis);
  for (int j = 0; j < 2; ++j)
    CHECK(std::abs(std::remainder(yb[static_cast<size_t>(j)] - ya[static_cast<size_t>(j)], 2 * 3.14159265358979312)) ==
          doctest::Approx(0.0).epsilon(1e-9));
  CHECK(std::abs(std::remainder(yb[2] - ya[2] - t, 2 * 3.14159265358979312)) ==
        doctest::Approx(0.0).epsilon(1e-9));

  // the 2 x 2 example: y = (a - b, b)
  auto b2 = unimodular_completion(std::vector<long long>{1, 1});
  std::vector<double> ab{1.0, 0.25};
  auto y = phase_coordinates(ab, b2);
  CHECK(y[0] == doctest::Approx(0.75));
  CHECK(y[1] == doctest::Approx(0.25));

  CHECK_THROWS_AS(phase_coordinates(std::vector<double>{0.0}, b2), std::invalid_argument);
}
