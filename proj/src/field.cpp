#include "rnls/field.hpp"

#include <cmath>
#include <numbers>

namespace rnls {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

SpectralField::SpectralField(const SpectralGrid& g, std::vector<cd> data) : grid(&g), v(std::move(data)) {
  if (static_cast<int>(v.size()) != g.size())
    throw std::invalid_argument("field: data length does not match grid");
}

std::vector<double> actions(const SpectralField& f) {
  std::vector<double> I(f.v.size());
  for (size_t k = 0; k < f.v.size(); ++k) I[k] = 0.5 * std::norm(f.v[k]);
  return I;
}

double phase_of(cd z) {
  if (z == cd{0.0, 0.0}) return 0.0;
  double a = std::arg(z);
  if (a < 0.0) a += two_pi;
  if (a >= two_pi) a = 0.0;
  return a;
}

std::vector<double> phases(const SpectralField& f) {
  std::vector<double> phi(f.v.size());
  for (size_t k = 0; k < f.v.size(); ++k) phi[k] = phase_of(f.v[k]);
  return phi;
}

SpectralField rotate(const SpectralField& f, std::span<const double> theta) {
  if (theta.size() != f.v.size()) throw std::invalid_argument("rotate: dimension mismatch");
  SpectralField out(*f.grid);
  for (size_t k = 0; k < f.v.size(); ++k) out.v[k] = std::polar(1.0, theta[k]) * f.v[k];
  return out;
}

SpectralField rotate_lambda(const SpectralField& f, double t) {
  SpectralField out(*f.grid);
  rotate_lambda_into(f.v, f.grid->lambda_ints(), t, out.v);
  return out;
}

void rotate_lambda_into(std::span<const cd> v, const std::vector<int>& lam, double t, std::span<cd> out) {
  for (size_t k = 0; k < v.size(); ++k) out[k] = std::polar(1.0, t * lam[k]) * v[k];
}

cd resonant_monomial(const SpectralField& f, std::span<const int> s) {
  if (s.size() != f.v.size()) throw std::invalid_argument("monomial: dimension mismatch");
  cd prod{1.0, 0.0};
  for (size_t k = 0; k < s.size(); ++k) {
    int sk = s[k];
    if (sk == 0) continue;
    cd base = sk > 0 ? f.v[k] : std::conj(f.v[k]);
    for (int j = 0; j < std::abs(sk); ++j) prod *= base;
  }
  return prod;
}

double phase_combination(const SpectralField& f, std::span<const int> s) {
  if (s.size() != f.v.size()) throw std::invalid_argument("phase combination: dimension mismatch");
  double acc = 0.0;
  for (size_t k = 0; k < s.size(); ++k) {
    if (s[k] == 0) continue;
    acc += s[k] * phase_of(f.v[k]);
  }
  acc = std::fmod(acc, two_pi);
  if (acc < 0.0) acc += two_pi;
  if (acc >= two_pi) acc = 0.0;
  return acc;
}

double sobolev_norm_sq(const SpectralField& f, double p) {
  double acc = 0.0;
  for (int k = 0; k < f.size(); ++k) {
    double lam = std::max(f.grid->lambda(k), 1.0);
    acc += std::pow(lam, p) * std::norm(f.v[static_cast<size_t>(k)]);
  }
  return acc;
}

double sobolev_norm(const SpectralField& f, double p) { return std::sqrt(sobolev_norm_sq(f, p)); }

double sobolev_norm_scaled_sq(const SpectralField& f, double p) {
  double L = f.grid->period();
  double vol = std::pow(two_pi * L, f.grid->dim());
  double floor = 1.0 / (L * L);  // (|k| v 1/L)^{2p} = (lambda v 1/L^2)^p
  double acc = 0.0;
  for (int k = 0; k < f.size(); ++k) {
    double lam = std::max(f.grid->lambda(k), floor);
    acc += std::pow(lam, p) * std::norm(f.v[static_cast<size_t>(k)]);
  }
  return vol * acc;
}

SpectralField from_actions_angles(const SpectralGrid& g, std::span<const double> I,
                                  std::span<const double> phi) {
  if (static_cast<int>(I.size()) != g.size() || static_cast<int>(phi.size()) != g.size())
    throw std::invalid_argument("from_actions_angles: dimension mismatch");
  SpectralField f(g);
  for (int k = 0; k < g.size(); ++k) {
    if (I[static_cast<size_t>(k)] < 0.0) throw std::invalid_argument("actions must be nonnegative");
    f.v[static_cast<size_t>(k)] = std::polar(std::sqrt(2.0 * I[static_cast<size_t>(k)]), phi[static_cast<size_t>(k)]);
  }
  return f;
}

}  // namespace rnls
