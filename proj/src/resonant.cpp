#include "rnls/resonant.hpp"

#include <cmath>
#include <numbers>

namespace rnls {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

void require_match(const ResonanceTable& table, const SpectralField& f) {
  if (f.grid == nullptr || !(*f.grid == table.grid()))
    throw std::invalid_argument("resonant field: table/grid mismatch");
}
}  // namespace

void resonant_sum(const ResonanceTable& table, std::span<const cd> v, std::span<cd> out) {
  const int n = table.grid().size();
  const int n_c = table.n_creators();
  const int len = table.tuple_len();
#pragma omp parallel for schedule(static)
  for (int k = 0; k < n; ++k) {
    cd acc{0.0, 0.0};
    auto all = table.tuples_of(k);
    for (size_t base = 0; base < all.size(); base += static_cast<size_t>(len)) {
      cd term = v[all[base]];
      for (int i = 1; i < n_c; ++i) term *= v[all[base + static_cast<size_t>(i)]];
      for (int i = n_c; i < len; ++i) term *= std::conj(v[all[base + static_cast<size_t>(i)]]);
      acc += term;
    }
    out[static_cast<size_t>(k)] = acc;
  }
}

void resonant_field_direct_into(const ResonanceTable& table, std::span<const cd> v, double rho,
                                std::span<cd> out) {
  resonant_sum(table, v, out);
  const cd mi_rho{0.0, -rho};
  for (auto& z : out) z *= mi_rho;
}

SpectralField resonant_field_direct(const ResonanceTable& table, const SpectralField& f,
                                    double rho) {
  require_match(table, f);
  SpectralField out(*f.grid);
  resonant_field_direct_into(table, f.v, rho, out.v);
  return out;
}

int quadrature_nodes(const SpectralGrid& grid, int q_star) {
  return (2 * q_star + 2) * grid.max_lambda_int() + 1;
}

SpectralField resonant_field_quadrature(NonlinearityEngine& engine, const SpectralField& f,
                                        double rho) {
  const SpectralGrid& grid = *f.grid;
  const int n = grid.size();
  const int K = quadrature_nodes(grid, engine.q_star());
  const auto& lam = grid.lambda_ints();

  SpectralField acc(grid);
  std::vector<cd> w(static_cast<size_t>(n)), p(static_cast<size_t>(n));
  for (int j = 0; j < K; ++j) {
    double t = two_pi * j / K;
    rotate_lambda_into(f.v, lam, t, w);
    engine.apply(w, rho, p);
    for (int k = 0; k < n; ++k)
      acc.v[static_cast<size_t>(k)] += std::polar(1.0, -t * lam[static_cast<size_t>(k)]) * p[static_cast<size_t>(k)];
  }
  for (auto& z : acc.v) z /= static_cast<double>(K);
  return acc;
}

double hamiltonian_res(const ResonanceTable& table, const SpectralField& f) {
  require_match(table, f);
  std::vector<cd> s(f.v.size());
  resonant_sum(table, f.v, s);
  cd acc{0.0, 0.0};
  for (size_t k = 0; k < s.size(); ++k) acc += s[k] * std::conj(f.v[k]);
  // imaginary part cancels pairwise (creators <-> annihilators swap)
  return -acc.real() / (2.0 * table.q_star() + 2.0);
}

SpectralField nonresonant_field(NonlinearityEngine& engine, const ResonanceTable& table,
                                const SpectralField& f, double rho, double theta) {
  const SpectralGrid& grid = *f.grid;
  const auto& lam = grid.lambda_ints();
  const int n = grid.size();

  std::vector<cd> w(static_cast<size_t>(n)), p(static_cast<size_t>(n));
  rotate_lambda_into(f.v, lam, -theta, w);
  engine.apply(w, rho, p);
  SpectralField out(grid);
  for (int k = 0; k < n; ++k)
    out.v[static_cast<size_t>(k)] = std::polar(1.0, theta * lam[static_cast<size_t>(k)]) * p[static_cast<size_t>(k)];

  std::vector<cd> r0(static_cast<size_t>(n));
  resonant_field_direct_into(table, f.v, rho, r0);
  for (int k = 0; k < n; ++k) out.v[static_cast<size_t>(k)] -= r0[static_cast<size_t>(k)];
  return out;
}

std::vector<double> averaged_action_drift(const ResonanceTable& table,
                                          std::span<const double> gamma, const SpectralField& f,
                                          double rho) {
  require_match(table, f);
  std::vector<cd> r0(f.v.size());
  resonant_field_direct_into(table, f.v, rho, r0);
  std::vector<double> out(f.v.size());
  for (size_t k = 0; k < f.v.size(); ++k) {
    // v . z = Re(conj(v) z); the damping part contributes -2 gamma I
    out[k] = (std::conj(f.v[k]) * r0[k]).real() - gamma[k] * std::norm(f.v[k]);
  }
  return out;
}

std::vector<double> averaged_action_drift_quadrature(NonlinearityEngine& engine,
                                                     std::span<const double> gamma,
                                                     const SpectralField& f, double rho) {
  const SpectralGrid& grid = *f.grid;
  const int n = grid.size();
  const int K = quadrature_nodes(grid, engine.q_star());
  const auto& lam = grid.lambda_ints();

  std::vector<double> out(static_cast<size_t>(n), 0.0);
  std::vector<cd> w(static_cast<size_t>(n)), p(static_cast<size_t>(n));
  for (int j = 0; j < K; ++j) {
    double t = two_pi * j / K;
    rotate_lambda_into(f.v, lam, t, w);
    engine.apply(w, rho, p);
    for (int k = 0; k < n; ++k) {
      cd back = std::polar(1.0, -t * lam[static_cast<size_t>(k)]) * p[static_cast<size_t>(k)];
      out[static_cast<size_t>(k)] += (std::conj(f.v[static_cast<size_t>(k)]) * back).real();
    }
  }
  for (int k = 0; k < n; ++k) {
    out[static_cast<size_t>(k)] /= static_cast<double>(K);
    out[static_cast<size_t>(k)] -= gamma[static_cast<size_t>(k)] * std::norm(f.v[static_cast<size_t>(k)]);
  }
  return out;
}

}  // namespace rnls
