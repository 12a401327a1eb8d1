#pragma once

#include <complex>
#include <span>
#include <vector>

#include "rnls/grid.hpp"

namespace rnls {

using cd = std::complex<double>;

// Complex amplitude per grid mode, flat-index order. Value-like: all
// operations below are pure.
struct SpectralField {
  const SpectralGrid* grid = nullptr;
  std::vector<cd> v;

  SpectralField() = default;
  explicit SpectralField(const SpectralGrid& g) : grid(&g), v(static_cast<size_t>(g.size()), cd{0.0, 0.0}) {}
  SpectralField(const SpectralGrid& g, std::vector<cd> data);

  int size() const { return static_cast<int>(v.size()); }
  cd& operator[](int k) { return v[static_cast<size_t>(k)]; }
  const cd& operator[](int k) const { return v[static_cast<size_t>(k)]; }
};

// Actions I_k = |v_k|^2 / 2.
std::vector<double> actions(const SpectralField& f);

// Angles Arg v_k in [0, 2pi); the zero amplitude gets angle 0.
double phase_of(cd z);
std::vector<double> phases(const SpectralField& f);

// Rotation Psi_theta: v_k -> e^{i theta_k} v_k. Isometry of every h^p norm.
SpectralField rotate(const SpectralField& f, std::span<const double> theta);
// Psi_{t*Lambda} with the integer frequency vector Lambda = (lam_int_k).
SpectralField rotate_lambda(const SpectralField& f, double t);
void rotate_lambda_into(std::span<const cd> v, const std::vector<int>& lam, double t, std::span<cd> out);

// Resonant monomial V^s = prod v_k^{s_k+} * prod conj(v_k)^{s_k-}.
cd resonant_monomial(const SpectralField& f, std::span<const int> s);

// Phase combination Phi^s = sum s_k * Arg v_k  (mod 2pi).
double phase_combination(const SpectralField& f, std::span<const int> s);

// |v|_{h^p}^2 = sum (lambda_k v 1)^p |v_k|^2, physical eigenvalues.
double sobolev_norm_sq(const SpectralField& f, double p);
double sobolev_norm(const SpectralField& f, double p);
// L-scaled variant (2 pi L)^d sum (|k| v 1/L)^{2p} |v_k|^2, as a squared norm.
double sobolev_norm_scaled_sq(const SpectralField& f, double p);

// sqrt(2 I_k) e^{i phi_k} per mode.
SpectralField from_actions_angles(const SpectralGrid& g, std::span<const double> I,
                                  std::span<const double> phi);

inline double norm0(const SpectralField& f) { return sobolev_norm(f, 0.0); }

}  // namespace rnls
