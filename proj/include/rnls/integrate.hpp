#pragma once

#include <optional>

#include "rnls/resonant.hpp"
#include "rnls/rng.hpp"

namespace rnls {

// Coefficients of the rescaled equation. For the full equation nu is the
// fast-rotation parameter; the effective equation has no nu.
struct ModelParams {
  const SpectralGrid* grid = nullptr;
  int q_star = 1;
  double rho = 1.0;
  DampingSpec damping;
  NoiseSpec noise;
  std::vector<double> gamma;  // per mode, f(lambda_k)
  std::vector<double> b;      // per mode

  ModelParams() = default;
  ModelParams(const SpectralGrid& g, int q, double rho_, DampingSpec d, NoiseSpec ns);

  // True when d >= 3 and q* >= 2/(d-2); truncated systems remain well posed,
  // so this is reported as a warning by the CLI, not an error.
  bool outside_wellposed_range() const;
};

struct ObservableSpec {
  std::vector<int> modes;                      // flat indices whose I_k are recorded
  std::vector<std::vector<int>> resonant;      // dense s with Lambda.s = 0 (Phi^s)
  std::vector<std::vector<int>> nonresonant;   // dense s with Lambda.s != 0 (s.phi)
  bool track_norm = true;
  bool track_residual = false;                 // full equation only
  int snapshot_stride = 0;                     // in sample points; 0 = none

  static ObservableSpec all_modes(const SpectralGrid& g);
};

// Phases with any supporting mode below this modulus are recorded as missing
// (NaN): the angle is undefined on the vanishing locus.
inline constexpr double phase_floor = 1e-14;
inline constexpr double blowup_threshold = 1e6;

struct TrajectoryRecord {
  std::vector<double> tau;                      // uniform sample grid, tau[0] = 0
  std::vector<std::vector<double>> actions;     // [obs mode][sample]
  std::vector<std::vector<double>> phi_res;     // [s][sample], NaN = missing
  std::vector<std::vector<double>> sphi;        // [s][sample], back-rotated to v-phases
  std::vector<double> norm_h0;                  // [sample]
  std::vector<std::vector<double>> residual;    // [obs mode][sample] running max |int Rosc|
  std::vector<SpectralField> snapshots;
  SpectralField final_state;
  bool blown_up = false;
  double blowup_tau = 0.0;
};

// Number of integrator steps per sample interval so that samples land on
// step boundaries; dt is adjusted downward to divide the interval.
struct TimeGrid {
  double dt;
  int samples;         // intervals; sample times are i*T/samples
  int steps_per_sample;
};
TimeGrid make_time_grid(double T, double dt_target, int samples);

// Stability guard shared by both equations.
void check_step(const ModelParams& params, double dt);

// Step bound for the interaction representation: at least `steps_per_period`
// steps per fastest oscillation of the nonresonant remainder.
double full_equation_dt_bound(const ModelParams& params, double nu, int steps_per_period = 20);

// Effective equation, Euler-Maruyama with exact damping factor:
//   v <- e^{-gamma dt} (v + R0(v) dt) + b dbeta,   dbeta = N(0,dt) + i N(0,dt).
TrajectoryRecord integrate_effective(const ModelParams& params, const ResonanceTable& table,
                                     const SpectralField& v0, double T, const TimeGrid& tg,
                                     GaussianRng& rng, const ObservableSpec& obs);

// Full equation in the interaction representation a_k = e^{i nu^{-1} lambda_k tau} v_k:
// the stiff rotation is removed exactly and the drift becomes
//   R0(a) + Rosc(a, theta),  theta = nu^{-1} tau / L^2.
// Recorded observables refer to v (actions and resonant combinations agree;
// nonresonant phase combinations are back-rotated analytically).
TrajectoryRecord integrate_full(const ModelParams& params, const ResonanceTable& table,
                                NonlinearityEngine& engine, double nu, const SpectralField& v0,
                                double T, const TimeGrid& tg, GaussianRng& rng,
                                const ObservableSpec& obs);

// Deterministic conservative flow v' = R0(v), classical RK4; for invariant
// checks (no damping, no noise).
TrajectoryRecord integrate_resonant_flow(const ModelParams& params, const ResonanceTable& table,
                                         const SpectralField& v0, double T, double h,
                                         int samples, const ObservableSpec& obs);

// Quadratic invariants of the resonant flow.
double h0_invariant(const SpectralField& f);                    // 1/2 sum |v|^2
double h1_invariant(const SpectralField& f);                    // 1/2 sum lam |v|^2
double momentum_invariant(const SpectralField& f, int axis);    // 1/2 sum k_l |v|^2

}  // namespace rnls
