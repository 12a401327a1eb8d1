#pragma once

#include <cstdint>
#include <string>

#include "rnls/integrate.hpp"

namespace rnls {

// Scalar samples of one observable. Circular samples live on [0, 2pi);
// missing values (undefined phases) are excluded with their count kept.
struct EmpiricalLaw {
  std::vector<double> samples;
  bool circular = false;
  std::size_t missing = 0;

  std::size_t size() const { return samples.size(); }
};

// Two-sample Kolmogorov-Smirnov statistic in [0, 1].
double ks_distance(const EmpiricalLaw& a, const EmpiricalLaw& b);

// Kuiper test of a circular sample against the uniform law. v_scaled is
// V * (sqrt(n) + 0.155 + 0.24/sqrt(n)); the 95% band is v_scaled <= 1.747.
struct KuiperResult {
  double v_stat = 0.0;
  double v_scaled = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};
KuiperResult kuiper_uniformity(const EmpiricalLaw& a);
inline constexpr double kuiper_critical_95 = 1.747;

// ---------------------------------------------------------------------------
// Ensembles

enum class EquationKind { full, effective };

struct RunSpec {
  EquationKind kind = EquationKind::effective;
  double nu = 0.0;  // full equation only
  double T = 1.0;
  double dt_target = 0.0;  // 0 = policy default
  int samples = 16;
  int M = 2;
  std::uint64_t seed = 1;
  int steps_per_period = 20;  // full-equation dt policy
  double max_dt = 0.01;       // dt policy cap
};

struct EnsembleResult {
  RunSpec spec;
  TimeGrid tg;
  std::vector<TrajectoryRecord> traj;

  int blowups() const;
  int sample_of_tau(double tau) const;  // nearest sample index
};

double resolve_dt(const ModelParams& params, const RunSpec& spec);

// M independent trajectories; trajectory i draws its noise from
// stream_seed(spec.seed, i). Runs in parallel over trajectories; results are
// identical for any thread count.
EnsembleResult run_ensemble(const ModelParams& params, const ResonanceTable& table,
                            const ObservableSpec& obs, const RunSpec& spec,
                            const SpectralField& v0);

// Addressing one recorded observable of an ensemble.
struct ObsRef {
  enum class Kind { action, phi_res, sphi, residual } kind = Kind::action;
  int idx = 0;
};

// Law at one sample time (blown-up trajectories are skipped).
EmpiricalLaw law_at(const EnsembleResult& ens, ObsRef ref, int sample);
// Mollified law over [tau1, tau2]: pools the sample sub-grid across the
// ensemble.
EmpiricalLaw time_mollified_law(const EnsembleResult& ens, ObsRef ref, double tau1, double tau2);
// One independent draw from the mollified law per trajectory (a uniformly
// chosen sample time in the window); the draws are iid, so standard null
// bands apply to the resulting law.
EmpiricalLaw mollified_iid_sample(const EnsembleResult& ens, ObsRef ref, double tau1, double tau2,
                                  std::uint64_t seed);

// Shell-averaged E|v_k|^2 = 2 E I_k over modes with |k| in [edge_i, edge_{i+1});
// averaged over the ensemble and the time window. Empty shells give NaN.
std::vector<double> energy_spectrum(const EnsembleResult& ens, const ObservableSpec& obs,
                                    std::span<const double> shell_edges, double tau1, double tau2);

// Ornstein-Uhlenbeck closed form for the linear (rho = 0) equation with the
// complex Wiener convention beta = beta_+ + i beta_-: stationary E I = b^2/(2 gamma).
inline double ou_stationary_action(double b, double gamma) { return b * b / (2.0 * gamma); }

// ---------------------------------------------------------------------------
// Stationary estimation

struct StationarySpec {
  double burn_in = 20.0;
  double horizon = 200.0;
  int paths = 8;
  double sample_spacing = 0.25;
  double dt_target = 0.0;
  int snapshot_M = 64;  // independent-ensemble variant
  std::uint64_t seed = 1;
};

struct StationaryResult {
  std::vector<EmpiricalLaw> actions_time;      // per tracked mode, time-averaged
  std::vector<EmpiricalLaw> actions_snapshot;  // per tracked mode, ensemble snapshot
  std::vector<double> mean_action_time;
  std::vector<double> mean_action_snapshot;
  std::vector<double> mixing_ks;  // KS(time law, snapshot law) per mode
};

StationaryResult stationary_estimate(const ModelParams& params, const ResonanceTable& table,
                                     const ObservableSpec& obs, EquationKind kind, double nu,
                                     const SpectralField& v0, const StationarySpec& spec);

// ---------------------------------------------------------------------------
// The nu -> 0 experiment

struct LadderEntry {
  double nu = 0.0;
  std::vector<double> ks_actions_final;       // per tracked mode, at tau = T
  std::vector<double> ks_actions_final_err;   // bootstrap std
  std::vector<double> ks_actions_mollified;   // per tracked mode, window [T/2, T]
  std::vector<double> ks_phi_res;             // per resonant s, mollified
  std::vector<double> kuiper_sphi_scaled;     // per nonresonant s, iid mollified draw
  std::vector<double> kuiper_sphi_p;
  std::vector<double> residual_mean;          // per tracked mode, ensemble mean at tau = T
  int blowups = 0;
  double missing_fraction = 0.0;  // dropped phase samples / total
};

struct ConvergenceReport {
  std::vector<double> ladder;
  double T = 1.0;
  int M = 0;
  std::vector<LadderEntry> entries;
  int effective_blowups = 0;

  nlohmann::ordered_json to_json(const ObservableSpec& obs, const SpectralGrid& grid) const;
};

ConvergenceReport convergence_report(const ModelParams& params, const ResonanceTable& table,
                                     const ObservableSpec& obs, const SpectralField& v0,
                                     std::span<const double> ladder, int M, double T,
                                     std::uint64_t master_seed, double dt_effective = 0.0,
                                     int samples = 16);

// Bootstrap standard error of the KS distance under trajectory resampling.
double ks_bootstrap_err(const EmpiricalLaw& a, const EmpiricalLaw& b, int B, std::uint64_t seed);

}  // namespace rnls
