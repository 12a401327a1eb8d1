#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "rnls/stats.hpp"

namespace rnls {

// Initial condition families.
//   zero:   v = 0
//   smooth: v_k = amplitude (1 + lam_int)^(-decay) e^{i phase_step k_flat}
// h0_norm, when set, rescales to |v|_{h^0} = h0_norm.
struct InitialSpec {
  enum class Kind { zero, smooth };
  Kind kind = Kind::smooth;
  double amplitude = 0.5;
  double decay = 1.0;
  double phase_step = 0.7;
  std::optional<double> h0_norm;

  SpectralField build(const SpectralGrid& grid) const;
  nlohmann::ordered_json to_json() const;
};

// One experiment: grid + model + run + observables + initial + output.
// Parsed from a single JSON file; unknown keys anywhere are errors.
struct ExperimentConfig {
  int d = 2, N = 1;
  double L = 1.0;

  int q_star = 1;
  double rho = 1.0;
  DampingSpec damping;
  NoiseSpec noise;

  EquationKind equation = EquationKind::effective;
  double nu = 0.1;
  std::vector<double> nu_ladder;
  double T = 1.0;
  double dt = 0.0;  // 0 = policy default
  double max_dt = 0.01;
  int steps_per_period = 20;
  int samples = 16;
  int M = 2;
  std::uint64_t seed = 1;
  bool snapshots = false;

  // stationary estimation
  double burn_in = 20.0;
  double horizon = 200.0;
  int paths = 8;
  double sample_spacing = 0.25;
  int snapshot_M = 64;

  // observables (empty = automatic defaults)
  bool modes_all = true;
  std::vector<WaveIndex> mode_list;
  std::vector<std::vector<std::pair<WaveIndex, int>>> resonant_sparse;
  std::vector<std::vector<std::pair<WaveIndex, int>>> nonresonant_sparse;
  bool resonant_given = false, nonresonant_given = false;
  std::vector<double> shells;

  InitialSpec initial;
  std::string out_dir = "out";

  std::size_t budget_ops = 4'000'000'000ULL;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::filesystem::path& p);
  nlohmann::ordered_json resolved_json() const;

  // Materialized pieces. Grid must outlive params/observables.
  SpectralGrid make_grid() const;
  ModelParams make_params(const SpectralGrid& grid) const;
  // Fills automatic defaults for missing observable lists (resonant vectors
  // from the order-(2q*+2) resonance module, one nonresonant single-mode
  // phase) and validates the given ones.
  ObservableSpec make_observables(const SpectralGrid& grid) const;
  std::vector<double> make_shells(const SpectralGrid& grid) const;
};

}  // namespace rnls
