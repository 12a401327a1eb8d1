#pragma once

#include "rnls/reference.hpp"
#include "rnls/stats.hpp"

namespace rnls {

struct CheckItem {
  std::string name;
  bool pass = false;
  bool skipped = false;
  double err = 0.0;
  double tol = 0.0;
  std::string note;
};

struct CheckReport {
  std::vector<CheckItem> items;
  bool all_pass() const;
  nlohmann::ordered_json to_json() const;
};

// Deterministic random test field, modes damped by 1/(1 + lam_int).
SpectralField random_field(const SpectralGrid& grid, std::uint64_t seed, double scale = 0.3);

// Relative h^0 distance |a-b| / max(|a|, |b|).
double rel_err(const SpectralField& a, const SpectralField& b);

// The invariant suite behind `rnls check`: oracle equivalences, gradient
// structure, symmetries, conservation, the averaged-drift identity. Items
// too large for the configured grid are reported as skipped.
CheckReport run_invariant_suite(const ModelParams& params, const ResonanceTable& table,
                                std::uint64_t seed);

}  // namespace rnls
