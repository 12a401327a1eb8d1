#pragma once

#include <filesystem>
#include <string>

#include "rnls/config.hpp"

namespace rnls {

// Round-trip formatting: shortest decimal that restores the double exactly,
// so equal runs produce byte-identical files.
std::string fmt_double(double x);

void write_text(const std::filesystem::path& p, const std::string& text);
void write_json(const std::filesystem::path& p, const nlohmann::ordered_json& j);

// One tuple per row: k_flat, then member flat indices (creators first).
void write_table_csv(const std::filesystem::path& p, const ResonanceTable& table);

// Long format: traj, tau, then one column per recorded observable.
void write_ensemble_csv(const std::filesystem::path& p, const EnsembleResult& ens,
                        const ObservableSpec& obs);

// Full field snapshots (Re, Im per mode in flat order).
void write_snapshots_csv(const std::filesystem::path& p, const EnsembleResult& ens);

void write_distances_csv(const std::filesystem::path& p, const ConvergenceReport& rep,
                         const ObservableSpec& obs);
void write_residuals_csv(const std::filesystem::path& p, const ConvergenceReport& rep,
                         const ObservableSpec& obs);
void write_spectrum_csv(const std::filesystem::path& p, std::span<const double> edges,
                        std::span<const double> e_r);

// Manifest: resolved config + seed bookkeeping; enough to reproduce the run.
nlohmann::ordered_json make_manifest(const ExperimentConfig& cfg, const std::string& command,
                                     int threads);

std::string ladder_gnuplot_script();
std::string spectrum_gnuplot_script();

}  // namespace rnls
