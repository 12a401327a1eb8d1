#include "rnls/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace rnls {

std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

void write_json(const std::filesystem::path& p, const nlohmann::ordered_json& j) {
  write_text(p, j.dump(2) + "\n");
}

void write_table_csv(const std::filesystem::path& p, const ResonanceTable& table) {
  std::string out;
  out += "k_flat";
  for (int i = 0; i < table.n_creators(); ++i) out += ",creator_" + std::to_string(i + 1);
  for (int i = 0; i < table.q_star(); ++i) out += ",annihilator_" + std::to_string(i + 1);
  out += "\n";
  for (int k = 0; k < table.grid().size(); ++k) {
    for (std::size_t t = 0; t < table.count(k); ++t) {
      out += std::to_string(k);
      for (std::uint32_t m : table.tuple(k, t)) out += "," + std::to_string(m);
      out += "\n";
    }
  }
  write_text(p, out);
}

namespace {

std::string sparse_name(const ObservableSpec& obs, bool resonant, size_t j) {
  const auto& s = resonant ? obs.resonant[j] : obs.nonresonant[j];
  std::string name = resonant ? "Phi" : "sphi";
  for (size_t k = 0; k < s.size(); ++k) {
    if (s[k] == 0) continue;
    name += "_" + std::to_string(k) + "x" + std::to_string(s[k]);
  }
  return name;
}

}  // namespace

void write_ensemble_csv(const std::filesystem::path& p, const EnsembleResult& ens,
                        const ObservableSpec& obs) {
  std::string out;
  out += "traj,tau";
  for (int m : obs.modes) out += ",I_" + std::to_string(m);
  for (size_t j = 0; j < obs.resonant.size(); ++j) out += "," + sparse_name(obs, true, j);
  for (size_t j = 0; j < obs.nonresonant.size(); ++j) out += "," + sparse_name(obs, false, j);
  if (obs.track_norm) out += ",norm_h0";
  if (obs.track_residual)
    for (int m : obs.modes) out += ",res_" + std::to_string(m);
  out += ",blown_up\n";

  for (size_t i = 0; i < ens.traj.size(); ++i) {
    const auto& t = ens.traj[i];
    for (size_t s = 0; s < t.tau.size(); ++s) {
      out += std::to_string(i) + "," + fmt_double(t.tau[s]);
      for (size_t m = 0; m < obs.modes.size(); ++m) out += "," + fmt_double(t.actions[m][s]);
      for (size_t j = 0; j < obs.resonant.size(); ++j) out += "," + fmt_double(t.phi_res[j][s]);
      for (size_t j = 0; j < obs.nonresonant.size(); ++j) out += "," + fmt_double(t.sphi[j][s]);
      if (obs.track_norm) out += "," + fmt_double(t.norm_h0[s]);
      if (obs.track_residual)
        for (size_t m = 0; m < obs.modes.size(); ++m) out += "," + fmt_double(t.residual[m][s]);
      out += t.blown_up ? ",1\n" : ",0\n";
    }
  }
  write_text(p, out);
}

void write_snapshots_csv(const std::filesystem::path& p, const EnsembleResult& ens) {
  std::string out = "traj,snapshot,mode,re,im\n";
  for (size_t i = 0; i < ens.traj.size(); ++i) {
    const auto& snaps = ens.traj[i].snapshots;
    for (size_t s = 0; s < snaps.size(); ++s)
      for (int k = 0; k < snaps[s].size(); ++k)
        out += std::to_string(i) + "," + std::to_string(s) + "," + std::to_string(k) + "," +
               fmt_double(snaps[s].v[static_cast<size_t>(k)].real()) + "," +
               fmt_double(snaps[s].v[static_cast<size_t>(k)].imag()) + "\n";
  }
  write_text(p, out);
}

void write_distances_csv(const std::filesystem::path& p, const ConvergenceReport& rep,
                         const ObservableSpec& obs) {
  std::string out = "nu,observable,kind,value,err\n";
  for (const auto& e : rep.entries) {
    for (size_t m = 0; m < e.ks_actions_final.size(); ++m) {
      out += fmt_double(e.nu) + ",I_" + std::to_string(obs.modes[m]) + ",ks_final," +
             fmt_double(e.ks_actions_final[m]) + "," + fmt_double(e.ks_actions_final_err[m]) + "\n";
      out += fmt_double(e.nu) + ",I_" + std::to_string(obs.modes[m]) + ",ks_mollified," +
             fmt_double(e.ks_actions_mollified[m]) + ",\n";
    }
    for (size_t j = 0; j < e.ks_phi_res.size(); ++j)
      out += fmt_double(e.nu) + "," + sparse_name(obs, true, j) + ",ks_mollified," +
             fmt_double(e.ks_phi_res[j]) + ",\n";
    for (size_t j = 0; j < e.kuiper_sphi_scaled.size(); ++j)
      out += fmt_double(e.nu) + "," + sparse_name(obs, false, j) + ",kuiper_scaled," +
             fmt_double(e.kuiper_sphi_scaled[j]) + "," + fmt_double(e.kuiper_sphi_p[j]) + "\n";
  }
  write_text(p, out);
}

void write_residuals_csv(const std::filesystem::path& p, const ConvergenceReport& rep,
                         const ObservableSpec& obs) {
  std::string out = "nu,mode,residual_mean\n";
  for (const auto& e : rep.entries)
    for (size_t m = 0; m < e.residual_mean.size(); ++m)
      out += fmt_double(e.nu) + "," + std::to_string(obs.modes[m]) + "," +
             fmt_double(e.residual_mean[m]) + "\n";
  write_text(p, out);
}

void write_spectrum_csv(const std::filesystem::path& p, std::span<const double> edges,
                        std::span<const double> e_r) {
  std::string out = "r_lo,r_hi,E_r\n";
  for (size_t e = 0; e < e_r.size(); ++e)
    out += fmt_double(edges[e]) + "," + fmt_double(edges[e + 1]) + "," + fmt_double(e_r[e]) + "\n";
  write_text(p, out);
}

nlohmann::ordered_json make_manifest(const ExperimentConfig& cfg, const std::string& command,
                                     int threads) {
  nlohmann::ordered_json j;
  j["tool"] = "rnls";
  j["version"] = "0.1.0";
  j["command"] = command;
  j["threads"] = threads;
  j["seed_rule"] = "stream i: splitmix64(splitmix64(master) + (i+1)*0x9E3779B97F4A7C15)";
  j["config"] = cfg.resolved_json();
  return j;
}

std::string ladder_gnuplot_script() {
  return R"(# gnuplot script: KS distances and residuals along the nu ladder
set datafile separator ','
set logscale x
set xlabel 'nu'
set ylabel 'two-sample KS distance'
set key outside
plot 'distances.csv' every ::1 using 1:($3 eq 'ks_final' ? $4 : 1/0) with points pt 7 title 'KS(I) at T'
)";
}

std::string spectrum_gnuplot_script() {
  return R"(# gnuplot script: shell-averaged energy spectrum
set datafile separator ','
set xlabel '|k|'
set ylabel 'E_r'
set logscale y
plot 'spectrum.csv' every ::1 using (($1+$2)/2):3 with linespoints pt 7 title 'E_r'
)";
}

}  // namespace rnls
