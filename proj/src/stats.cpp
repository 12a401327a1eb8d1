#include "rnls/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rnls {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

double ks_distance(const EmpiricalLaw& a, const EmpiricalLaw& b) {
  if (a.samples.empty() || b.samples.empty())
    throw std::invalid_argument("ks_distance: empty sample");
  std::vector<double> x = a.samples, y = b.samples;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const std::size_t n = x.size(), m = y.size();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < n && j < m) {
    double v = std::min(x[i], y[j]);
    while (i < n && x[i] <= v) ++i;
    while (j < m && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

KuiperResult kuiper_uniformity(const EmpiricalLaw& a) {
  if (a.samples.empty()) throw std::invalid_argument("kuiper: empty sample");
  std::vector<double> u(a.samples.size());
  for (size_t i = 0; i < u.size(); ++i) u[i] = a.samples[i] / two_pi;
  std::sort(u.begin(), u.end());
  const std::size_t n = u.size();
  double dp = 0.0, dm = 0.0;
  for (size_t i = 0; i < n; ++i) {
    dp = std::max(dp, static_cast<double>(i + 1) / n - u[i]);
    dm = std::max(dm, u[i] - static_cast<double>(i) / n);
  }
  KuiperResult r;
  r.n = n;
  r.v_stat = dp + dm;
  double sq = std::sqrt(static_cast<double>(n));
  r.v_scaled = r.v_stat * (sq + 0.155 + 0.24 / sq);
  // asymptotic tail series
  double lam = r.v_scaled;
  double p = 0.0;
  for (int j = 1; j <= 100; ++j) {
    double t = static_cast<double>(j) * lam;
    p += (4.0 * t * t - 1.0) * std::exp(-2.0 * t * t);
  }
  r.p_value = std::clamp(2.0 * p, 0.0, 1.0);
  return r;
}

int EnsembleResult::blowups() const {
  int c = 0;
  for (const auto& t : traj) c += t.blown_up ? 1 : 0;
  return c;
}

int EnsembleResult::sample_of_tau(double tau) const {
  double step = spec.T / tg.samples;
  int s = static_cast<int>(std::lround(tau / step));
  return std::clamp(s, 0, tg.samples);
}

double resolve_dt(const ModelParams& params, const RunSpec& spec) {
  if (spec.dt_target > 0.0) return spec.dt_target;
  if (spec.kind == EquationKind::effective) return spec.max_dt;
  return std::min(spec.max_dt, full_equation_dt_bound(params, spec.nu, spec.steps_per_period));
}

EnsembleResult run_ensemble(const ModelParams& params, const ResonanceTable& table,
                            const ObservableSpec& obs, const RunSpec& spec,
                            const SpectralField& v0) {
  if (spec.M < 1) throw ConfigError("ensemble: M must be >= 1");
  EnsembleResult out;
  out.spec = spec;
  out.tg = make_time_grid(spec.T, resolve_dt(params, spec), spec.samples);
  out.traj.resize(static_cast<size_t>(spec.M));

  if (spec.kind == EquationKind::effective) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < spec.M; ++i) {
      GaussianRng rng(stream_seed(spec.seed, static_cast<std::uint64_t>(i)));
      out.traj[static_cast<size_t>(i)] =
          integrate_effective(params, table, v0, spec.T, out.tg, rng, obs);
    }
  } else {
#pragma omp parallel
    {
      NonlinearityEngine engine(*params.grid, params.q_star);
#pragma omp for schedule(dynamic)
      for (int i = 0; i < spec.M; ++i) {
        GaussianRng rng(stream_seed(spec.seed, static_cast<std::uint64_t>(i)));
        out.traj[static_cast<size_t>(i)] =
            integrate_full(params, table, engine, spec.nu, v0, spec.T, out.tg, rng, obs);
      }
    }
  }
  return out;
}

namespace {

const std::vector<double>& series_of(const TrajectoryRecord& t, ObsRef ref) {
  switch (ref.kind) {
    case ObsRef::Kind::action:
      return t.actions[static_cast<size_t>(ref.idx)];
    case ObsRef::Kind::phi_res:
      return t.phi_res[static_cast<size_t>(ref.idx)];
    case ObsRef::Kind::sphi:
      return t.sphi[static_cast<size_t>(ref.idx)];
    case ObsRef::Kind::residual:
      return t.residual[static_cast<size_t>(ref.idx)];
  }
  throw std::logic_error("unreachable");
}

bool is_circular(ObsRef ref) {
  return ref.kind == ObsRef::Kind::phi_res || ref.kind == ObsRef::Kind::sphi;
}

void push_sample(EmpiricalLaw& law, double x) {
  if (std::isnan(x))
    ++law.missing;
  else
    law.samples.push_back(x);
}

}  // namespace

EmpiricalLaw law_at(const EnsembleResult& ens, ObsRef ref, int sample) {
  EmpiricalLaw law;
  law.circular = is_circular(ref);
  for (const auto& t : ens.traj) {
    if (t.blown_up) continue;
    push_sample(law, series_of(t, ref)[static_cast<size_t>(sample)]);
  }
  return law;
}

EmpiricalLaw time_mollified_law(const EnsembleResult& ens, ObsRef ref, double tau1, double tau2) {
  if (!(tau1 < tau2)) throw std::invalid_argument("mollified law: empty window");
  int s1 = ens.sample_of_tau(tau1), s2 = ens.sample_of_tau(tau2);
  EmpiricalLaw law;
  law.circular = is_circular(ref);
  for (const auto& t : ens.traj) {
    if (t.blown_up) continue;
    const auto& series = series_of(t, ref);
    for (int s = s1; s <= s2; ++s) push_sample(law, series[static_cast<size_t>(s)]);
  }
  return law;
}

EmpiricalLaw mollified_iid_sample(const EnsembleResult& ens, ObsRef ref, double tau1, double tau2,
                                  std::uint64_t seed) {
  if (!(tau1 < tau2)) throw std::invalid_argument("mollified law: empty window");
  int s1 = ens.sample_of_tau(tau1), s2 = ens.sample_of_tau(tau2);
  EmpiricalLaw law;
  law.circular = is_circular(ref);
  for (size_t i = 0; i < ens.traj.size(); ++i) {
    const auto& t = ens.traj[i];
    if (t.blown_up) continue;
    GaussianRng rng(stream_seed(seed, i));
    int s = s1 + static_cast<int>(rng.uniform() * (s2 - s1 + 1));
    s = std::min(s, s2);
    push_sample(law, series_of(t, ref)[static_cast<size_t>(s)]);
  }
  return law;
}

std::vector<double> energy_spectrum(const EnsembleResult& ens, const ObservableSpec& obs,
                                    std::span<const double> shell_edges, double tau1, double tau2) {
  if (shell_edges.size() < 2) throw std::invalid_argument("spectrum: need at least one shell");
  const SpectralGrid* grid = nullptr;
  for (const auto& t : ens.traj)
    if (t.final_state.grid) {
      grid = t.final_state.grid;
      break;
    }
  if (!grid) throw std::invalid_argument("spectrum: empty ensemble");

  int s1 = ens.sample_of_tau(tau1), s2 = ens.sample_of_tau(tau2);
  std::vector<double> acc(shell_edges.size() - 1, 0.0);
  std::vector<long long> cnt(shell_edges.size() - 1, 0);
  for (size_t m = 0; m < obs.modes.size(); ++m) {
    double r = grid->radius(obs.modes[m]);
    int shell = -1;
    for (size_t e = 0; e + 1 < shell_edges.size(); ++e)
      if (r >= shell_edges[e] && r < shell_edges[e + 1]) shell = static_cast<int>(e);
    if (shell < 0) continue;
    for (const auto& t : ens.traj) {
      if (t.blown_up) continue;
      for (int s = s1; s <= s2; ++s) {
        acc[static_cast<size_t>(shell)] += 2.0 * t.actions[m][static_cast<size_t>(s)];
        cnt[static_cast<size_t>(shell)] += 1;
      }
    }
  }
  std::vector<double> out(acc.size());
  for (size_t e = 0; e < acc.size(); ++e)
    out[e] = cnt[e] > 0 ? acc[e] / static_cast<double>(cnt[e]) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

StationaryResult stationary_estimate(const ModelParams& params, const ResonanceTable& table,
                                     const ObservableSpec& obs, EquationKind kind, double nu,
                                     const SpectralField& v0, const StationarySpec& spec) {
  if (!(spec.burn_in < spec.horizon)) throw ConfigError("stationary: burn-in must precede horizon");

  RunSpec run;
  run.kind = kind;
  run.nu = nu;
  run.T = spec.horizon;
  run.dt_target = spec.dt_target;
  run.samples = std::max(1, static_cast<int>(std::lround(spec.horizon / spec.sample_spacing)));
  run.M = spec.paths;
  run.seed = stream_seed(spec.seed, 0x10ULL);
  EnsembleResult time_ens = run_ensemble(params, table, obs, run, v0);

  RunSpec snap = run;
  snap.M = spec.snapshot_M;
  snap.T = spec.burn_in * 2.0;
  snap.samples = 8;
  snap.seed = stream_seed(spec.seed, 0x20ULL);
  EnsembleResult snap_ens = run_ensemble(params, table, obs, snap, v0);

  StationaryResult out;
  const size_t n_modes = obs.modes.size();
  out.actions_time.reserve(n_modes);
  out.actions_snapshot.reserve(n_modes);
  for (size_t m = 0; m < n_modes; ++m) {
    ObsRef ref{ObsRef::Kind::action, static_cast<int>(m)};
    out.actions_time.push_back(time_mollified_law(time_ens, ref, spec.burn_in, spec.horizon));
    out.actions_snapshot.push_back(law_at(snap_ens, ref, snap.samples));
    auto mean = [](const EmpiricalLaw& l) {
      double acc = 0.0;
      for (double x : l.samples) acc += x;
      return l.samples.empty() ? std::numeric_limits<double>::quiet_NaN()
                               : acc / static_cast<double>(l.samples.size());
    };
    out.mean_action_time.push_back(mean(out.actions_time.back()));
    out.mean_action_snapshot.push_back(mean(out.actions_snapshot.back()));
    out.mixing_ks.push_back(ks_distance(out.actions_time.back(), out.actions_snapshot.back()));
  }
  return out;
}

double ks_bootstrap_err(const EmpiricalLaw& a, const EmpiricalLaw& b, int B, std::uint64_t seed) {
  if (a.samples.empty() || b.samples.empty()) return 0.0;
  std::vector<double> stats(static_cast<size_t>(B));
  for (int rep = 0; rep < B; ++rep) {
    GaussianRng rng(stream_seed(seed, static_cast<std::uint64_t>(rep)));
    EmpiricalLaw ra, rb;
    ra.samples.resize(a.samples.size());
    rb.samples.resize(b.samples.size());
    for (auto& x : ra.samples)
      x = a.samples[static_cast<size_t>(rng.uniform() * a.samples.size()) % a.samples.size()];
    for (auto& x : rb.samples)
      x = b.samples[static_cast<size_t>(rng.uniform() * b.samples.size()) % b.samples.size()];
    stats[static_cast<size_t>(rep)] = ks_distance(ra, rb);
  }
  double mean = 0.0;
  for (double s : stats) mean += s;
  mean /= static_cast<double>(B);
  double var = 0.0;
  for (double s : stats) var += (s - mean) * (s - mean);
  return std::sqrt(var / std::max(1, B - 1));
}

ConvergenceReport convergence_report(const ModelParams& params, const ResonanceTable& table,
                                     const ObservableSpec& obs, const SpectralField& v0,
                                     std::span<const double> ladder, int M, double T,
                                     std::uint64_t master_seed, double dt_effective, int samples) {
  if (ladder.size() < 1) throw ConfigError("compare: empty nu ladder");
  for (size_t i = 0; i + 1 < ladder.size(); ++i)
    if (!(ladder[i] > ladder[i + 1])) throw ConfigError("compare: ladder must be strictly decreasing");

  ConvergenceReport rep;
  rep.ladder.assign(ladder.begin(), ladder.end());
  rep.T = T;
  rep.M = M;

  // Effective reference ensemble. Matching the smallest full-equation step
  // keeps the weak discretization bias comparable across the comparison.
  RunSpec eff;
  eff.kind = EquationKind::effective;
  eff.T = T;
  eff.M = M;
  eff.samples = samples;
  eff.dt_target = dt_effective > 0.0
                      ? dt_effective
                      : std::min(0.01, full_equation_dt_bound(params, ladder.back(), 20));
  eff.seed = stream_seed(master_seed, 0);
  EnsembleResult eff_ens = run_ensemble(params, table, obs, eff, v0);
  rep.effective_blowups = eff_ens.blowups();

  const double w1 = T / 2.0, w2 = T;
  for (size_t step = 0; step < ladder.size(); ++step) {
    RunSpec full;
    full.kind = EquationKind::full;
    full.nu = ladder[step];
    full.T = T;
    full.M = M;
    full.samples = samples;
    full.seed = stream_seed(master_seed, step + 1);
    ObservableSpec obs_full = obs;
    obs_full.track_residual = true;
    EnsembleResult full_ens = run_ensemble(params, table, obs_full, full, v0);

    LadderEntry e;
    e.nu = ladder[step];
    e.blowups = full_ens.blowups();

    std::size_t miss = 0, tot = 0;
    for (size_t m = 0; m < obs.modes.size(); ++m) {
      ObsRef ref{ObsRef::Kind::action, static_cast<int>(m)};
      EmpiricalLaw lf = law_at(full_ens, ref, samples);
      EmpiricalLaw le = law_at(eff_ens, ref, samples);
      e.ks_actions_final.push_back(ks_distance(lf, le));
      e.ks_actions_final_err.push_back(
          ks_bootstrap_err(lf, le, 100, stream_seed(master_seed, 0x1000 + step * 64 + m)));
      e.ks_actions_mollified.push_back(ks_distance(time_mollified_law(full_ens, ref, w1, w2),
                                                   time_mollified_law(eff_ens, ref, w1, w2)));
      ObsRef rres{ObsRef::Kind::residual, static_cast<int>(m)};
      EmpiricalLaw res = law_at(full_ens, rres, samples);
      double mean = 0.0;
      for (double x : res.samples) mean += x;
      e.residual_mean.push_back(res.samples.empty() ? 0.0 : mean / static_cast<double>(res.samples.size()));
    }
    for (size_t j = 0; j < obs.resonant.size(); ++j) {
      ObsRef ref{ObsRef::Kind::phi_res, static_cast<int>(j)};
      EmpiricalLaw lf = time_mollified_law(full_ens, ref, w1, w2);
      EmpiricalLaw le = time_mollified_law(eff_ens, ref, w1, w2);
      miss += lf.missing + le.missing;
      tot += lf.missing + le.missing + lf.size() + le.size();
      e.ks_phi_res.push_back(ks_distance(lf, le));
    }
    for (size_t j = 0; j < obs.nonresonant.size(); ++j) {
      ObsRef ref{ObsRef::Kind::sphi, static_cast<int>(j)};
      EmpiricalLaw law =
          mollified_iid_sample(full_ens, ref, w1, w2, stream_seed(master_seed, 0x2000 + step));
      miss += law.missing;
      tot += law.missing + law.size();
      KuiperResult kr = kuiper_uniformity(law);
      e.kuiper_sphi_scaled.push_back(kr.v_scaled);
      e.kuiper_sphi_p.push_back(kr.p_value);
    }
    e.missing_fraction = tot > 0 ? static_cast<double>(miss) / static_cast<double>(tot) : 0.0;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

nlohmann::ordered_json ConvergenceReport::to_json(const ObservableSpec& obs,
                                                  const SpectralGrid& grid) const {
  nlohmann::ordered_json j;
  j["nu_ladder"] = ladder;
  j["T"] = T;
  j["M"] = M;
  j["effective_blowups"] = effective_blowups;
  nlohmann::ordered_json modes = nlohmann::ordered_json::array();
  for (int m : obs.modes) {
    nlohmann::ordered_json v = nlohmann::ordered_json::array();
    for (int i = 0; i < grid.dim(); ++i) v.push_back(grid.index(m)[i]);
    modes.push_back(v);
  }
  j["modes"] = modes;
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const auto& e : this->entries) {
    nlohmann::ordered_json je;
    je["nu"] = e.nu;
    je["blowups"] = e.blowups;
    je["missing_fraction"] = e.missing_fraction;
    je["ks_actions_final"] = e.ks_actions_final;
    je["ks_actions_final_err"] = e.ks_actions_final_err;
    je["ks_actions_mollified"] = e.ks_actions_mollified;
    je["ks_phi_res"] = e.ks_phi_res;
    je["kuiper_sphi_scaled"] = e.kuiper_sphi_scaled;
    je["kuiper_sphi_p"] = e.kuiper_sphi_p;
    je["residual_mean"] = e.residual_mean;
    entries.push_back(je);
  }
  j["entries"] = entries;
  return j;
}

}  // namespace rnls
