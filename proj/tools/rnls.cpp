// Command-line driver: resonances | check | simulate | compare | stationary.
// Every run echoes a manifest (resolved config + seed rule) into the output
// directory; identical config + seed reproduce the outputs byte for byte.
//
// Exit codes: 0 success, 1 invariant/acceptance failure, 2 config error,
// 3 resource budget exceeded.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rnls/checks.hpp"
#include "rnls/io.hpp"

namespace fs = std::filesystem;
using namespace rnls;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  int threads = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool plots = false;
};

ExperimentConfig load(const CommonArgs& args) {
  ExperimentConfig cfg = ExperimentConfig::from_file(args.config_path);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.seed_given) cfg.seed = args.seed;
  return cfg;
}

int effective_threads(int requested) {
#ifdef _OPENMP
  if (requested > 0) omp_set_num_threads(requested);
  return requested > 0 ? requested : omp_get_max_threads();
#else
  return 1;
#endif
}

fs::path prepare_out(const ExperimentConfig& cfg, const std::string& command, int threads) {
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_json(dir / "manifest.json", make_manifest(cfg, command, threads));
  return dir;
}

void warn_wellposedness(const ModelParams& params) {
  if (params.outside_wellposed_range())
    std::fprintf(stderr,
                 "warning: (d, q*) = (%d, %d) violates q* < 2/(d-2); the truncated system stays "
                 "well posed but the continuum bounds do not apply\n",
                 params.grid->dim(), params.q_star);
}

int cmd_resonances(const CommonArgs& args) {
  ExperimentConfig cfg = load(args);
  int threads = effective_threads(args.threads);
  SpectralGrid grid = cfg.make_grid();
  ResonanceTable table = enumerate_resonant_tuples(grid, cfg.q_star, cfg.budget_ops);
  fs::path dir = prepare_out(cfg, "resonances", threads);
  write_table_csv(dir / "table.csv", table);

  nlohmann::ordered_json summary = table.summary_json();
  summary["grid"] = grid.to_json();
  if (grid.dim() == 1 && cfg.q_star == 1) {
    // creator multiset == annihilator + output multiset for every tuple
    bool trivial = true;
    for (int k = 0; k < grid.size() && trivial; ++k)
      for (std::size_t t = 0; t < table.count(k) && trivial; ++t) {
        auto tup = table.tuple(k, t);
        int c1 = static_cast<int>(tup[0]), c2 = static_cast<int>(tup[1]), a = static_cast<int>(tup[2]);
        trivial = (c1 == a && c2 == k) || (c2 == a && c1 == k);
      }
    summary["trivial"] = trivial;
  }
  write_json(dir / "summary.json", summary);

  std::printf("modes: %d, tuples: %zu\n", grid.size(), table.total());
  for (int k = 0; k < grid.size(); ++k) std::printf("  mode %d: %zu\n", k, table.count(k));
  return 0;
}

int cmd_check(const CommonArgs& args, bool corrupt_table) {
  ExperimentConfig cfg = load(args);
  int threads = effective_threads(args.threads);
  SpectralGrid grid = cfg.make_grid();
  ModelParams params = cfg.make_params(grid);
  warn_wellposedness(params);
  ResonanceTable table = enumerate_resonant_tuples(grid, cfg.q_star, cfg.budget_ops);
  if (corrupt_table) table.corrupt_for_test();

  CheckReport rep = run_invariant_suite(params, table, cfg.seed);
  fs::path dir = prepare_out(cfg, "check", threads);
  write_json(dir / "check.json", rep.to_json());

  for (const auto& item : rep.items)
    std::printf("%-32s %s  err=%.3e tol=%.1e%s\n", item.name.c_str(),
                item.skipped ? "SKIP" : (item.pass ? "PASS" : "FAIL"), item.err, item.tol,
                item.note.empty() ? "" : ("  (" + item.note + ")").c_str());
  if (!rep.all_pass()) {
    for (const auto& item : rep.items)
      if (!item.pass && !item.skipped)
        std::fprintf(stderr, "invariant failed: %s\n", item.name.c_str());
    return 1;
  }
  return 0;
}

int cmd_simulate(const CommonArgs& args) {
  ExperimentConfig cfg = load(args);
  int threads = effective_threads(args.threads);
  SpectralGrid grid = cfg.make_grid();
  ModelParams params = cfg.make_params(grid);
  warn_wellposedness(params);
  ResonanceTable table = enumerate_resonant_tuples(grid, cfg.q_star, cfg.budget_ops);
  ObservableSpec obs = cfg.make_observables(grid);
  if (cfg.equation == EquationKind::full) obs.track_residual = true;

  RunSpec run;
  run.kind = cfg.equation;
  run.nu = cfg.nu;
  run.T = cfg.T;
  run.dt_target = cfg.dt;
  run.max_dt = cfg.max_dt;
  run.steps_per_period = cfg.steps_per_period;
  run.samples = cfg.samples;
  run.M = cfg.M;
  run.seed = stream_seed(cfg.seed, 0);
  EnsembleResult ens = run_ensemble(params, table, obs, run, cfg.initial.build(grid));

  fs::path dir = prepare_out(cfg, "simulate", threads);
  write_ensemble_csv(dir / "observables.csv", ens, obs);
  if (cfg.snapshots) write_snapshots_csv(dir / "snapshots.csv", ens);

  nlohmann::ordered_json info;
  info["dt"] = ens.tg.dt;
  info["steps_per_sample"] = ens.tg.steps_per_sample;
  info["blowups"] = ens.blowups();
  write_json(dir / "run.json", info);
  std::printf("trajectories: %d, dt: %s, blowups: %d\n", run.M, fmt_double(ens.tg.dt).c_str(),
              ens.blowups());
  return 0;
}

int cmd_compare(const CommonArgs& args) {
  ExperimentConfig cfg = load(args);
  int threads = effective_threads(args.threads);
  if (cfg.nu_ladder.size() < 3) throw ConfigError("compare: run.nu_ladder needs >= 3 values");
  SpectralGrid grid = cfg.make_grid();
  ModelParams params = cfg.make_params(grid);
  warn_wellposedness(params);
  ResonanceTable table = enumerate_resonant_tuples(grid, cfg.q_star, cfg.budget_ops);
  ObservableSpec obs = cfg.make_observables(grid);

  ConvergenceReport rep = convergence_report(params, table, obs, cfg.initial.build(grid),
                                             cfg.nu_ladder, cfg.M, cfg.T, cfg.seed, cfg.dt,
                                             cfg.samples);

  fs::path dir = prepare_out(cfg, "compare", threads);
  write_json(dir / "report.json", rep.to_json(obs, grid));
  write_distances_csv(dir / "distances.csv", rep, obs);
  write_residuals_csv(dir / "residuals.csv", rep, obs);
  if (args.plots) write_text(dir / "ladder.gp", ladder_gnuplot_script());

  for (const auto& e : rep.entries) {
    double worst = 0.0;
    for (double x : e.ks_actions_final) worst = std::max(worst, x);
    std::printf("nu=%-6s worst KS(I)=%.3f blowups=%d missing=%.1f%%\n", fmt_double(e.nu).c_str(),
                worst, e.blowups, 100.0 * e.missing_fraction);
  }
  return 0;
}

int cmd_stationary(const CommonArgs& args) {
  ExperimentConfig cfg = load(args);
  int threads = effective_threads(args.threads);
  SpectralGrid grid = cfg.make_grid();
  ModelParams params = cfg.make_params(grid);
  warn_wellposedness(params);
  ResonanceTable table = enumerate_resonant_tuples(grid, cfg.q_star, cfg.budget_ops);
  ObservableSpec obs = cfg.make_observables(grid);

  StationarySpec sp;
  sp.burn_in = cfg.burn_in;
  sp.horizon = cfg.horizon;
  sp.paths = cfg.paths;
  sp.sample_spacing = cfg.sample_spacing;
  sp.dt_target = cfg.dt;
  sp.snapshot_M = cfg.snapshot_M;

  // two initial conditions: zero and the configured field
  InitialSpec zero;
  zero.kind = InitialSpec::Kind::zero;
  sp.seed = stream_seed(cfg.seed, 1);
  StationaryResult a =
      stationary_estimate(params, table, obs, cfg.equation, cfg.nu, zero.build(grid), sp);
  sp.seed = stream_seed(cfg.seed, 2);
  StationaryResult b =
      stationary_estimate(params, table, obs, cfg.equation, cfg.nu, cfg.initial.build(grid), sp);

  fs::path dir = prepare_out(cfg, "stationary", threads);
  nlohmann::ordered_json j;
  j["burn_in"] = sp.burn_in;
  j["horizon"] = sp.horizon;
  j["paths"] = sp.paths;
  nlohmann::ordered_json per_mode = nlohmann::ordered_json::array();
  double worst_cross = 0.0;
  for (size_t m = 0; m < obs.modes.size(); ++m) {
    nlohmann::ordered_json e;
    e["mode"] = obs.modes[m];
    e["mean_I_ic_zero"] = a.mean_action_time[m];
    e["mean_I_ic_config"] = b.mean_action_time[m];
    e["mixing_diag_ic_zero"] = a.mixing_ks[m];
    e["mixing_diag_ic_config"] = b.mixing_ks[m];
    double cross = ks_distance(a.actions_time[m], b.actions_time[m]);
    e["ks_between_ics"] = cross;
    worst_cross = std::max(worst_cross, cross);
    // rho = 0 closed form for reference
    e["ou_closed_form"] = ou_stationary_action(params.b[static_cast<size_t>(obs.modes[m])],
                                               params.gamma[static_cast<size_t>(obs.modes[m])]);
    per_mode.push_back(e);
  }
  j["per_mode"] = per_mode;
  j["worst_ks_between_ics"] = worst_cross;
  write_json(dir / "stationary.json", j);

  auto edges = cfg.make_shells(grid);
  std::vector<double> spectrum(edges.size() - 1, 0.0);
  std::vector<int> cnt(edges.size() - 1, 0);
  for (size_t m = 0; m < obs.modes.size(); ++m) {
    double r = grid.radius(obs.modes[m]);
    for (size_t e = 0; e + 1 < edges.size(); ++e)
      if (r >= edges[e] && r < edges[e + 1]) {
        spectrum[e] += 2.0 * a.mean_action_time[m];
        cnt[e] += 1;
      }
  }
  for (size_t e = 0; e < spectrum.size(); ++e)
    spectrum[e] = cnt[e] > 0 ? spectrum[e] / cnt[e] : std::numeric_limits<double>::quiet_NaN();
  write_spectrum_csv(dir / "spectrum.csv", edges, spectrum);
  if (args.plots) write_text(dir / "spectrum.gp", spectrum_gnuplot_script());

  std::printf("worst KS between initial conditions: %.4f\n", worst_cross);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"resonant-averaging toolkit for the damped/driven NLS on a torus"};
  app.require_subcommand(1);

  CommonArgs args;
  bool corrupt_table = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", args.out_dir, "output directory (overrides config)");
    sub->add_option("--threads", args.threads, "worker threads (default: all)");
    sub->add_option("--seed", args.seed, "master seed (overrides config)")
        ->each([&](const std::string&) { args.seed_given = true; });
    sub->add_flag("--plots", args.plots, "emit gnuplot scripts");
  };

  CLI::App* resonances = app.add_subcommand("resonances", "enumerate the resonance table");
  add_common(resonances);
  CLI::App* check = app.add_subcommand("check", "run the invariant suite");
  add_common(check);
  check->add_flag("--corrupt-table", corrupt_table)->group("");  // test hook
  CLI::App* simulate = app.add_subcommand("simulate", "run one ensemble");
  add_common(simulate);
  CLI::App* compare = app.add_subcommand("compare", "full vs effective along a nu ladder");
  add_common(compare);
  CLI::App* stationary = app.add_subcommand("stationary", "stationary-law estimation");
  add_common(stationary);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (resonances->parsed()) return cmd_resonances(args);
    if (check->parsed()) return cmd_check(args, corrupt_table);
    if (simulate->parsed()) return cmd_simulate(args);
    if (compare->parsed()) return cmd_compare(args);
    if (stationary->parsed()) return cmd_stationary(args);
  } catch (const BudgetError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
