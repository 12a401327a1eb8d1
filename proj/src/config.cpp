#include "rnls/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace rnls {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError("config: '" + where + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.contains(it.key()))
      throw ConfigError("config: unknown key '" + where + "." + it.key() + "'");
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: bad value for '" + key + "'");
  }
}

WaveIndex parse_wave(const json& j, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d)
    throw ConfigError("config: wave index must be an array of length d");
  WaveIndex l;
  for (int i = 0; i < d; ++i) l[i] = j.at(static_cast<size_t>(i)).get<int>();
  return l;
}

std::vector<std::pair<WaveIndex, int>> parse_sparse(const json& j, int d) {
  if (!j.is_array() || j.empty()) throw ConfigError("config: phase vector must be a nonempty array");
  std::vector<std::pair<WaveIndex, int>> out;
  for (const auto& e : j) {
    require_keys(e, "observables.(vector entry)", {"l", "c"});
    if (!e.contains("l") || !e.contains("c"))
      throw ConfigError("config: phase vector entries need 'l' and 'c'");
    out.emplace_back(parse_wave(e.at("l"), d), e.at("c").get<int>());
  }
  return out;
}

}  // namespace

SpectralField InitialSpec::build(const SpectralGrid& grid) const {
  SpectralField f(grid);
  if (kind == Kind::smooth) {
    for (int k = 0; k < grid.size(); ++k) {
      double amp = amplitude * std::pow(1.0 + grid.lambda_int(k), -decay);
      f.v[static_cast<size_t>(k)] = std::polar(amp, phase_step * k);
    }
  }
  if (h0_norm) {
    double cur = norm0(f);
    if (cur == 0.0) {
      if (*h0_norm != 0.0) throw ConfigError("initial: cannot rescale the zero field");
    } else {
      double c = *h0_norm / cur;
      for (auto& z : f.v) z *= c;
    }
  }
  return f;
}

nlohmann::ordered_json InitialSpec::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind == Kind::zero ? "zero" : "smooth";
  j["amplitude"] = amplitude;
  j["decay"] = decay;
  j["phase_step"] = phase_step;
  if (h0_norm) j["h0_norm"] = *h0_norm;
  return j;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("config: cannot open " + p.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  return from_json(j);
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  require_keys(j, "(top)", {"grid", "model", "run", "observables", "initial", "output"});

  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    require_keys(g, "grid", {"d", "N", "L"});
    c.d = get_or(g, "d", c.d);
    c.N = get_or(g, "N", c.N);
    c.L = get_or(g, "L", c.L);
  }

  if (j.contains("model")) {
    const auto& m = j.at("model");
    require_keys(m, "model", {"q_star", "rho", "damping", "noise"});
    c.q_star = get_or(m, "q_star", c.q_star);
    c.rho = get_or(m, "rho", c.rho);
    if (m.contains("damping")) {
      const auto& dj = m.at("damping");
      std::string kind = get_or<std::string>(dj, "kind", "affine");
      if (kind == "affine") {
        require_keys(dj, "model.damping", {"kind", "c0", "c1"});
        c.damping.kind = DampingSpec::Kind::affine;
        c.damping.c0 = get_or(dj, "c0", 1.0);
        c.damping.c1 = get_or(dj, "c1", 1.0);
      } else if (kind == "power") {
        require_keys(dj, "model.damping", {"kind", "c0", "p"});
        c.damping.kind = DampingSpec::Kind::power;
        c.damping.c0 = get_or(dj, "c0", 1.0);
        c.damping.c1 = get_or(dj, "p", 1.0);
      } else {
        throw ConfigError("config: damping.kind must be 'affine' or 'power'");
      }
    }
    if (m.contains("noise")) {
      const auto& nj = m.at("noise");
      std::string kind = get_or<std::string>(nj, "kind", "gaussian");
      if (kind == "gaussian") {
        require_keys(nj, "model.noise", {"kind", "B0", "alpha"});
        c.noise.kind = NoiseSpec::Kind::gaussian;
        c.noise.B0 = get_or(nj, "B0", 1.0);
        c.noise.param = get_or(nj, "alpha", 1.0);
      } else if (kind == "polynomial") {
        require_keys(nj, "model.noise", {"kind", "B0", "p"});
        c.noise.kind = NoiseSpec::Kind::polynomial;
        c.noise.B0 = get_or(nj, "B0", 1.0);
        c.noise.param = get_or(nj, "p", 1.0);
      } else {
        throw ConfigError("config: noise.kind must be 'gaussian' or 'polynomial'");
      }
    }
  }

  if (j.contains("run")) {
    const auto& r = j.at("run");
    require_keys(r, "run",
                 {"equation", "nu", "nu_ladder", "T", "dt", "max_dt", "steps_per_period", "samples",
                  "M", "seed", "snapshots", "burn_in", "horizon", "paths", "sample_spacing",
                  "snapshot_M", "budget_ops"});
    std::string eq = get_or<std::string>(r, "equation", "effective");
    if (eq == "full")
      c.equation = EquationKind::full;
    else if (eq == "effective")
      c.equation = EquationKind::effective;
    else
      throw ConfigError("config: run.equation must be 'full' or 'effective'");
    c.nu = get_or(r, "nu", c.nu);
    c.nu_ladder = get_or(r, "nu_ladder", c.nu_ladder);
    c.T = get_or(r, "T", c.T);
    c.dt = get_or(r, "dt", c.dt);
    c.max_dt = get_or(r, "max_dt", c.max_dt);
    c.steps_per_period = get_or(r, "steps_per_period", c.steps_per_period);
    c.samples = get_or(r, "samples", c.samples);
    c.M = get_or(r, "M", c.M);
    c.seed = get_or(r, "seed", c.seed);
    c.snapshots = get_or(r, "snapshots", c.snapshots);
    c.burn_in = get_or(r, "burn_in", c.burn_in);
    c.horizon = get_or(r, "horizon", c.horizon);
    c.paths = get_or(r, "paths", c.paths);
    c.sample_spacing = get_or(r, "sample_spacing", c.sample_spacing);
    c.snapshot_M = get_or(r, "snapshot_M", c.snapshot_M);
    c.budget_ops = get_or(r, "budget_ops", c.budget_ops);
  }

  if (j.contains("observables")) {
    const auto& o = j.at("observables");
    require_keys(o, "observables", {"modes", "resonant", "nonresonant", "shells"});
    if (o.contains("modes")) {
      if (o.at("modes").is_string()) {
        if (o.at("modes").get<std::string>() != "all")
          throw ConfigError("config: observables.modes must be 'all' or a list");
        c.modes_all = true;
      } else {
        c.modes_all = false;
        for (const auto& e : o.at("modes")) c.mode_list.push_back(parse_wave(e, c.d));
      }
    }
    if (o.contains("resonant")) {
      c.resonant_given = true;
      for (const auto& e : o.at("resonant")) c.resonant_sparse.push_back(parse_sparse(e, c.d));
    }
    if (o.contains("nonresonant")) {
      c.nonresonant_given = true;
      for (const auto& e : o.at("nonresonant")) c.nonresonant_sparse.push_back(parse_sparse(e, c.d));
    }
    c.shells = get_or(o, "shells", c.shells);
  }

  if (j.contains("initial")) {
    const auto& i = j.at("initial");
    require_keys(i, "initial", {"kind", "amplitude", "decay", "phase_step", "h0_norm"});
    std::string kind = get_or<std::string>(i, "kind", "smooth");
    if (kind == "zero")
      c.initial.kind = InitialSpec::Kind::zero;
    else if (kind == "smooth")
      c.initial.kind = InitialSpec::Kind::smooth;
    else
      throw ConfigError("config: initial.kind must be 'zero' or 'smooth'");
    c.initial.amplitude = get_or(i, "amplitude", c.initial.amplitude);
    c.initial.decay = get_or(i, "decay", c.initial.decay);
    c.initial.phase_step = get_or(i, "phase_step", c.initial.phase_step);
    if (i.contains("h0_norm")) c.initial.h0_norm = i.at("h0_norm").get<double>();
  }

  if (j.contains("output")) {
    const auto& o = j.at("output");
    require_keys(o, "output", {"dir"});
    c.out_dir = get_or<std::string>(o, "dir", c.out_dir);
  }

  // validation beyond type checks
  if (c.M < 1) throw ConfigError("config: run.M must be >= 1");
  if (c.samples < 1) throw ConfigError("config: run.samples must be >= 1");
  if (!(c.T > 0.0)) throw ConfigError("config: run.T must be positive");
  c.damping.validate();
  c.noise.validate();
  return c;
}

nlohmann::ordered_json ExperimentConfig::resolved_json() const {
  nlohmann::ordered_json j;
  j["grid"] = {{"d", d}, {"N", N}, {"L", L}};
  j["model"]["q_star"] = q_star;
  j["model"]["rho"] = rho;
  j["model"]["damping"] = damping.to_json();
  j["model"]["noise"] = noise.to_json();
  auto& r = j["run"];
  r["equation"] = equation == EquationKind::full ? "full" : "effective";
  r["nu"] = nu;
  r["nu_ladder"] = nu_ladder;
  r["T"] = T;
  r["dt"] = dt;
  r["max_dt"] = max_dt;
  r["steps_per_period"] = steps_per_period;
  r["samples"] = samples;
  r["M"] = M;
  r["seed"] = seed;
  r["snapshots"] = snapshots;
  r["burn_in"] = burn_in;
  r["horizon"] = horizon;
  r["paths"] = paths;
  r["sample_spacing"] = sample_spacing;
  r["snapshot_M"] = snapshot_M;
  r["budget_ops"] = budget_ops;
  auto& o = j["observables"];
  if (modes_all) {
    o["modes"] = "all";
  } else {
    nlohmann::ordered_json lst = nlohmann::ordered_json::array();
    for (const auto& l : mode_list) {
      nlohmann::ordered_json v = nlohmann::ordered_json::array();
      for (int i = 0; i < d; ++i) v.push_back(l[i]);
      lst.push_back(v);
    }
    o["modes"] = lst;
  }
  auto sparse_json = [&](const std::vector<std::vector<std::pair<WaveIndex, int>>>& vs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : vs) {
      nlohmann::ordered_json sv = nlohmann::ordered_json::array();
      for (const auto& [l, coeff] : s) {
        nlohmann::ordered_json e;
        nlohmann::ordered_json lv = nlohmann::ordered_json::array();
        for (int i = 0; i < d; ++i) lv.push_back(l[i]);
        e["l"] = lv;
        e["c"] = coeff;
        sv.push_back(e);
      }
      arr.push_back(sv);
    }
    return arr;
  };
  o["resonant"] = sparse_json(resonant_sparse);
  o["nonresonant"] = sparse_json(nonresonant_sparse);
  o["shells"] = shells;
  j["initial"] = initial.to_json();
  j["output"]["dir"] = out_dir;
  return j;
}

SpectralGrid ExperimentConfig::make_grid() const { return SpectralGrid(d, N, L); }

ModelParams ExperimentConfig::make_params(const SpectralGrid& grid) const {
  return ModelParams(grid, q_star, rho, damping, noise);
}

namespace {

std::vector<int> densify(const SpectralGrid& grid,
                         const std::vector<std::pair<WaveIndex, int>>& sparse) {
  std::vector<int> s(static_cast<size_t>(grid.size()), 0);
  for (const auto& [l, c] : sparse) {
    int k = grid.flat_of(l);
    if (k < 0) throw ConfigError("observables: phase-vector mode outside the grid");
    s[static_cast<size_t>(k)] += c;
  }
  return s;
}

}  // namespace

ObservableSpec ExperimentConfig::make_observables(const SpectralGrid& grid) const {
  ObservableSpec obs;
  if (modes_all) {
    obs = ObservableSpec::all_modes(grid);
  } else {
    for (const auto& l : mode_list) {
      int k = grid.flat_of(l);
      if (k < 0) throw ConfigError("observables: tracked mode outside the grid");
      obs.modes.push_back(k);
    }
    if (obs.modes.empty()) throw ConfigError("observables: empty mode list");
  }

  for (const auto& s : resonant_sparse) {
    auto dense = densify(grid, s);
    if (lambda_dot(grid, dense) != 0)
      throw ConfigError("observables: 'resonant' vector has Lambda.s != 0");
    obs.resonant.push_back(std::move(dense));
  }
  for (const auto& s : nonresonant_sparse) {
    auto dense = densify(grid, s);
    if (lambda_dot(grid, dense) == 0)
      throw ConfigError("observables: 'nonresonant' vector has Lambda.s = 0");
    obs.nonresonant.push_back(std::move(dense));
  }

  if (!resonant_given) {
    // default: one short and one long vector from the order-(2q*+2) module
    auto module = enumerate_resonance_module(grid, std::min(2 * q_star + 2, 4));
    const std::vector<int>* pick2 = nullptr;
    const std::vector<int>* pick4 = nullptr;
    for (const auto& s : module) {
      int n1 = l1_norm(s);
      if (n1 == 2 && !pick2) pick2 = &s;
      if (n1 == 4 && !pick4) pick4 = &s;
      if (pick2 && pick4) break;
    }
    if (pick2) obs.resonant.push_back(*pick2);
    if (pick4) obs.resonant.push_back(*pick4);
  }
  if (!nonresonant_given) {
    for (int k = 0; k < grid.size(); ++k)
      if (grid.lambda_int(k) != 0) {
        std::vector<int> s(static_cast<size_t>(grid.size()), 0);
        s[static_cast<size_t>(k)] = 1;
        obs.nonresonant.push_back(std::move(s));
        break;
      }
  }
  obs.snapshot_stride = snapshots ? 1 : 0;
  return obs;
}

std::vector<double> ExperimentConfig::make_shells(const SpectralGrid& grid) const {
  if (!shells.empty()) {
    for (size_t i = 0; i + 1 < shells.size(); ++i)
      if (!(shells[i] < shells[i + 1])) throw ConfigError("observables: shells must increase");
    return shells;
  }
  // midpoints between the distinct mode radii
  std::set<double> radii;
  for (int k = 0; k < grid.size(); ++k) radii.insert(grid.radius(k));
  std::vector<double> r(radii.begin(), radii.end());
  std::vector<double> edges;
  edges.push_back(-0.5 / grid.period());
  for (size_t i = 0; i + 1 < r.size(); ++i) edges.push_back(0.5 * (r[i] + r[i + 1]));
  edges.push_back(r.back() + 0.5 / grid.period());
  return edges;
}

}  // namespace rnls
