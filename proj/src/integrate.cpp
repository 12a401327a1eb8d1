#include "rnls/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rnls {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  if (a >= two_pi) a = 0.0;
  return a;
}
}  // namespace

ModelParams::ModelParams(const SpectralGrid& g, int q, double rho_, DampingSpec d, NoiseSpec ns)
    : grid(&g), q_star(q), rho(rho_), damping(d), noise(ns) {
  if (q_star < 1) throw ConfigError("model: q* must be >= 1");
  if (!(rho >= 0.0)) throw ConfigError("model: rho must be nonnegative");
  gamma = damping_spectrum(g, damping);
  b = noise_spectrum(g, noise);
}

bool ModelParams::outside_wellposed_range() const {
  int d = grid->dim();
  if (d < 3) return false;
  return static_cast<double>(q_star) >= 2.0 / (d - 2);
}

ObservableSpec ObservableSpec::all_modes(const SpectralGrid& g) {
  ObservableSpec o;
  o.modes.resize(static_cast<size_t>(g.size()));
  for (int k = 0; k < g.size(); ++k) o.modes[static_cast<size_t>(k)] = k;
  return o;
}

TimeGrid make_time_grid(double T, double dt_target, int samples) {
  if (!(T > 0.0) || !(dt_target > 0.0) || samples < 1)
    throw ConfigError("time grid: T, dt and sample count must be positive");
  double per_sample = T / samples;
  int steps = std::max(1, static_cast<int>(std::ceil(per_sample / dt_target - 1e-9)));
  return TimeGrid{per_sample / steps, samples, steps};
}

void check_step(const ModelParams& params, double dt) {
  double gmax = *std::max_element(params.gamma.begin(), params.gamma.end());
  if (!(dt * gmax < 1.0))
    throw ConfigError("integrator: dt * max gamma must stay below 1 (dt = " + std::to_string(dt) + ")");
}

double full_equation_dt_bound(const ModelParams& params, double nu, int steps_per_period) {
  const SpectralGrid& g = *params.grid;
  int maxfreq = (2 * params.q_star + 2) * g.max_lambda_int();
  double L2 = g.period() * g.period();
  return nu * two_pi * L2 / (steps_per_period * maxfreq);
}

namespace {

struct Recorder {
  const ObservableSpec* obs;
  TrajectoryRecord* rec;
  const SpectralGrid* grid;
  int samples;

  Recorder(const ObservableSpec& o, TrajectoryRecord& r, const SpectralGrid& g, double T, int m)
      : obs(&o), rec(&r), grid(&g), samples(m) {
    rec->tau.resize(static_cast<size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) rec->tau[static_cast<size_t>(i)] = T * i / m;
    rec->actions.assign(o.modes.size(), std::vector<double>(static_cast<size_t>(m) + 1, nan()));
    rec->phi_res.assign(o.resonant.size(), std::vector<double>(static_cast<size_t>(m) + 1, nan()));
    rec->sphi.assign(o.nonresonant.size(), std::vector<double>(static_cast<size_t>(m) + 1, nan()));
    if (o.track_norm) rec->norm_h0.assign(static_cast<size_t>(m) + 1, nan());
    if (o.track_residual)
      rec->residual.assign(o.modes.size(), std::vector<double>(static_cast<size_t>(m) + 1, nan()));
  }

  static double nan() { return std::numeric_limits<double>::quiet_NaN(); }

  // theta_lambda: accumulated fast phase per unit lam_int; zero for the
  // effective equation, nu^{-1} tau / L^2 for the interaction representation.
  void sample(int i, const SpectralField& state, double theta_lambda,
              const std::vector<double>* residual_abs) {
    for (size_t m = 0; m < obs->modes.size(); ++m)
      rec->actions[m][static_cast<size_t>(i)] = 0.5 * std::norm(state.v[static_cast<size_t>(obs->modes[m])]);
    auto phase_obs = [&](const std::vector<int>& s) {
      double acc = 0.0;
      long long lam_dot = 0;
      for (size_t k = 0; k < s.size(); ++k) {
        if (s[k] == 0) continue;
        if (std::abs(state.v[k]) < phase_floor) return nan();
        acc += s[k] * phase_of(state.v[k]);
        lam_dot += static_cast<long long>(s[k]) * grid->lambda_int(static_cast<int>(k));
      }
      return wrap_angle(acc - theta_lambda * static_cast<double>(lam_dot));
    };
    for (size_t j = 0; j < obs->resonant.size(); ++j)
      rec->phi_res[j][static_cast<size_t>(i)] = phase_obs(obs->resonant[j]);
    for (size_t j = 0; j < obs->nonresonant.size(); ++j)
      rec->sphi[j][static_cast<size_t>(i)] = phase_obs(obs->nonresonant[j]);
    if (obs->track_norm) rec->norm_h0[static_cast<size_t>(i)] = norm0(state);
    if (obs->track_residual && residual_abs)
      for (size_t m = 0; m < obs->modes.size(); ++m)
        rec->residual[m][static_cast<size_t>(i)] = (*residual_abs)[static_cast<size_t>(obs->modes[m])];
    if (obs->snapshot_stride > 0 && i % obs->snapshot_stride == 0) rec->snapshots.push_back(state);
  }
};

bool blown_up(const SpectralField& f) {
  double s = sobolev_norm_sq(f, 0.0);
  return !(s <= blowup_threshold * blowup_threshold);
}

}  // namespace

TrajectoryRecord integrate_effective(const ModelParams& params, const ResonanceTable& table,
                                     const SpectralField& v0, double T, const TimeGrid& tg,
                                     GaussianRng& rng, const ObservableSpec& obs) {
  check_step(params, tg.dt);
  const SpectralGrid& grid = *params.grid;
  const int n = grid.size();
  const double dt = tg.dt, sdt = std::sqrt(tg.dt);

  std::vector<double> decay(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) decay[static_cast<size_t>(k)] = std::exp(-params.gamma[static_cast<size_t>(k)] * dt);

  TrajectoryRecord rec;
  Recorder recorder(obs, rec, grid, T, tg.samples);
  SpectralField v = v0;
  recorder.sample(0, v, 0.0, nullptr);

  std::vector<cd> drift(static_cast<size_t>(n), cd{0.0, 0.0});
  for (int s = 1; s <= tg.samples && !rec.blown_up; ++s) {
    for (int j = 0; j < tg.steps_per_sample; ++j) {
      if (params.rho != 0.0) resonant_field_direct_into(table, v.v, params.rho, drift);
      for (int k = 0; k < n; ++k) {
        cd z = v.v[static_cast<size_t>(k)];
        if (params.rho != 0.0) z += drift[static_cast<size_t>(k)] * dt;
        z *= decay[static_cast<size_t>(k)];
        double re = rng.normal(), im = rng.normal();
        v.v[static_cast<size_t>(k)] = z + params.b[static_cast<size_t>(k)] * sdt * cd{re, im};
      }
      if (blown_up(v)) {
        rec.blown_up = true;
        rec.blowup_tau = rec.tau[static_cast<size_t>(s) - 1] + (j + 1) * dt;
        break;
      }
    }
    if (!rec.blown_up) recorder.sample(s, v, 0.0, nullptr);
  }
  rec.final_state = v;
  return rec;
}

TrajectoryRecord integrate_full(const ModelParams& params, const ResonanceTable& table,
                                NonlinearityEngine& engine, double nu, const SpectralField& v0,
                                double T, const TimeGrid& tg, GaussianRng& rng,
                                const ObservableSpec& obs) {
  if (!(nu > 0.0)) throw ConfigError("full equation: nu must be positive");
  check_step(params, tg.dt);
  double bound = full_equation_dt_bound(params, nu);
  if (tg.dt > bound * (1.0 + 1e-12))
    throw ConfigError("full equation: dt = " + std::to_string(tg.dt) +
                      " exceeds the oscillation guard " + std::to_string(bound));

  const SpectralGrid& grid = *params.grid;
  const int n = grid.size();
  const auto& lam = grid.lambda_ints();
  const double dt = tg.dt, sdt = std::sqrt(tg.dt);
  const double theta_rate = 1.0 / (nu * grid.period() * grid.period());

  std::vector<double> decay(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) decay[static_cast<size_t>(k)] = std::exp(-params.gamma[static_cast<size_t>(k)] * dt);

  TrajectoryRecord rec;
  Recorder recorder(obs, rec, grid, T, tg.samples);
  SpectralField a = v0;  // a(0) = v(0)

  std::vector<double> residual_max(static_cast<size_t>(n), 0.0);
  std::vector<cd> residual_sum(static_cast<size_t>(n), cd{0.0, 0.0});
  recorder.sample(0, a, 0.0, obs.track_residual ? &residual_max : nullptr);

  std::vector<cd> w(static_cast<size_t>(n)), drift(static_cast<size_t>(n), cd{0.0, 0.0});
  std::vector<cd> r0(static_cast<size_t>(n));
  double tau = 0.0;
  for (int s = 1; s <= tg.samples && !rec.blown_up; ++s) {
    for (int j = 0; j < tg.steps_per_sample; ++j) {
      if (params.rho != 0.0) {
        double theta = theta_rate * tau;
        // drift = Psi_{theta Lambda} P0(Psi_{-theta Lambda} a)  (= R0 + Rosc)
        rotate_lambda_into(a.v, lam, -theta, w);
        engine.apply(w, params.rho, drift);
        for (int k = 0; k < n; ++k)
          drift[static_cast<size_t>(k)] *= std::polar(1.0, theta * lam[static_cast<size_t>(k)]);
        if (obs.track_residual) {
          resonant_field_direct_into(table, a.v, params.rho, r0);
          for (int k = 0; k < n; ++k)
            residual_sum[static_cast<size_t>(k)] += (drift[static_cast<size_t>(k)] - r0[static_cast<size_t>(k)]) * dt;
        }
      }
      for (int k = 0; k < n; ++k) {
        cd z = a.v[static_cast<size_t>(k)];
        if (params.rho != 0.0) z += drift[static_cast<size_t>(k)] * dt;
        z *= decay[static_cast<size_t>(k)];
        double re = rng.normal(), im = rng.normal();
        a.v[static_cast<size_t>(k)] = z + params.b[static_cast<size_t>(k)] * sdt * cd{re, im};
      }
      tau += dt;
      if (blown_up(a)) {
        rec.blown_up = true;
        rec.blowup_tau = tau;
        break;
      }
    }
    if (!rec.blown_up) {
      for (int k = 0; k < n; ++k)
        residual_max[static_cast<size_t>(k)] =
            std::max(residual_max[static_cast<size_t>(k)], std::abs(residual_sum[static_cast<size_t>(k)]));
      recorder.sample(s, a, theta_rate * tau, obs.track_residual ? &residual_max : nullptr);
    }
  }
  // hand back v rather than a
  rec.final_state = SpectralField(grid);
  rotate_lambda_into(a.v, lam, -theta_rate * tau, rec.final_state.v);
  rec.final_state.grid = &grid;
  return rec;
}

TrajectoryRecord integrate_resonant_flow(const ModelParams& params, const ResonanceTable& table,
                                         const SpectralField& v0, double T, double h, int samples,
                                         const ObservableSpec& obs) {
  const SpectralGrid& grid = *params.grid;
  const int n = grid.size();
  TimeGrid tg = make_time_grid(T, h, samples);

  TrajectoryRecord rec;
  Recorder recorder(obs, rec, grid, T, tg.samples);
  SpectralField v = v0;
  recorder.sample(0, v, 0.0, nullptr);

  std::vector<cd> k1(static_cast<size_t>(n)), k2(static_cast<size_t>(n)), k3(static_cast<size_t>(n)),
      k4(static_cast<size_t>(n)), tmp(static_cast<size_t>(n));
  const double dt = tg.dt;
  for (int s = 1; s <= tg.samples && !rec.blown_up; ++s) {
    for (int j = 0; j < tg.steps_per_sample; ++j) {
      resonant_field_direct_into(table, v.v, params.rho, k1);
      for (int k = 0; k < n; ++k) tmp[static_cast<size_t>(k)] = v.v[static_cast<size_t>(k)] + 0.5 * dt * k1[static_cast<size_t>(k)];
      resonant_field_direct_into(table, tmp, params.rho, k2);
      for (int k = 0; k < n; ++k) tmp[static_cast<size_t>(k)] = v.v[static_cast<size_t>(k)] + 0.5 * dt * k2[static_cast<size_t>(k)];
      resonant_field_direct_into(table, tmp, params.rho, k3);
      for (int k = 0; k < n; ++k) tmp[static_cast<size_t>(k)] = v.v[static_cast<size_t>(k)] + dt * k3[static_cast<size_t>(k)];
      resonant_field_direct_into(table, tmp, params.rho, k4);
      for (int k = 0; k < n; ++k)
        v.v[static_cast<size_t>(k)] += dt / 6.0 *
            (k1[static_cast<size_t>(k)] + 2.0 * k2[static_cast<size_t>(k)] + 2.0 * k3[static_cast<size_t>(k)] + k4[static_cast<size_t>(k)]);
      if (blown_up(v)) {
        rec.blown_up = true;
        rec.blowup_tau = rec.tau[static_cast<size_t>(s) - 1] + (j + 1) * dt;
        break;
      }
    }
    if (!rec.blown_up) recorder.sample(s, v, 0.0, nullptr);
  }
  rec.final_state = v;
  return rec;
}

double h0_invariant(const SpectralField& f) {
  double acc = 0.0;
  for (const auto& z : f.v) acc += std::norm(z);
  return 0.5 * acc;
}

double h1_invariant(const SpectralField& f) {
  double acc = 0.0;
  for (int k = 0; k < f.size(); ++k) acc += f.grid->lambda(k) * std::norm(f.v[static_cast<size_t>(k)]);
  return 0.5 * acc;
}

double momentum_invariant(const SpectralField& f, int axis) {
  if (axis < 0 || axis >= f.grid->dim()) throw std::invalid_argument("momentum: bad axis");
  double acc = 0.0;
  for (int k = 0; k < f.size(); ++k)
    acc += (f.grid->index(k)[axis] / f.grid->period()) * std::norm(f.v[static_cast<size_t>(k)]);
  return 0.5 * acc;
}

}  // namespace rnls
