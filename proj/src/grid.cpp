#include "rnls/grid.hpp"

#include <cmath>

namespace rnls {

SpectralGrid::SpectralGrid(int d, int N, double L) : d_(d), N_(N), L_(L) {
  if (d < 1 || d > 3) throw ConfigError("grid: dimension must be 1, 2 or 3");
  if (N < 1) throw ConfigError("grid: cutoff N must be >= 1");
  if (!(L > 0.0)) throw ConfigError("grid: period L must be positive");
  inv_L2_ = 1.0 / (L * L);

  int side = 2 * N + 1;
  n_ = 1;
  for (int i = 0; i < d; ++i) n_ *= side;
  idx_.reserve(static_cast<size_t>(n_));
  lam_.reserve(static_cast<size_t>(n_));

  WaveIndex l;
  for (int i0 = -N; i0 <= N; ++i0) {
    l[0] = i0;
    if (d == 1) {
      idx_.push_back(l);
      lam_.push_back(i0 * i0);
      continue;
    }
    for (int i1 = -N; i1 <= N; ++i1) {
      l[1] = i1;
      if (d == 2) {
        idx_.push_back(l);
        lam_.push_back(i0 * i0 + i1 * i1);
        continue;
      }
      for (int i2 = -N; i2 <= N; ++i2) {
        l[2] = i2;
        idx_.push_back(l);
        lam_.push_back(i0 * i0 + i1 * i1 + i2 * i2);
      }
    }
  }
}

bool SpectralGrid::contains(const WaveIndex& l) const {
  for (int i = 0; i < d_; ++i)
    if (l[i] < -N_ || l[i] > N_) return false;
  for (int i = d_; i < 3; ++i)
    if (l[i] != 0) return false;
  return true;
}

int SpectralGrid::flat_of(const WaveIndex& l) const {
  int side = 2 * N_ + 1;
  int f = 0;
  for (int i = 0; i < d_; ++i) {
    int li = l[i];
    if (li < -N_ || li > N_) return -1;
    f = f * side + (li + N_);
  }
  for (int i = d_; i < 3; ++i)
    if (l[i] != 0) return -1;
  return f;
}

int SpectralGrid::flat(const WaveIndex& l) const {
  int f = flat_of(l);
  if (f < 0) throw std::out_of_range("grid: wave index outside cutoff");
  return f;
}

double SpectralGrid::radius(int flat) const {
  return std::sqrt(static_cast<double>(lam_[static_cast<size_t>(flat)])) / L_;
}

nlohmann::ordered_json SpectralGrid::to_json() const {
  nlohmann::ordered_json j;
  j["d"] = d_;
  j["N"] = N_;
  j["L"] = L_;
  j["modes"] = n_;
  nlohmann::ordered_json idx = nlohmann::ordered_json::array();
  nlohmann::ordered_json lam = nlohmann::ordered_json::array();
  for (int k = 0; k < n_; ++k) {
    nlohmann::ordered_json v = nlohmann::ordered_json::array();
    for (int i = 0; i < d_; ++i) v.push_back(idx_[static_cast<size_t>(k)][i]);
    idx.push_back(v);
    lam.push_back(lam_[static_cast<size_t>(k)]);
  }
  j["l"] = idx;
  j["lambda_int"] = lam;
  return j;
}

void DampingSpec::validate() const {
  if (!(c0 > 0.0)) throw ConfigError("damping: constant term must be positive");
  if (!(c1 > 0.0))
    throw ConfigError(kind == Kind::affine ? "damping: slope must be positive"
                                           : "damping: exponent must be positive");
}

nlohmann::ordered_json DampingSpec::to_json() const {
  nlohmann::ordered_json j;
  if (kind == Kind::affine) {
    j["kind"] = "affine";
    j["c0"] = c0;
    j["c1"] = c1;
  } else {
    j["kind"] = "power";
    j["c0"] = c0;
    j["p"] = c1;
  }
  return j;
}

double damping_value(double lambda, const DampingSpec& spec) {
  spec.validate();
  if (lambda < 0.0) throw ConfigError("damping: lambda must be nonnegative");
  if (spec.kind == DampingSpec::Kind::affine) return spec.c0 + spec.c1 * lambda;
  return spec.c0 + std::pow(lambda, spec.c1);
}

std::vector<double> damping_spectrum(const SpectralGrid& grid, const DampingSpec& spec) {
  spec.validate();
  std::vector<double> g(static_cast<size_t>(grid.size()));
  for (int k = 0; k < grid.size(); ++k) g[static_cast<size_t>(k)] = damping_value(grid.lambda(k), spec);
  return g;
}

void NoiseSpec::validate() const {
  if (!(B0 > 0.0)) throw ConfigError("noise: B0 must be positive");
}

nlohmann::ordered_json NoiseSpec::to_json() const {
  nlohmann::ordered_json j;
  if (kind == Kind::gaussian) {
    j["kind"] = "gaussian";
    j["B0"] = B0;
    j["alpha"] = param;
  } else {
    j["kind"] = "polynomial";
    j["B0"] = B0;
    j["p"] = param;
  }
  return j;
}

std::vector<double> noise_spectrum(const SpectralGrid& grid, const NoiseSpec& spec) {
  spec.validate();
  std::vector<double> b(static_cast<size_t>(grid.size()));
  for (int k = 0; k < grid.size(); ++k) {
    double lam = static_cast<double>(grid.lambda_int(k));
    b[static_cast<size_t>(k)] = spec.kind == NoiseSpec::Kind::gaussian
                                    ? spec.B0 * std::exp(-spec.param * lam)
                                    : spec.B0 * std::pow(1.0 + lam, -spec.param);
  }
  return b;
}

}  // namespace rnls
