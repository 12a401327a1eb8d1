#include "rnls/nonlinearity.hpp"

#include <fftw3.h>

#include <cmath>
#include <algorithm>
#include <mutex>

namespace rnls {

namespace {
std::mutex planner_mutex;

int wrap(int l, int G) { return l >= 0 ? l : l + G; }
}  // namespace

NonlinearityEngine::NonlinearityEngine(const SpectralGrid& grid, int q_star)
    : grid_(&grid), q_(q_star) {
  if (q_star < 1) throw ConfigError("nonlinearity: q* must be >= 1");
  G_ = (2 * q_star + 2) * grid.cutoff() + 1;
  Gd_ = 1;
  for (int i = 0; i < grid.dim(); ++i) Gd_ *= G_;
  buf_.assign(static_cast<size_t>(Gd_), cd{0.0, 0.0});

  pad_at_.resize(static_cast<size_t>(grid.size()));
  for (int k = 0; k < grid.size(); ++k) {
    const WaveIndex& l = grid.index(k);
    long long p = 0;
    for (int i = 0; i < grid.dim(); ++i) p = p * G_ + wrap(l[i], G_);
    pad_at_[static_cast<size_t>(k)] = static_cast<int>(p);
  }

  int dims[3] = {G_, G_, G_};
  auto* b = reinterpret_cast<fftw_complex*>(buf_.data());
  std::lock_guard<std::mutex> lock(planner_mutex);
  plan_bwd_ = fftw_plan_dft(grid.dim(), dims, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
  plan_fwd_ = fftw_plan_dft(grid.dim(), dims, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
  if (!plan_bwd_ || !plan_fwd_) throw std::runtime_error("nonlinearity: FFTW planning failed");
}

NonlinearityEngine::~NonlinearityEngine() {
  std::lock_guard<std::mutex> lock(planner_mutex);
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

NonlinearityEngine::NonlinearityEngine(NonlinearityEngine&& o) noexcept
    : grid_(o.grid_),
      q_(o.q_),
      G_(o.G_),
      Gd_(o.Gd_),
      pad_at_(std::move(o.pad_at_)),
      buf_(std::move(o.buf_)),
      plan_fwd_(o.plan_fwd_),
      plan_bwd_(o.plan_bwd_) {
  o.plan_fwd_ = nullptr;
  o.plan_bwd_ = nullptr;
}

void NonlinearityEngine::fill_padded(std::span<const cd> v) {
  std::fill(buf_.begin(), buf_.end(), cd{0.0, 0.0});
  for (size_t k = 0; k < v.size(); ++k) buf_[static_cast<size_t>(pad_at_[k])] = v[k];
}

void NonlinearityEngine::apply(std::span<const cd> v, double rho, std::span<cd> out) {
  if (static_cast<int>(v.size()) != grid_->size() || out.size() != v.size())
    throw std::invalid_argument("nonlinearity: dimension mismatch");

  fill_padded(v);
  auto* b = reinterpret_cast<fftw_complex*>(buf_.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), b, b);  // u_j = sum v_l e^{+i l x_j}

  for (auto& u : buf_) {
    double a2 = std::norm(u);
    double w = 1.0;
    for (int j = 0; j < q_; ++j) w *= a2;  // |u|^{2q*}
    u *= w;
  }

  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), b, b);

  const double scale = 1.0 / static_cast<double>(Gd_);
  const cd mi_rho{0.0, -rho};  // -i rho
  for (size_t k = 0; k < out.size(); ++k)
    out[k] = mi_rho * (buf_[static_cast<size_t>(pad_at_[k])] * scale);
}

SpectralField NonlinearityEngine::apply(const SpectralField& f, double rho) {
  SpectralField out(*grid_);
  apply(f.v, rho, out.v);
  return out;
}

double NonlinearityEngine::hamiltonian_full(std::span<const cd> v) {
  if (static_cast<int>(v.size()) != grid_->size())
    throw std::invalid_argument("hamiltonian: dimension mismatch");
  fill_padded(v);
  auto* b = reinterpret_cast<fftw_complex*>(buf_.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), b, b);
  double acc = 0.0;
  for (const auto& u : buf_) {
    double a2 = std::norm(u);
    double w = a2;
    for (int j = 0; j < q_; ++j) w *= a2;  // |u|^{2q*+2}
    acc += w;
  }
  // (1/G^d) sum_j equals the exact mean of the trigonometric polynomial
  return -acc / static_cast<double>(Gd_) / (2.0 * q_ + 2.0);
}

}  // namespace rnls
