#pragma once

#include <memory>
#include <span>

#include "rnls/field.hpp"

namespace rnls {

// Galerkin-truncated nonlinearity P0(v) = -i rho F(|u|^{2q*} u) via
// zero-padded FFT. The padded size per dimension G >= (2q*+2) N + 1 makes
// the pointwise product an exact product of trigonometric polynomials: no
// aliased index can land back inside the cutoff, so the projected result
// equals the exact convolution over tuples inside the grid.
//
// An engine owns FFTW plans and buffers; give each worker thread its own
// instance. Construction is serialized internally (the FFTW planner is not
// thread safe), apply() is safe on distinct instances.
class NonlinearityEngine {
 public:
  NonlinearityEngine(const SpectralGrid& grid, int q_star);
  ~NonlinearityEngine();
  NonlinearityEngine(NonlinearityEngine&&) noexcept;
  NonlinearityEngine& operator=(NonlinearityEngine&&) = delete;
  NonlinearityEngine(const NonlinearityEngine&) = delete;

  const SpectralGrid& grid() const { return *grid_; }
  int q_star() const { return q_; }
  int pad_size() const { return G_; }

  void apply(std::span<const cd> v, double rho, std::span<cd> out);
  SpectralField apply(const SpectralField& f, double rho);

  // H(v) = -1/(2q*+2) sum over momentum-conserving (2q*+2)-tuples of
  // v...v conj(v)..., evaluated as the exact physical-space power average.
  double hamiltonian_full(std::span<const cd> v);

 private:
  const SpectralGrid* grid_;
  int q_, G_;
  long long Gd_;
  std::vector<int> pad_at_;  // flat grid index -> padded buffer index
  std::vector<cd> buf_;
  void* plan_fwd_;  // fftw_plan, kept opaque here
  void* plan_bwd_;

  void fill_padded(std::span<const cd> v);
};

}  // namespace rnls
