#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace rnls {

// Error classes mapped to process exit codes by the CLI.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wave index l in Z^d with |l|_inf <= N. Components beyond the grid
// dimension stay zero, so componentwise equality is safe for any d <= 3.
struct WaveIndex {
  std::array<int, 3> c{0, 0, 0};

  int& operator[](int i) { return c[i]; }
  int operator[](int i) const { return c[i]; }
  friend bool operator==(const WaveIndex&, const WaveIndex&) = default;

  friend WaveIndex operator+(const WaveIndex& a, const WaveIndex& b) {
    return {{a.c[0] + b.c[0], a.c[1] + b.c[1], a.c[2] + b.c[2]}};
  }
  friend WaveIndex operator-(const WaveIndex& a, const WaveIndex& b) {
    return {{a.c[0] - b.c[0], a.c[1] - b.c[1], a.c[2] - b.c[2]}};
  }
};

// Truncated Fourier lattice {|l|_inf <= N} in Z^d with a fixed flat ordering
// (lexicographic in (l_1,..,l_d), each component running -N..N).
//
// Eigenvalues of -Laplacian are kept as integers lam_int(l) = sum l_i^2;
// the physical eigenvalue is lam = lam_int / L^2. All resonance decisions
// use the integer form.
class SpectralGrid {
 public:
  SpectralGrid(int d, int N, double L = 1.0);

  int dim() const { return d_; }
  int cutoff() const { return N_; }
  double period() const { return L_; }
  int size() const { return n_; }

  const WaveIndex& index(int flat) const { return idx_[static_cast<size_t>(flat)]; }
  bool contains(const WaveIndex& l) const;

  // Flat index of l, or -1 when l falls outside the cutoff.
  int flat_of(const WaveIndex& l) const;
  int flat(const WaveIndex& l) const;  // throwing variant

  int lambda_int(int flat) const { return lam_[static_cast<size_t>(flat)]; }
  double lambda(int flat) const { return lam_[static_cast<size_t>(flat)] * inv_L2_; }
  double inv_L2() const { return inv_L2_; }
  int max_lambda_int() const { return d_ * N_ * N_; }
  const std::vector<int>& lambda_ints() const { return lam_; }

  // Physical |k| of a mode (= sqrt(lam_int)/L).
  double radius(int flat) const;

  nlohmann::ordered_json to_json() const;

  friend bool operator==(const SpectralGrid& a, const SpectralGrid& b) {
    return a.d_ == b.d_ && a.N_ == b.N_ && a.L_ == b.L_;
  }

 private:
  int d_, N_, n_;
  double L_, inv_L2_;
  std::vector<WaveIndex> idx_;
  std::vector<int> lam_;
};

// Damping gamma = f(lambda) acting on physical eigenvalues.
//   affine: f(t) = c0 + c1*t   (default c0 = c1 = 1, i.e. f(t) = t+1)
//   power:  f(t) = c0 + t^p
// f must be positive and nondecreasing, so c0 > 0 and c1 > 0 (resp. p > 0).
// Sublinear growth is not supported.
struct DampingSpec {
  enum class Kind { affine, power };
  Kind kind = Kind::affine;
  double c0 = 1.0;
  double c1 = 1.0;  // slope for affine, exponent p for power

  void validate() const;
  nlohmann::ordered_json to_json() const;
};

double damping_value(double lambda, const DampingSpec& spec);
std::vector<double> damping_spectrum(const SpectralGrid& grid, const DampingSpec& spec);

// Noise amplitudes b_k > 0, decaying in the integer eigenvalue:
//   gaussian:   b = B0 * exp(-alpha * lam_int)
//   polynomial: b = B0 * (1 + lam_int)^(-p)
struct NoiseSpec {
  enum class Kind { gaussian, polynomial };
  Kind kind = Kind::gaussian;
  double B0 = 1.0;
  double param = 1.0;  // alpha or p

  void validate() const;
  nlohmann::ordered_json to_json() const;
};

std::vector<double> noise_spectrum(const SpectralGrid& grid, const NoiseSpec& spec);

}  // namespace rnls
