#pragma once

#include <span>
#include <vector>

namespace rnls {

// Integer basis of the resonance hyperplane {s : W.s = 0} completed to a
// determinant +-1 matrix R = (zeta^1 ... zeta^n). The first n-1 columns span
// the hyperplane over Z and R^T W = (0,...,0,1)^T, so y = R^T phi turns the
// rotation flow phi_dot = W into y_dot = e^n: one fast coordinate, n-1 slow
// resonant combinations.
struct UnimodularBasis {
  int n = 0;
  long long gcd_factor = 1;      // removed from W before completion
  std::vector<long long> W;      // normalized (components relatively prime)
  std::vector<long long> R;      // row-major n x n

  long long at(int row, int col) const { return R[static_cast<size_t>(row) * static_cast<size_t>(n) + static_cast<size_t>(col)]; }
  // column j as a vector (zeta^j for j < n-1)
  std::vector<long long> column(int j) const;
};

// Extended-gcd column reduction; works for any nonzero integer W.
UnimodularBasis unimodular_completion(std::span<const long long> W);

// y = R^T phi (mod 2pi componentwise).
std::vector<double> phase_coordinates(std::span<const double> phi, const UnimodularBasis& basis);

// Exact integer determinant (fraction-free elimination); used by tests.
long long integer_determinant(const std::vector<long long>& A, int n);

}  // namespace rnls
