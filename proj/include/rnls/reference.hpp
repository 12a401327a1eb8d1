#pragma once

#include "rnls/field.hpp"
#include "rnls/resonance.hpp"

// Serial reference implementations. These are the independent oracles the
// test suite and the `check` command compare the production kernels against;
// they stay deliberately naive.
namespace rnls::reference {

// Direct convolution form of P0: loops over all creator/annihilator
// combinations inside the cutoff. O(n^(2q*+1)).
SpectralField nonlinearity_direct(const SpectralField& f, int q_star, double rho,
                                  std::size_t budget_ops = 400'000'000ULL);

// Serial tuple-sum of the resonant field (same math as the parallel kernel,
// no OpenMP, separate loop code).
SpectralField resonant_field(const ResonanceTable& table, const SpectralField& f, double rho);

// H(v) as a plain sum over momentum-conserving (2q*+2)-tuples.
double hamiltonian_full_tuples(const SpectralField& f, int q_star,
                               std::size_t budget_ops = 400'000'000ULL);

// Independent brute force: enumerate every ordered ((2q*+1)-tuple, output)
// combination and keep the ones passing both conservation checks.
ResonanceTable brute_force_table(const SpectralGrid& grid, int q_star,
                                 std::size_t budget_ops = 400'000'000ULL);

}  // namespace rnls::reference
