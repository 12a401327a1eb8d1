#pragma once

#include "rnls/nonlinearity.hpp"
#include "rnls/resonance.hpp"

namespace rnls {

// Resonant sum S_k(v) = sum over tuples -> k of v_{k1}..v_{k_{q*+1}}
// conj(v)_{k_{q*+2}}..conj(v)_{k_{2q*+1}}. OpenMP over output modes.
void resonant_sum(const ResonanceTable& table, std::span<const cd> v, std::span<cd> out);

// R0(v) = -i rho S(v): the nonlinear part of the effective equation,
// in its explicit (table) form.
SpectralField resonant_field_direct(const ResonanceTable& table, const SpectralField& f, double rho);
void resonant_field_direct_into(const ResonanceTable& table, std::span<const cd> v, double rho,
                                std::span<cd> out);

// Resonant averaging form: (1/K) sum_j Psi_{-t_j Lambda} P0(Psi_{t_j Lambda} v)
// over t_j = 2 pi j / K with K = (2q*+2) d N^2 + 1 nodes. Every nonresonant
// oscillation frequency is a nonzero integer below K, so the K-point average
// kills it exactly and the result EQUALS resonant_field_direct up to roundoff.
SpectralField resonant_field_quadrature(NonlinearityEngine& engine, const SpectralField& f,
                                        double rho);
int quadrature_nodes(const SpectralGrid& grid, int q_star);

// H^res(v) = -1/(2q*+2) Re sum_k S_k(v) conj(v_k): the tuple table reused
// with the output mode as the last annihilator. Nonpositive; R0 = i rho grad.
double hamiltonian_res(const ResonanceTable& table, const SpectralField& f);

// Fast oscillating remainder at phase theta (= nu^{-1} tau / L^2):
//   Rosc(v, theta) = Psi_{theta Lambda} P0(Psi_{-theta Lambda} v) - R0(v),
// so that R0 + Rosc is the interaction-representation drift.
SpectralField nonresonant_field(NonlinearityEngine& engine, const ResonanceTable& table,
                                const SpectralField& f, double rho, double theta);

// Lambda-averaged action drift (v_k . R_k)_k with R = R0 - gamma v; equals
// <v_k . P_k>_Lambda.
std::vector<double> averaged_action_drift(const ResonanceTable& table, std::span<const double> gamma,
                                          const SpectralField& f, double rho);
// The same quantity through the quadrature of v_k . P_k along rotations.
std::vector<double> averaged_action_drift_quadrature(NonlinearityEngine& engine,
                                                     std::span<const double> gamma,
                                                     const SpectralField& f, double rho);

}  // namespace rnls
