#pragma once

#include "tau2loop/check_result.hpp"
#include "tau2loop/op_poly.hpp"

#include <array>

namespace tau2 {

/// Z|m> = omega^m |m> lifted to site j (1-based).
SparseOp site_z(const LatticeConfig& config, long j);
/// X|m> = |m+1 mod N> lifted to site j (1-based).
SparseOp site_x(const LatticeConfig& config, long j);
/// (1-omega) e = X^{-1} (1-Z): e|0> = 0, e|n> = [n] |n-1>.
SparseOp lowering_e(const LatticeConfig& config, long j);
/// (1-omega) f = (1-Z) X: f|N-1> = 0, f|n> = [n+1] |n+1>.
SparseOp raising_f(const LatticeConfig& config, long j);

/// The 2x2 auxiliary-space block of degree <= 1 polynomials attached to face j:
///   [ 1 - omega t Z_j        -omega t (1-omega) f_j ]
///   [ (1-omega) e_j           omega (Z_j - t)       ]
std::array<std::array<OpPoly, 2>, 2> face_operator(const LatticeConfig& config, long j);

/// Blocks of U(t) = u_1 u_2 ... u_L.
struct MonodromyBlocks {
  OpPoly a, b, c, d;
};

MonodromyBlocks monodromy(const LatticeConfig& config);

/// Coefficient in the expansion sum_j (-omega t)^j M_j of a monodromy block,
/// i.e. the t^j coefficient rescaled by (-omega)^{-j}.
SparseOp block_coefficient(const OpPoly& block, long j);

/// The closed forms for the extremal block coefficients.
struct BoundaryCoefficients {
  SparseOp a0, aL, d0, dL, bL, b1, c0, cLm1;
};

BoundaryCoefficients boundary_coefficients(const LatticeConfig& config);

/// tau_2(t)|_Q = A(t) + omega^{-Q} D(t) on the full edge space.
OpPoly tau2_edge(const LatticeConfig& config, long q, const MonodromyBlocks& blocks);
OpPoly tau2_edge(const LatticeConfig& config, long q);

/// epsilon_Q(t) = (1 - omega t)^L + omega^Q (1 - t)^L.
TPoly epsilon_poly(const LatticeConfig& config, long q);

/// Rebuilds tau_2 on the spin space directly from the face weights, Fourier
/// transforms the sigma_1 dependence, and compares every Q block against the
/// edge-space construction; also confirms the spin-shift eigenvalue omega^Q.
CheckResult fourier_consistency(const LatticeConfig& config);

/// Checks [P_i, R_j] = 0 on the given charge sector for every pair of
/// coefficients, which is equivalent to [P(t), R(t')] = 0 on that sector.
CheckResult op_poly_commutator_zero(const LatticeConfig& config, const OpPoly& p,
                                    const OpPoly& r, int sector_charge,
                                    const std::string& check_id);

} // namespace tau2
