#pragma once

#include "tau2loop/loop_algebra.hpp"

#include <Eigen/Dense>

#include <complex>

namespace tau2 {

using Cplx = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;

DenseMatrix embed_dense(const SparseOp& op);

/// Roots of the Drinfeld polynomial P(z) = sum Lambda_n z^n via companion
/// matrix eigenvalues plus one Newton polish pass.
struct RootSet {
  std::vector<Cplx> roots;
  double separation = 0.0; // min pairwise distance
  double residual = 0.0;   // max |P(z_m)| / max |Lambda_n|
};

/// Throws std::runtime_error when two roots coincide within tol (the
/// decomposition assumes r independent copies).
RootSet drinfeld_roots(const DrinfeldData& data, double tol);

/// The r commuting sl2 triples extracted from the loop generators by
/// inverting the Vandermonde system in the Drinfeld roots.
struct Sl2Decomposition {
  long r = 0;
  std::vector<Cplx> roots;
  std::vector<DenseMatrix> e_minus, e_plus, h; // index m = 0..r-1
};

/// Requires x_j^+-, h_j embedded for j = 0..r-1. Throws std::runtime_error if
/// the Vandermonde condition number exceeds 1/tol.
Sl2Decomposition build_sl2(const LoopGenerators& gens, const RootSet& roots, double tol);

/// [E_m^+, E_n^-] = delta H_m, [H_m, E_n^-] = 2 delta E_m^-,
/// [H_m, E_n^+] = -2 delta E_m^+, all within tol relative to operator scale.
CheckResult verify_sl2_relations(const Sl2Decomposition& dec, double tol);

/// (E_m^-)^2 |Omega> vanishes within tol; H_m weights on |Omega> are recorded
/// (not asserted) in the result parameters.
CheckResult verify_nilpotency_and_weights(const Sl2Decomposition& dec, double tol);

/// Reassembles x_j^+- and h_j from the triples, including the out-of-sample
/// index j = r, and compares against the exact generators.
CheckResult verify_vandermonde_reconstruction(const Sl2Decomposition& dec,
                                              const LoopGenerators& gens, double tol);

struct EigenspaceResult {
  long rank = 0;
  long expected = 0; // 2^r
  DenseMatrix basis; // sector_dim x 2^r, columns prod_{m in S} E_m^- |Omega>
};

EigenspaceResult generate_eigenspace(const Sl2Decomposition& dec, double tol);

/// Multiplicity table of the embedded tau2(t*)|_Q on the charge-0 sector.
struct SpectrumRow {
  Cplx eigenvalue;
  long multiplicity;
};

struct SpectrumTable {
  Cplx t;
  long q = 0;
  std::vector<SpectrumRow> rows; // sorted by (re, im)
  Cplx epsilon;                  // epsilon_Q(t*)
  long epsilon_multiplicity = 0;
};

SpectrumTable spectrum(const LatticeConfig& config, Cplx t_sample, long q, double cluster_tol);

} // namespace tau2
