#pragma once

#include "tau2loop/check_result.hpp"
#include "tau2loop/transfer_ops.hpp"

#include <map>

namespace tau2 {

/// The four loop-algebra generators built from N-th divided powers of the
/// extremal monodromy coefficients: x0minus ~ B_L, x1minus ~ B_1,
/// x0plus ~ C_0, xm1plus ~ C_{L-1}.
enum class GenLabel { x0minus, x1minus, x0plus, xm1plus };

std::string to_string(GenLabel g);
GenLabel gen_label_from_string(const std::string& s);

/// All ways to write `total` as an ordered sum of `parts` values in [0, max_part].
std::vector<std::vector<int>> bounded_compositions(long total, long parts, int max_part);

/// Per-composition action data: on each site a digit shift and the complete
/// scalar factor (q-integer ratios, Z phases, omega^{+-m nu} phases) as a
/// function of the incoming digit. A zero factor marks an invalid move.
struct CompositionAction {
  std::vector<int> shift;                         // signed digit change per site
  std::vector<std::vector<Cyclotomic>> factor;    // [site][incoming digit]
  std::vector<int> active;                        // sites with a nontrivial factor row
};

std::vector<CompositionAction> divided_power_actions(const LatticeConfig& config, GenLabel g,
                                                     long n);

/// n-th divided power of the labeled generator via the bounded-composition
/// sums, on the full edge space. Zero operator when nN > (N-1)L.
/// Requires L to be a multiple of N.
SparseOp divided_power(const LatticeConfig& config, GenLabel g, long n);

/// Same operator restricted to the charge-0 sector (built directly on it).
SparseOp divided_power_sector(const LatticeConfig& config, GenLabel g, long n,
                              const std::vector<Rank>& sector);

/// Independent route to the divided powers for tiny spaces: the extremal
/// monodromy coefficient at a formal parameter q, raised to the nN-th power,
/// divided exactly by [nN]!_q as polynomials and specialized at q = omega.
/// Equals (1-omega)^{nN} divided_power(g, n). Requires N^L <= 30.
SparseOp divided_power_oracle(const LatticeConfig& config, GenLabel g, long n);

CheckResult check_divided_power_oracle(const LatticeConfig& config, GenLabel g, long n);

/// Drinfeld polynomial data: r = (N-1)L/N and the integer coefficients
/// Lambda_0..Lambda_r of P(z), counting bounded compositions.
struct DrinfeldData {
  long r = 0;
  std::vector<BigInt> lambdas;
};

/// Computes the Lambda table twice (series expansion of (1-t^N)^L/(1-t)^L and
/// the alternating binomial sum) and insists the two agree; also checks
/// Lambda_0 = Lambda_r = 1, palindromy and sum N^{L-1}. Throws on violation.
DrinfeldData lambda_coefficients(const LatticeConfig& config);

/// Generators of the loop algebra restricted to the charge-0 sector, indexed
/// by the Drinfeld current index. Built lazily from the base set by the
/// recursion h_m = [x+_{m-l}, x-_l], x_{m+l}^{+-} = -+ (1/2) [h_m, x_l^{+-}].
class LoopGenerators {
 public:
  LoopGenerators(LatticeConfig config, std::vector<Rank> sector);

  const LatticeConfig& config() const { return config_; }
  const std::vector<Rank>& sector() const { return sector_; }

  bool has_x_minus(long j) const { return x_minus_.count(j) > 0; }
  bool has_x_plus(long j) const { return x_plus_.count(j) > 0; }
  bool has_h(long m) const { return h_.count(m) > 0; }
  const SparseOp& x_minus(long j) const;
  const SparseOp& x_plus(long j) const;
  const SparseOp& h(long m) const;

  void set_x_minus(long j, SparseOp op) { x_minus_[j] = std::move(op); }
  void set_x_plus(long j, SparseOp op) { x_plus_[j] = std::move(op); }
  void set_h(long m, SparseOp op) { h_[m] = std::move(op); }

  const std::vector<CheckResult>& log() const { return log_; }
  void append_log(CheckResult r) { log_.push_back(std::move(r)); }
  bool log_ok() const;

 private:
  LatticeConfig config_;
  std::vector<Rank> sector_;
  std::map<long, SparseOp> x_minus_, x_plus_, h_;
  std::vector<CheckResult> log_;
};

/// x0-, x1-, x0+, x-1+ on the charge-0 sector plus h0 = [x0+, x0-]; logs the
/// agreement of the two defining routes for h0.
LoopGenerators base_generators(const LatticeConfig& config);

/// Extends the generator window so that x-_j, x+_j, h_m exist for |j| <= j_max+1,
/// |m| <= j_max; logs l-independence checks of h_m (two distinct l whenever
/// available) and recursion cross-checks.
void extend_generators(LoopGenerators& gens, long j_max);

/// How verify_serre picks its states.
struct SampleSpec {
  bool exhaustive = true;
  long count = 100;
  std::uint64_t seed = 0;
};

/// splitmix64 stream: x += 0x9E3779B97F4A7C15; z = x; z = (z ^ (z >> 30)) *
/// 0xBF58476D1CE4E5B9; z = (z ^ (z >> 27)) * 0x94D049BB133111EB; z ^ (z >> 31).
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next();
};

/// Uniform charge-0 state: L-1 free digits plus the balancing last digit.
Rank sample_sector_state(const LatticeConfig& config, SplitMix64& rng);

/// Cubic Serre relations and the h0 Cartan relations applied to charge-0
/// states, verified exactly through the integer kernel.
CheckResult verify_serre(const LatticeConfig& config, const SampleSpec& spec, long workers = 1);

/// h0 = [x0+, x0-] = [x-1+, x1-] on the charge-0 sector, streamed column by
/// column through the integer kernel (no operator product is materialized).
CheckResult verify_h0_consistency(const LatticeConfig& config);

/// The four cubic/Cartan identities on the divided-power descendants
/// (x1-)^(n) |Omega> and (x0-)^(n) |Omega>.
CheckResult verify_partial_serre(const LatticeConfig& config, long n);

/// (a) The four Yang-Baxter commutation identities between tau2 and the
/// divided powers as operator-polynomial identities on the full edge space.
CheckResult verify_tau2_commutation_identities(const LatticeConfig& config);
/// (b) [tau2(t), g] = 0 on the charge-0 sector for the four base generators.
CheckResult verify_tau2_sector_commutation(const LatticeConfig& config);

/// h0 weight -r on |Omega>, +r on |Omega-bar>, and the Lambda_n ladders
/// (x0+)^(n)(x1-)^(n)|Omega> = Lambda_n |Omega> with all printed mirrors.
CheckResult verify_highest_weight(const LatticeConfig& config);

/// (x0+)^(n-1)(x1-)^(n)|Omega> = sum_j x-_j Lambda_{n-j} |Omega> for
/// n = 1..r+1, its Omega-bar mirror, and the two finiteness sums, re-tested
/// on lowering/raising descendants of the ground states.
CheckResult verify_induction_and_finiteness(const LatticeConfig& config, LoopGenerators& gens);

/// The two Q != 0 commutation identities for mixed divided powers
/// B_L^(N-m) B_1^(m) and C_0^(N-m) C_{L-1}^(m), plus the explicit
/// eigenvector identities on |Omega> and |Omega-bar> at Fourier label Q.
CheckResult verify_adq_identities(const LatticeConfig& config, long m);
CheckResult verify_adq_eigenvectors(const LatticeConfig& config, long q);

} // namespace tau2
