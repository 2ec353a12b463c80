#pragma once

#include "tau2loop/cyclotomic.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace tau2 {

using Rank = std::int64_t;

/// Values n_j in Z_N attached to the L edges of the chain.
struct EdgeState {
  std::vector<int> n;
};

/// Chain geometry plus the shared scalar context.
class LatticeConfig {
 public:
  LatticeConfig(long n_states, long length);

  long n() const { return n_; }
  long l() const { return l_; }
  const ContextPtr& context() const { return ctx_; }

  Rank space_dim() const { return dim_; }        // N^L
  Rank sector_dim() const { return sector_dim_; } // N^{L-1}

  /// Loop-algebra constructions need L to be a multiple of N.
  bool loop_compatible() const { return l_ % n_ == 0; }
  /// r = (N-1)L/N, the highest-weight label; valid when loop_compatible().
  long loop_rank() const { return (n_ - 1) * l_ / n_; }

  Rank rank(const EdgeState& s) const;
  EdgeState unrank(Rank i) const;
  int charge(const EdgeState& s) const;
  int charge_of_rank(Rank i) const;

  /// All ranks with the given charge, ascending. Size N^{L-1} for every c.
  std::vector<Rank> sector_basis(int c) const;

 private:
  long n_;
  long l_;
  Rank dim_;
  Rank sector_dim_;
  ContextPtr ctx_;
};

/// Sparse vector over Q(omega); zero amplitudes are never stored.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(ContextPtr ctx) : ctx_(std::move(ctx)) {}

  static StateVector basis_state(const ContextPtr& ctx, Rank i);

  const ContextPtr& context() const { return ctx_; }
  const std::map<Rank, Cyclotomic>& amplitudes() const { return amp_; }
  bool is_zero() const { return amp_.empty(); }
  std::size_t support_size() const { return amp_.size(); }

  Cyclotomic amplitude(Rank i) const;
  void add(Rank i, const Cyclotomic& v);

  StateVector& operator+=(const StateVector& o);
  StateVector& operator-=(const StateVector& o);
  StateVector& operator*=(const Cyclotomic& c);
  friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
  friend StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
  friend StateVector operator*(StateVector a, const Cyclotomic& c) { return a *= c; }

  bool operator==(const StateVector& o) const { return amp_ == o.amp_; }

 private:
  ContextPtr ctx_;
  std::map<Rank, Cyclotomic> amp_;
};

/// |Omega> at (0,...,0) and |Omega-bar> at (N-1,...,N-1).
struct GroundStates {
  StateVector omega;
  StateVector omega_bar;
  Rank omega_rank;
  Rank omega_bar_rank;
};

GroundStates ground_states(const LatticeConfig& config);

} // namespace tau2
