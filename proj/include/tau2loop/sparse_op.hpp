#pragma once

#include "tau2loop/state_space.hpp"

#include <functional>
#include <vector>

namespace tau2 {

/// Sparse operator over Q(omega), row-major with sorted columns inside each
/// row and no stored zeros, so equal operators have identical storage.
class SparseOp {
 public:
  SparseOp() = default;
  SparseOp(ContextPtr ctx, Rank dim);

  static SparseOp identity(const ContextPtr& ctx, Rank dim);
  static SparseOp scalar(const ContextPtr& ctx, Rank dim, const Cyclotomic& c);

  const ContextPtr& context() const { return ctx_; }
  Rank dim() const { return dim_; }
  bool is_zero() const;
  std::size_t nnz() const;

  using Row = std::vector<std::pair<Rank, Cyclotomic>>;
  const Row& row(Rank i) const { return rows_[i]; }

  Cyclotomic entry(Rank i, Rank j) const;
  void add_entry(Rank i, Rank j, const Cyclotomic& v);
  /// Row-major visit of all stored entries.
  void for_each(const std::function<void(Rank, Rank, const Cyclotomic&)>& fn) const;

  SparseOp operator-() const;
  SparseOp& operator+=(const SparseOp& o);
  SparseOp& operator-=(const SparseOp& o);
  SparseOp& operator*=(const Cyclotomic& c);
  friend SparseOp operator+(SparseOp a, const SparseOp& b) { return a += b; }
  friend SparseOp operator-(SparseOp a, const SparseOp& b) { return a -= b; }
  friend SparseOp operator*(SparseOp a, const Cyclotomic& c) { return a *= c; }
  friend SparseOp operator*(const Cyclotomic& c, SparseOp a) { return a *= c; }

  friend SparseOp operator*(const SparseOp& a, const SparseOp& b);

  bool operator==(const SparseOp& o) const;
  bool operator!=(const SparseOp& o) const { return !(*this == o); }

  StateVector apply(const StateVector& v) const;

  SparseOp commutator(const SparseOp& o) const; // [this, o]

  SparseOp pow(long k) const;

  /// Restriction to the span of `basis` (ascending full-space ranks). Entries
  /// leaving the span are required to be absent; throws otherwise.
  SparseOp restrict_to(const std::vector<Rank>& basis) const;

  /// The uniform charge shift d with op |c> ⊂ span{charge c+d}, or nullopt if
  /// entries mix shifts. Identity-free rows are ignored; zero op reports 0.
  std::optional<int> charge_shift(const LatticeConfig& config) const;

 private:
  void check_compat(const SparseOp& o) const;

  ContextPtr ctx_;
  Rank dim_ = 0;
  std::vector<Row> rows_;
};

} // namespace tau2
