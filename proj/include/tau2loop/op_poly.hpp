#pragma once

#include "tau2loop/sparse_op.hpp"
#include "tau2loop/tpoly.hpp"

#include <map>

namespace tau2 {

/// Polynomial in t whose coefficients are sparse operators of a common
/// dimension. Trailing zero coefficients are trimmed.
class OpPoly {
 public:
  OpPoly() = default;
  OpPoly(ContextPtr ctx, Rank dim);
  OpPoly(ContextPtr ctx, Rank dim, std::vector<SparseOp> coeffs);

  static OpPoly constant(SparseOp op);

  const ContextPtr& context() const { return ctx_; }
  Rank dim() const { return dim_; }
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<SparseOp>& coeffs() const { return coeffs_; }
  SparseOp coeff(long k) const; // zero operator beyond the degree

  OpPoly operator-() const;
  OpPoly& operator+=(const OpPoly& o);
  OpPoly& operator-=(const OpPoly& o);
  friend OpPoly operator+(OpPoly a, const OpPoly& b) { return a += b; }
  friend OpPoly operator-(OpPoly a, const OpPoly& b) { return a -= b; }
  friend OpPoly operator*(const OpPoly& a, const OpPoly& b);
  friend OpPoly operator*(const OpPoly& a, const SparseOp& b);
  friend OpPoly operator*(const SparseOp& a, const OpPoly& b);

  OpPoly& operator*=(const Cyclotomic& c);
  OpPoly& operator*=(const TPoly& p);
  friend OpPoly operator*(OpPoly a, const Cyclotomic& c) { return a *= c; }
  friend OpPoly operator*(const Cyclotomic& c, OpPoly a) { return a *= c; }
  friend OpPoly operator*(OpPoly a, const TPoly& p) { return a *= p; }

  bool operator==(const OpPoly& o) const;
  bool operator!=(const OpPoly& o) const { return !(*this == o); }

  /// Division by t; requires a vanishing constant coefficient.
  OpPoly shifted_down() const;
  /// Multiplication by t.
  OpPoly shifted_up() const;

  /// Apply to a t-independent vector; the result collects a t-polynomial
  /// amplitude on every reached basis rank.
  std::map<Rank, TPoly> apply(const StateVector& v) const;

  SparseOp eval(const Cyclotomic& t) const;

  OpPoly restrict_to(const std::vector<Rank>& basis) const;

 private:
  void normalize();
  void check_compat(const OpPoly& o) const;

  ContextPtr ctx_;
  Rank dim_ = 0;
  std::vector<SparseOp> coeffs_;
};

/// Scalar polynomial times vector, in the same shape apply() produces.
std::map<Rank, TPoly> scale_vector(const TPoly& p, const StateVector& v);

bool poly_vectors_equal(const std::map<Rank, TPoly>& a, const std::map<Rank, TPoly>& b);

} // namespace tau2
