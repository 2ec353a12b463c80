#pragma once

#include "tau2loop/cyclotomic.hpp"

#include <complex>
#include <vector>

namespace tau2 {

/// Polynomial in the spectral variable t with Cyclotomic coefficients.
/// Normalized: no trailing zero coefficient (the zero polynomial is empty).
class TPoly {
 public:
  TPoly() = default;
  explicit TPoly(ContextPtr ctx) : ctx_(std::move(ctx)) {}
  TPoly(ContextPtr ctx, std::vector<Cyclotomic> coeffs);

  static TPoly constant(const Cyclotomic& c);
  /// a + b*t
  static TPoly linear(const Cyclotomic& a, const Cyclotomic& b);

  const ContextPtr& context() const { return ctx_; }
  const std::vector<Cyclotomic>& coeffs() const { return coeffs_; }
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  Cyclotomic coeff(long k) const; // zero beyond degree

  TPoly operator-() const;
  TPoly& operator+=(const TPoly& o);
  TPoly& operator-=(const TPoly& o);
  TPoly& operator*=(const TPoly& o);
  TPoly& operator*=(const Cyclotomic& c);

  friend TPoly operator+(TPoly a, const TPoly& b) { return a += b; }
  friend TPoly operator-(TPoly a, const TPoly& b) { return a -= b; }
  friend TPoly operator*(TPoly a, const TPoly& b) { return a *= b; }
  friend TPoly operator*(TPoly a, const Cyclotomic& c) { return a *= c; }
  friend TPoly operator*(const Cyclotomic& c, TPoly a) { return a *= c; }

  bool operator==(const TPoly& o) const;
  bool operator!=(const TPoly& o) const { return !(*this == o); }

  TPoly pow(long k) const;

  Cyclotomic eval(const Cyclotomic& t) const;
  std::complex<double> eval_complex(std::complex<double> t) const;

  std::string str() const;

 private:
  void normalize();
  void check_context(const TPoly& o) const;

  ContextPtr ctx_;
  std::vector<Cyclotomic> coeffs_;
};

} // namespace tau2
