#pragma once

#include "tau2loop/rational.hpp"

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace tau2 {

/// Coefficients of the N-th cyclotomic polynomial, ascending powers, monic.
/// Computed by exact division of x^N - 1 by Phi_d for the proper divisors d of N.
std::vector<BigInt> cyclotomic_polynomial(long n);

class Cyclotomic;

/// Everything fixed by the choice of N: the modulus Phi_N, reduction rows for
/// x^k with k >= phi, the powers of omega, q-integers and q-factorials.
/// Contexts are immutable and shared by every scalar built from them.
class CycloContext : public std::enable_shared_from_this<CycloContext> {
 public:
  static std::shared_ptr<const CycloContext> create(long n);

  long n() const { return n_; }
  long phi() const { return phi_; }
  const std::vector<BigInt>& modulus_coeffs() const { return modulus_; }

  Cyclotomic zero() const;
  Cyclotomic one() const;
  Cyclotomic from_rational(const Rational& r) const;
  Cyclotomic from_long(long v) const;
  /// omega^k, any integer k (reduced mod N).
  Cyclotomic omega_pow(long k) const;
  Cyclotomic omega() const;

  /// [k] = 1 + omega + ... + omega^{k-1}; [0] = 0, [N] = 0.
  Cyclotomic q_integer(long k) const;
  /// [k]! = [k][k-1]...[1]; [0]! = 1. [N]! = 0 is a legal value.
  Cyclotomic q_factorial(long k) const;

  std::complex<double> embed_root(long k) const;

  /// Rows expressing x^{phi+j} mod Phi_N in the power basis, j = 0..phi-2.
  const std::vector<std::vector<Rational>>& reduction_rows() const { return reduction_; }

 private:
  explicit CycloContext(long n);

  long n_ = 0;
  long phi_ = 0;
  std::vector<BigInt> modulus_;
  std::vector<std::vector<Rational>> reduction_;
  std::vector<std::vector<Rational>> omega_pow_coeffs_; // k = 0..N-1
  std::vector<std::vector<Rational>> q_int_coeffs_;     // k = 0..N
  std::vector<std::vector<Rational>> q_fact_coeffs_;    // k = 0..N
  std::vector<std::complex<double>> roots_;             // exp(2*pi*i*k/N)
};

using ContextPtr = std::shared_ptr<const CycloContext>;

/// An element of Q(omega), stored as phi(N) rationals on the power basis
/// 1, omega, ..., omega^{phi-1}, reduced mod Phi_N. The representation is
/// canonical: equality and the zero test are coefficient-wise.
class Cyclotomic {
 public:
  Cyclotomic() = default;
  Cyclotomic(ContextPtr ctx, std::vector<Rational> coeffs);

  const ContextPtr& context() const { return ctx_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  bool is_rational() const; // no omega^k component for k >= 1
  /// Value of the omega^0 coefficient; only meaningful together with is_rational().
  const Rational& rational_part() const { return coeffs_.at(0); }

  Cyclotomic operator-() const;
  Cyclotomic& operator+=(const Cyclotomic& o);
  Cyclotomic& operator-=(const Cyclotomic& o);
  Cyclotomic& operator*=(const Cyclotomic& o);
  Cyclotomic& operator*=(const Rational& r);

  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
  friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b) { return a *= b; }
  friend Cyclotomic operator*(Cyclotomic a, const Rational& r) { return a *= r; }
  friend Cyclotomic operator*(const Rational& r, Cyclotomic a) { return a *= r; }

  bool operator==(const Cyclotomic& o) const;
  bool operator!=(const Cyclotomic& o) const { return !(*this == o); }

  /// Multiplicative inverse via the extended Euclidean algorithm against Phi_N.
  /// Throws std::domain_error on zero.
  Cyclotomic inverse() const;

  Cyclotomic pow(long k) const; // k may be negative (uses inverse)

  std::complex<double> embed() const;

  /// One "num/den" string per coefficient, length phi(N).
  std::vector<std::string> to_strings() const;
  static Cyclotomic from_strings(const ContextPtr& ctx, const std::vector<std::string>& parts);

  std::string str() const; // human-readable, e.g. "1 - 2*w^2"

 private:
  void check_context(const Cyclotomic& o) const;

  ContextPtr ctx_;
  std::vector<Rational> coeffs_;
};

} // namespace tau2
