#include "tau2loop/cyclotomic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace tau2 {

namespace {

// Quotient of two integer polynomials known to divide exactly.
std::vector<BigInt> exact_poly_div(const std::vector<BigInt>& num, const std::vector<BigInt>& den) {
  std::vector<BigInt> rem = num;
  const long dn = static_cast<long>(den.size()) - 1;
  const long dq = static_cast<long>(rem.size()) - 1 - dn;
  if (dq < 0) throw std::logic_error("exact_poly_div: degree underflow");
  std::vector<BigInt> quot(dq + 1);
  for (long k = dq; k >= 0; --k) {
    BigInt c = rem[k + dn] / den[dn];
    if (c * den[dn] != rem[k + dn]) throw std::logic_error("exact_poly_div: not divisible");
    quot[k] = c;
    for (long j = 0; j <= dn; ++j) rem[k + j] -= c * den[j];
  }
  for (const auto& c : rem)
    if (c != 0) throw std::logic_error("exact_poly_div: nonzero remainder");
  return quot;
}

} // namespace

std::vector<BigInt> cyclotomic_polynomial(long n) {
  if (n < 1) throw std::invalid_argument("cyclotomic_polynomial: n must be >= 1");
  if (n == 1) return {BigInt(-1), BigInt(1)};
  // x^n - 1
  std::vector<BigInt> num(n + 1);
  num[0] = -1;
  num[n] = 1;
  for (long d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    num = exact_poly_div(num, cyclotomic_polynomial(d));
  }
  return num;
}

CycloContext::CycloContext(long n) : n_(n) {
  if (n < 2) throw std::invalid_argument("CycloContext: N must be >= 2");
  modulus_ = cyclotomic_polynomial(n);
  phi_ = static_cast<long>(modulus_.size()) - 1;

  // x^{phi+j} mod Phi_N by repeated reduction: x^phi = -sum modulus_[i] x^i.
  std::vector<Rational> xphi(phi_);
  for (long i = 0; i < phi_; ++i) xphi[i] = -Rational(modulus_[i]); // monic modulus
  reduction_.push_back(xphi);
  for (long j = 1; j + 1 < phi_; ++j) {
    const auto& prev = reduction_.back();
    std::vector<Rational> next(phi_);
    // multiply prev by x, fold the x^phi term back in
    for (long i = 0; i + 1 < phi_; ++i) next[i + 1] = prev[i];
    const Rational& top = prev[phi_ - 1];
    if (top != 0)
      for (long i = 0; i < phi_; ++i) next[i] += top * xphi[i];
    reduction_.push_back(std::move(next));
  }

  // omega^k on the power basis
  omega_pow_coeffs_.resize(n_);
  for (long k = 0; k < n_; ++k) {
    std::vector<Rational> c(phi_);
    if (k < phi_) {
      c[k] = 1;
    } else {
      // reduce x^k: start from the stored row for x^phi and keep multiplying by x
      std::vector<Rational> cur = reduction_[0];
      for (long e = phi_; e < k; ++e) {
        std::vector<Rational> next(phi_);
        for (long i = 0; i + 1 < phi_; ++i) next[i + 1] = cur[i];
        const Rational top = cur[phi_ - 1];
        if (top != 0)
          for (long i = 0; i < phi_; ++i) next[i] += top * reduction_[0][i];
        cur = std::move(next);
      }
      c = cur;
    }
    omega_pow_coeffs_[k] = std::move(c);
  }

  // [k] = 1 + omega + ... + omega^{k-1}, k = 0..N ([N] = 0 exactly)
  q_int_coeffs_.assign(n_ + 1, std::vector<Rational>(phi_));
  for (long k = 1; k <= n_; ++k) {
    q_int_coeffs_[k] = q_int_coeffs_[k - 1];
    const auto& w = omega_pow_coeffs_[(k - 1) % n_];
    for (long i = 0; i < phi_; ++i) q_int_coeffs_[k][i] += w[i];
  }

  roots_.resize(n_);
  for (long k = 0; k < n_; ++k) {
    double arg = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_);
    roots_[k] = {std::cos(arg), std::sin(arg)};
  }
}

std::shared_ptr<const CycloContext> CycloContext::create(long n) {
  auto ctx = std::shared_ptr<CycloContext>(new CycloContext(n));
  // q-factorials need Cyclotomic multiplication, done after the base tables exist
  std::vector<std::vector<Rational>> facts(n + 1, std::vector<Rational>(ctx->phi_));
  facts[0][0] = 1;
  Cyclotomic acc(ctx, facts[0]);
  for (long k = 1; k <= n; ++k) {
    acc *= Cyclotomic(ctx, ctx->q_int_coeffs_[k]);
    facts[k] = acc.coeffs();
  }
  ctx->q_fact_coeffs_ = std::move(facts);
  return ctx;
}

Cyclotomic CycloContext::zero() const {
  return Cyclotomic(shared_from_this(), std::vector<Rational>(phi_));
}

Cyclotomic CycloContext::one() const { return from_long(1); }

Cyclotomic CycloContext::from_rational(const Rational& r) const {
  std::vector<Rational> c(phi_);
  c[0] = r;
  return Cyclotomic(shared_from_this(), std::move(c));
}

Cyclotomic CycloContext::from_long(long v) const { return from_rational(Rational(v)); }

Cyclotomic CycloContext::omega_pow(long k) const {
  long r = k % n_;
  if (r < 0) r += n_;
  return Cyclotomic(shared_from_this(), omega_pow_coeffs_[r]);
}

Cyclotomic CycloContext::omega() const { return omega_pow(1); }

Cyclotomic CycloContext::q_integer(long k) const {
  if (k < 0 || k > n_) throw std::invalid_argument("q_integer: k out of range [0, N]");
  return Cyclotomic(shared_from_this(), q_int_coeffs_[k]);
}

Cyclotomic CycloContext::q_factorial(long k) const {
  if (k < 0 || k > n_) throw std::invalid_argument("q_factorial: k out of range [0, N]");
  return Cyclotomic(shared_from_this(), q_fact_coeffs_[k]);
}

std::complex<double> CycloContext::embed_root(long k) const {
  long r = k % n_;
  if (r < 0) r += n_;
  return roots_[r];
}

Cyclotomic::Cyclotomic(ContextPtr ctx, std::vector<Rational> coeffs)
    : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {
  if (static_cast<long>(coeffs_.size()) != ctx_->phi())
    throw std::invalid_argument("Cyclotomic: coefficient count != phi(N)");
}

bool Cyclotomic::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

bool Cyclotomic::is_rational() const {
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

void Cyclotomic::check_context(const Cyclotomic& o) const {
  if (!ctx_ || !o.ctx_ || ctx_->n() != o.ctx_->n())
    throw std::invalid_argument("Cyclotomic: context mismatch");
}

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) {
  check_context(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& o) {
  check_context(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& o) {
  check_context(o);
  const long phi = ctx_->phi();
  std::vector<Rational> prod(2 * phi - 1);
  for (long i = 0; i < phi; ++i) {
    if (coeffs_[i] == 0) continue;
    for (long j = 0; j < phi; ++j) {
      if (o.coeffs_[j] == 0) continue;
      prod[i + j] += coeffs_[i] * o.coeffs_[j];
    }
  }
  const auto& red = ctx_->reduction_rows();
  std::vector<Rational> out(prod.begin(), prod.begin() + phi);
  for (long k = phi; k < 2 * phi - 1; ++k) {
    if (prod[k] == 0) continue;
    const auto& row = red[k - phi];
    for (long i = 0; i < phi; ++i)
      if (row[i] != 0) out[i] += prod[k] * row[i];
  }
  coeffs_ = std::move(out);
  return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Rational& r) {
  for (auto& c : coeffs_) c *= r;
  return *this;
}

bool Cyclotomic::operator==(const Cyclotomic& o) const {
  check_context(o);
  return coeffs_ == o.coeffs_;
}

Cyclotomic Cyclotomic::inverse() const {
  if (is_zero()) throw std::domain_error("Cyclotomic::inverse: zero element");
  // Extended Euclid in Q[x] for gcd(a, Phi_N); Phi_N irreducible so the gcd is
  // a nonzero constant and the Bezout coefficient of a is the inverse.
  using Poly = std::vector<Rational>;
  auto degree = [](const Poly& p) {
    for (long i = static_cast<long>(p.size()) - 1; i >= 0; --i)
      if (p[i] != 0) return i;
    return -1L;
  };
  Poly r0(ctx_->modulus_coeffs().size());
  for (std::size_t i = 0; i < r0.size(); ++i) r0[i] = Rational(ctx_->modulus_coeffs()[i]);
  Poly r1(coeffs_.begin(), coeffs_.end());
  Poly s0 = {Rational(0)};
  Poly s1 = {Rational(1)};
  while (true) {
    long d1 = degree(r1);
    if (d1 < 0) throw std::logic_error("Cyclotomic::inverse: gcd chain hit zero");
    long d0 = degree(r0);
    if (d1 == 0) break; // r1 is a nonzero constant: done
    // r0 = q*r1 + rem, then shift
    Poly rem = r0;
    Poly q(std::max<long>(d0 - d1 + 1, 1));
    for (long k = d0 - d1; k >= 0; --k) {
      Rational c = rem[k + d1] / r1[d1];
      q[k] = c;
      if (c == 0) continue;
      for (long j = 0; j <= d1; ++j) rem[k + j] -= c * r1[j];
    }
    // s_{new} = s0 - q*s1
    Poly snew(std::max(s0.size(), q.size() + s1.size()));
    for (std::size_t i = 0; i < s0.size(); ++i) snew[i] = s0[i];
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q[i] == 0) continue;
      for (std::size_t j = 0; j < s1.size(); ++j) snew[i + j] -= q[i] * s1[j];
    }
    r0.swap(r1);
    r1 = std::move(rem);
    r1.resize(std::max<long>(degree(r1) + 1, 1));
    s0.swap(s1);
    s1 = std::move(snew);
  }
  // Bezout: s1 * a == r1 (mod Phi_N) with r1 a nonzero constant.
  const Rational inv_const = Rational(1) / r1[0];
  Cyclotomic acc = ctx_->zero();
  for (std::size_t i = 0; i < s1.size(); ++i) {
    if (s1[i] == 0) continue;
    Cyclotomic term = ctx_->omega_pow(static_cast<long>(i) % ctx_->n());
    term *= s1[i];
    acc += term;
  }
  acc *= inv_const;
  return acc;
}

Cyclotomic Cyclotomic::pow(long k) const {
  Cyclotomic base = k < 0 ? inverse() : *this;
  unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
  Cyclotomic result = ctx_->one();
  while (e) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

std::complex<double> Cyclotomic::embed() const {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0) continue;
    acc += to_double(coeffs_[k]) * ctx_->embed_root(static_cast<long>(k));
  }
  return acc;
}

std::vector<std::string> Cyclotomic::to_strings() const {
  std::vector<std::string> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(rational_to_string(c));
  return out;
}

Cyclotomic Cyclotomic::from_strings(const ContextPtr& ctx, const std::vector<std::string>& parts) {
  if (static_cast<long>(parts.size()) != ctx->phi())
    throw std::invalid_argument("Cyclotomic::from_strings: wrong length");
  std::vector<Rational> c(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) c[i] = rational_from_string(parts[i]);
  return Cyclotomic(ctx, std::move(c));
}

std::string Cyclotomic::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0) continue;
    if (!first) os << " + ";
    os << rational_to_string(coeffs_[k]);
    if (k >= 1) os << "*w" << (k > 1 ? "^" + std::to_string(k) : "");
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

} // namespace tau2
