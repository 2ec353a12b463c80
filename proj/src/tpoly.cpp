#include "tau2loop/tpoly.hpp"

#include <sstream>
#include <stdexcept>

namespace tau2 {

TPoly::TPoly(ContextPtr ctx, std::vector<Cyclotomic> coeffs)
    : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {
  normalize();
}

TPoly TPoly::constant(const Cyclotomic& c) {
  return TPoly(c.context(), {c});
}

TPoly TPoly::linear(const Cyclotomic& a, const Cyclotomic& b) {
  return TPoly(a.context(), {a, b});
}

Cyclotomic TPoly::coeff(long k) const {
  if (k < 0) throw std::invalid_argument("TPoly::coeff: negative power");
  if (k >= static_cast<long>(coeffs_.size())) return ctx_->zero();
  return coeffs_[k];
}

void TPoly::normalize() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

void TPoly::check_context(const TPoly& o) const {
  if (!ctx_ || !o.ctx_ || ctx_->n() != o.ctx_->n())
    throw std::invalid_argument("TPoly: context mismatch");
}

TPoly TPoly::operator-() const {
  TPoly r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

TPoly& TPoly::operator+=(const TPoly& o) {
  check_context(o);
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), ctx_->zero());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  normalize();
  return *this;
}

TPoly& TPoly::operator-=(const TPoly& o) {
  check_context(o);
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), ctx_->zero());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  normalize();
  return *this;
}

TPoly& TPoly::operator*=(const TPoly& o) {
  check_context(o);
  if (coeffs_.empty() || o.coeffs_.empty()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<Cyclotomic> prod(coeffs_.size() + o.coeffs_.size() - 1, ctx_->zero());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) {
      if (o.coeffs_[j].is_zero()) continue;
      prod[i + j] += coeffs_[i] * o.coeffs_[j];
    }
  }
  coeffs_ = std::move(prod);
  normalize();
  return *this;
}

TPoly& TPoly::operator*=(const Cyclotomic& c) {
  if (c.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  for (auto& a : coeffs_) a *= c;
  return *this;
}

bool TPoly::operator==(const TPoly& o) const {
  check_context(o);
  return coeffs_ == o.coeffs_;
}

TPoly TPoly::pow(long k) const {
  if (k < 0) throw std::invalid_argument("TPoly::pow: negative exponent");
  TPoly result = TPoly::constant(ctx_->one());
  TPoly base = *this;
  unsigned long e = static_cast<unsigned long>(k);
  while (e) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

Cyclotomic TPoly::eval(const Cyclotomic& t) const {
  Cyclotomic acc = ctx_->zero();
  for (long i = degree(); i >= 0; --i) {
    acc *= t;
    acc += coeffs_[i];
  }
  return acc;
}

std::complex<double> TPoly::eval_complex(std::complex<double> t) const {
  std::complex<double> acc{0.0, 0.0};
  for (long i = degree(); i >= 0; --i) acc = acc * t + coeffs_[i].embed();
  return acc;
}

std::string TPoly::str() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    if (os.tellp() > 0) os << " + ";
    os << "(" << coeffs_[i].str() << ")";
    if (i == 1) os << "*t";
    if (i > 1) os << "*t^" << i;
  }
  return os.str();
}

} // namespace tau2
