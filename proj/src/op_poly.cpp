#include "tau2loop/op_poly.hpp"

#include <stdexcept>

namespace tau2 {

OpPoly::OpPoly(ContextPtr ctx, Rank dim) : ctx_(std::move(ctx)), dim_(dim) {}

OpPoly::OpPoly(ContextPtr ctx, Rank dim, std::vector<SparseOp> coeffs)
    : ctx_(std::move(ctx)), dim_(dim), coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_)
    if (c.dim() != dim_) throw std::invalid_argument("OpPoly: mixed coefficient dimensions");
  normalize();
}

OpPoly OpPoly::constant(SparseOp op) {
  OpPoly p(op.context(), op.dim());
  p.coeffs_.push_back(std::move(op));
  p.normalize();
  return p;
}

SparseOp OpPoly::coeff(long k) const {
  if (k < 0) throw std::invalid_argument("OpPoly::coeff: negative power");
  if (k >= static_cast<long>(coeffs_.size())) return SparseOp(ctx_, dim_);
  return coeffs_[k];
}

void OpPoly::normalize() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

void OpPoly::check_compat(const OpPoly& o) const {
  if (dim_ != o.dim_) throw std::invalid_argument("OpPoly: dimension mismatch");
  if (!ctx_ || !o.ctx_ || ctx_->n() != o.ctx_->n())
    throw std::invalid_argument("OpPoly: context mismatch");
}

OpPoly OpPoly::operator-() const {
  OpPoly r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

OpPoly& OpPoly::operator+=(const OpPoly& o) {
  check_compat(o);
  while (coeffs_.size() < o.coeffs_.size()) coeffs_.emplace_back(ctx_, dim_);
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  normalize();
  return *this;
}

OpPoly& OpPoly::operator-=(const OpPoly& o) {
  check_compat(o);
  while (coeffs_.size() < o.coeffs_.size()) coeffs_.emplace_back(ctx_, dim_);
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  normalize();
  return *this;
}

OpPoly operator*(const OpPoly& a, const OpPoly& b) {
  a.check_compat(b);
  OpPoly out(a.ctx_, a.dim_);
  if (a.coeffs_.empty() || b.coeffs_.empty()) return out;
  out.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, SparseOp(a.ctx_, a.dim_));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      if (b.coeffs_[j].is_zero()) continue;
      out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  out.normalize();
  return out;
}

OpPoly operator*(const OpPoly& a, const SparseOp& b) {
  OpPoly out(a.ctx_, a.dim_);
  for (const auto& c : a.coeffs_) out.coeffs_.push_back(c * b);
  out.normalize();
  return out;
}

OpPoly operator*(const SparseOp& a, const OpPoly& b) {
  OpPoly out(b.ctx_, b.dim_);
  for (const auto& c : b.coeffs_) out.coeffs_.push_back(a * c);
  out.normalize();
  return out;
}

OpPoly& OpPoly::operator*=(const Cyclotomic& c) {
  for (auto& op : coeffs_) op *= c;
  normalize();
  return *this;
}

OpPoly& OpPoly::operator*=(const TPoly& p) {
  if (p.is_zero() || coeffs_.empty()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<SparseOp> prod(coeffs_.size() + p.coeffs().size() - 1, SparseOp(ctx_, dim_));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    for (std::size_t j = 0; j < p.coeffs().size(); ++j) {
      if (p.coeffs()[j].is_zero()) continue;
      prod[i + j] += coeffs_[i] * p.coeffs()[j];
    }
  }
  coeffs_ = std::move(prod);
  normalize();
  return *this;
}

bool OpPoly::operator==(const OpPoly& o) const {
  check_compat(o);
  return coeffs_ == o.coeffs_;
}

OpPoly OpPoly::shifted_down() const {
  if (coeffs_.empty()) return *this;
  if (!coeffs_[0].is_zero())
    throw std::invalid_argument("OpPoly::shifted_down: nonzero constant coefficient");
  OpPoly out(ctx_, dim_);
  out.coeffs_.assign(coeffs_.begin() + 1, coeffs_.end());
  return out;
}

OpPoly OpPoly::shifted_up() const {
  if (coeffs_.empty()) return *this;
  OpPoly out(ctx_, dim_);
  out.coeffs_.reserve(coeffs_.size() + 1);
  out.coeffs_.emplace_back(ctx_, dim_);
  out.coeffs_.insert(out.coeffs_.end(), coeffs_.begin(), coeffs_.end());
  return out;
}

std::map<Rank, TPoly> OpPoly::apply(const StateVector& v) const {
  std::map<Rank, TPoly> out;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    StateVector w = coeffs_[k].apply(v);
    for (const auto& [i, amp] : w.amplitudes()) {
      std::vector<Cyclotomic> mono(k + 1, ctx_->zero());
      mono[k] = amp;
      TPoly term(ctx_, std::move(mono));
      auto [it, inserted] = out.try_emplace(i, term);
      if (!inserted) it->second += term;
    }
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

SparseOp OpPoly::eval(const Cyclotomic& t) const {
  SparseOp acc(ctx_, dim_);
  Cyclotomic tp = ctx_->one();
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    acc += coeffs_[k] * tp;
    tp *= t;
  }
  return acc;
}

OpPoly OpPoly::restrict_to(const std::vector<Rank>& basis) const {
  OpPoly out(ctx_, static_cast<Rank>(basis.size()));
  for (const auto& c : coeffs_) out.coeffs_.push_back(c.restrict_to(basis));
  out.normalize();
  return out;
}

std::map<Rank, TPoly> scale_vector(const TPoly& p, const StateVector& v) {
  std::map<Rank, TPoly> out;
  if (p.is_zero()) return out;
  for (const auto& [i, amp] : v.amplitudes()) {
    TPoly scaled = p * amp;
    if (!scaled.is_zero()) out.emplace(i, std::move(scaled));
  }
  return out;
}

bool poly_vectors_equal(const std::map<Rank, TPoly>& a, const std::map<Rank, TPoly>& b) {
  return a == b;
}

} // namespace tau2
