#include "tau2loop/sparse_op.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>

namespace tau2 {

SparseOp::SparseOp(ContextPtr ctx, Rank dim) : ctx_(std::move(ctx)), dim_(dim) {
  if (dim_ < 1) throw std::invalid_argument("SparseOp: dimension must be positive");
  rows_.resize(dim_);
}

SparseOp SparseOp::identity(const ContextPtr& ctx, Rank dim) {
  return scalar(ctx, dim, ctx->one());
}

SparseOp SparseOp::scalar(const ContextPtr& ctx, Rank dim, const Cyclotomic& c) {
  SparseOp op(ctx, dim);
  if (!c.is_zero())
    for (Rank i = 0; i < dim; ++i) op.rows_[i].emplace_back(i, c);
  return op;
}

bool SparseOp::is_zero() const {
  for (const auto& r : rows_)
    if (!r.empty()) return false;
  return true;
}

std::size_t SparseOp::nnz() const {
  std::size_t acc = 0;
  for (const auto& r : rows_) acc += r.size();
  return acc;
}

Cyclotomic SparseOp::entry(Rank i, Rank j) const {
  const Row& r = rows_.at(i);
  auto it = std::lower_bound(r.begin(), r.end(), j,
                             [](const auto& p, Rank col) { return p.first < col; });
  if (it != r.end() && it->first == j) return it->second;
  return ctx_->zero();
}

void SparseOp::add_entry(Rank i, Rank j, const Cyclotomic& v) {
  if (i < 0 || i >= dim_ || j < 0 || j >= dim_)
    throw std::invalid_argument("SparseOp::add_entry: index out of range");
  if (v.is_zero()) return;
  Row& r = rows_[i];
  auto it = std::lower_bound(r.begin(), r.end(), j,
                             [](const auto& p, Rank col) { return p.first < col; });
  if (it != r.end() && it->first == j) {
    it->second += v;
    if (it->second.is_zero()) r.erase(it);
  } else {
    r.insert(it, {j, v});
  }
}

void SparseOp::for_each(const std::function<void(Rank, Rank, const Cyclotomic&)>& fn) const {
  for (Rank i = 0; i < dim_; ++i)
    for (const auto& [j, v] : rows_[i]) fn(i, j, v);
}

void SparseOp::check_compat(const SparseOp& o) const {
  if (dim_ != o.dim_) throw std::invalid_argument("SparseOp: dimension mismatch");
  if (!ctx_ || !o.ctx_ || ctx_->n() != o.ctx_->n())
    throw std::invalid_argument("SparseOp: context mismatch");
}

SparseOp SparseOp::operator-() const {
  SparseOp r = *this;
  for (auto& row : r.rows_)
    for (auto& [j, v] : row) v = -v;
  return r;
}

SparseOp& SparseOp::operator+=(const SparseOp& o) {
  check_compat(o);
  for (Rank i = 0; i < dim_; ++i) {
    if (o.rows_[i].empty()) continue;
    Row merged;
    merged.reserve(rows_[i].size() + o.rows_[i].size());
    auto a = rows_[i].begin(), ae = rows_[i].end();
    auto b = o.rows_[i].begin(), be = o.rows_[i].end();
    while (a != ae || b != be) {
      if (b == be || (a != ae && a->first < b->first)) {
        merged.push_back(*a++);
      } else if (a == ae || b->first < a->first) {
        merged.push_back(*b++);
      } else {
        Cyclotomic s = a->second + b->second;
        if (!s.is_zero()) merged.emplace_back(a->first, std::move(s));
        ++a;
        ++b;
      }
    }
    rows_[i] = std::move(merged);
  }
  return *this;
}

SparseOp& SparseOp::operator-=(const SparseOp& o) {
  return *this += -o;
}

SparseOp& SparseOp::operator*=(const Cyclotomic& c) {
  if (c.is_zero()) {
    for (auto& r : rows_) r.clear();
    return *this;
  }
  for (auto& r : rows_)
    for (auto& [j, v] : r) v *= c;
  return *this;
}

SparseOp operator*(const SparseOp& a, const SparseOp& b) {
  a.check_compat(b);
  SparseOp out(a.ctx_, a.dim_);
  for (Rank i = 0; i < a.dim_; ++i) {
    if (a.rows_[i].empty()) continue;
    std::map<Rank, Cyclotomic> acc;
    for (const auto& [k, av] : a.rows_[i]) {
      for (const auto& [j, bv] : b.rows_[k]) {
        auto [it, inserted] = acc.try_emplace(j, av * bv);
        if (!inserted) it->second += av * bv;
      }
    }
    SparseOp::Row row;
    row.reserve(acc.size());
    for (auto& [j, v] : acc)
      if (!v.is_zero()) row.emplace_back(j, std::move(v));
    out.rows_[i] = std::move(row);
  }
  return out;
}

bool SparseOp::operator==(const SparseOp& o) const {
  check_compat(o);
  return rows_ == o.rows_;
}

StateVector SparseOp::apply(const StateVector& v) const {
  StateVector out(ctx_);
  if (!v.amplitudes().empty()) {
    Rank lo = v.amplitudes().begin()->first;
    Rank hi = v.amplitudes().rbegin()->first;
    if (lo < 0 || hi >= dim_) throw std::invalid_argument("SparseOp::apply: rank out of range");
  }
  for (Rank i = 0; i < dim_; ++i) {
    if (rows_[i].empty()) continue;
    Cyclotomic acc = ctx_->zero();
    bool any = false;
    for (const auto& [j, val] : rows_[i]) {
      auto it = v.amplitudes().find(j);
      if (it == v.amplitudes().end()) continue;
      acc += val * it->second;
      any = true;
    }
    if (any && !acc.is_zero()) out.add(i, acc);
  }
  return out;
}

SparseOp SparseOp::commutator(const SparseOp& o) const {
  return (*this) * o - o * (*this);
}

SparseOp SparseOp::pow(long k) const {
  if (k < 0) throw std::invalid_argument("SparseOp::pow: negative exponent");
  SparseOp result = identity(ctx_, dim_);
  SparseOp base = *this;
  unsigned long e = static_cast<unsigned long>(k);
  while (e) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

SparseOp SparseOp::restrict_to(const std::vector<Rank>& basis) const {
  std::map<Rank, Rank> pos;
  for (std::size_t p = 0; p < basis.size(); ++p) pos[basis[p]] = static_cast<Rank>(p);
  SparseOp out(ctx_, static_cast<Rank>(basis.size()));
  for (Rank i = 0; i < dim_; ++i) {
    for (const auto& [j, v] : rows_[i]) {
      auto jc = pos.find(j);
      if (jc == pos.end()) continue; // column outside the span: irrelevant
      auto ir = pos.find(i);
      if (ir == pos.end())
        throw std::invalid_argument("SparseOp::restrict_to: operator leaves the span");
      out.rows_[ir->second].emplace_back(jc->second, v);
    }
  }
  // Row-major order is preserved by construction, but columns were emitted in
  // source order; re-sort each row to keep the canonical layout.
  for (auto& r : out.rows_)
    std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::optional<int> SparseOp::charge_shift(const LatticeConfig& config) const {
  std::optional<int> shift;
  for (Rank i = 0; i < dim_; ++i) {
    for (const auto& [j, v] : rows_[i]) {
      (void)v;
      int d = (config.charge_of_rank(i) - config.charge_of_rank(j)) % static_cast<int>(config.n());
      if (d < 0) d += static_cast<int>(config.n());
      if (!shift) {
        shift = d;
      } else if (*shift != d) {
        return std::nullopt;
      }
    }
  }
  if (!shift) return 0;
  return shift;
}

} // namespace tau2
