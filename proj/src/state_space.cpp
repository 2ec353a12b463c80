#include "tau2loop/state_space.hpp"

#include <stdexcept>

namespace tau2 {

LatticeConfig::LatticeConfig(long n_states, long length) : n_(n_states), l_(length) {
  if (n_ < 2) throw std::invalid_argument("LatticeConfig: N must be >= 2");
  if (l_ < 1) throw std::invalid_argument("LatticeConfig: L must be >= 1");
  dim_ = 1;
  for (long j = 0; j < l_; ++j) {
    dim_ *= n_;
    if (dim_ > (Rank{1} << 40)) throw std::invalid_argument("LatticeConfig: N^L too large");
  }
  sector_dim_ = dim_ / n_;
  ctx_ = CycloContext::create(n_);
}

Rank LatticeConfig::rank(const EdgeState& s) const {
  if (static_cast<long>(s.n.size()) != l_)
    throw std::invalid_argument("rank: state length != L");
  Rank acc = 0;
  for (long j = 0; j < l_; ++j) {
    int v = s.n[j];
    if (v < 0 || v >= n_) throw std::invalid_argument("rank: edge value out of range");
    acc = acc * n_ + v; // n_1 most significant
  }
  return acc;
}

EdgeState LatticeConfig::unrank(Rank i) const {
  if (i < 0 || i >= dim_) throw std::invalid_argument("unrank: index out of range");
  EdgeState s;
  s.n.assign(l_, 0);
  for (long j = l_ - 1; j >= 0; --j) {
    s.n[j] = static_cast<int>(i % n_);
    i /= n_;
  }
  return s;
}

int LatticeConfig::charge(const EdgeState& s) const {
  long acc = 0;
  for (int v : s.n) acc += v;
  return static_cast<int>(acc % n_);
}

int LatticeConfig::charge_of_rank(Rank i) const {
  long acc = 0;
  while (i > 0) {
    acc += i % n_;
    i /= n_;
  }
  return static_cast<int>(acc % n_);
}

std::vector<Rank> LatticeConfig::sector_basis(int c) const {
  if (c < 0 || c >= n_) throw std::invalid_argument("sector_basis: charge out of range");
  std::vector<Rank> out;
  out.reserve(sector_dim_);
  for (Rank i = 0; i < dim_; ++i)
    if (charge_of_rank(i) == c) out.push_back(i);
  return out;
}

StateVector StateVector::basis_state(const ContextPtr& ctx, Rank i) {
  StateVector v(ctx);
  v.amp_.emplace(i, ctx->one());
  return v;
}

Cyclotomic StateVector::amplitude(Rank i) const {
  auto it = amp_.find(i);
  if (it == amp_.end()) return ctx_->zero();
  return it->second;
}

void StateVector::add(Rank i, const Cyclotomic& v) {
  if (v.is_zero()) return;
  auto [it, inserted] = amp_.try_emplace(i, v);
  if (!inserted) {
    it->second += v;
    if (it->second.is_zero()) amp_.erase(it);
  }
}

StateVector& StateVector::operator+=(const StateVector& o) {
  if (!ctx_) ctx_ = o.ctx_;
  for (const auto& [i, v] : o.amp_) add(i, v);
  return *this;
}

StateVector& StateVector::operator-=(const StateVector& o) {
  if (!ctx_) ctx_ = o.ctx_;
  for (const auto& [i, v] : o.amp_) add(i, -v);
  return *this;
}

StateVector& StateVector::operator*=(const Cyclotomic& c) {
  if (c.is_zero()) {
    amp_.clear();
    return *this;
  }
  for (auto& [i, v] : amp_) v *= c;
  return *this;
}

GroundStates ground_states(const LatticeConfig& config) {
  GroundStates g;
  g.omega_rank = 0;
  g.omega_bar_rank = config.space_dim() - 1;
  g.omega = StateVector::basis_state(config.context(), g.omega_rank);
  g.omega_bar = StateVector::basis_state(config.context(), g.omega_bar_rank);
  return g;
}

} // namespace tau2
