#include "tau2loop/sector_kernel.hpp"

#include <algorithm>
#include <limits>

namespace tau2 {

KernelContext::KernelContext(const CycloContext& ctx) : n(ctx.n()), phi(ctx.phi()) {
  // Phi_N is monic with integer coefficients, so x^{phi+j} reduces integrally.
  const auto& mod = ctx.modulus_coeffs();
  std::vector<std::vector<std::int64_t>> rows;
  std::vector<std::int64_t> xphi(phi);
  for (long i = 0; i < phi; ++i) xphi[i] = -static_cast<std::int64_t>(mod[i].convert_to<long long>());
  rows.push_back(xphi);
  for (long j = 1; j + 1 < phi; ++j) {
    const auto& prev = rows.back();
    std::vector<std::int64_t> next(phi, 0);
    for (long i = 0; i + 1 < phi; ++i) next[i + 1] = prev[i];
    const std::int64_t top = prev[phi - 1];
    if (top != 0)
      for (long i = 0; i < phi; ++i) next[i] = kernel::add(next[i], kernel::mul(top, xphi[i]));
    rows.push_back(std::move(next));
  }
  red_rows = std::move(rows);
}

template <class I>
typename KernelSpace<I>::Vec KernelSpace<I>::basis_vec(Rank i) const {
  Vec v = zero_vec();
  v[i * kc_.phi] = I(1);
  return v;
}

template <class I>
bool KernelSpace<I>::is_zero(const Vec& v) const {
  for (const auto& c : v)
    if (c != I(0)) return false;
  return true;
}

template <class I>
void KernelSpace<I>::scalar_mul_acc(const I* a, const I* b, I* acc) const {
  const long phi = kc_.phi;
  if (phi == 1) {
    acc[0] = kernel::add(acc[0], kernel::mul(a[0], b[0]));
    return;
  }
  // schoolbook product then reduction by the precomputed rows
  I prod[2 * 16]; // phi is tiny (phi(N) for desk-scale N); assert below
  if (phi > 16) throw std::logic_error("kernel: phi too large");
  for (long k = 0; k < 2 * phi - 1; ++k) prod[k] = I(0);
  for (long i = 0; i < phi; ++i) {
    if (a[i] == I(0)) continue;
    for (long j = 0; j < phi; ++j) {
      if (b[j] == I(0)) continue;
      prod[i + j] = kernel::add(prod[i + j], kernel::mul(a[i], b[j]));
    }
  }
  for (long k = 0; k < phi; ++k) acc[k] = kernel::add(acc[k], prod[k]);
  for (long k = phi; k < 2 * phi - 1; ++k) {
    if (prod[k] == I(0)) continue;
    const auto& row = kc_.red_rows[k - phi];
    for (long i = 0; i < phi; ++i) {
      if (row[i] == 0) continue;
      acc[i] = kernel::add(acc[i], kernel::mul(prod[k], I(row[i])));
    }
  }
}

template <class I>
void KernelSpace<I>::apply_acc(const KernelMatrix<I>& a, const Vec& v, Vec& out, const I& c) const {
  const long phi = kc_.phi;
  std::vector<I> scaled(phi);
  for (Rank col = 0; col < dim_; ++col) {
    const I* vc = v.data() + col * phi;
    bool zero = true;
    for (long k = 0; k < phi; ++k)
      if (vc[k] != I(0)) {
        zero = false;
        break;
      }
    if (zero) continue;
    for (long k = 0; k < phi; ++k) scaled[k] = kernel::mul(c, vc[k]);
    for (std::int64_t e = a.col_ptr[col]; e < a.col_ptr[col + 1]; ++e) {
      I* dst = out.data() + static_cast<Rank>(a.row_idx[e]) * phi;
      scalar_mul_acc(a.vals.data() + e * phi, scaled.data(), dst);
    }
  }
}

template <class I>
typename KernelSpace<I>::Vec KernelSpace<I>::apply(const KernelMatrix<I>& a, const Vec& v) const {
  Vec out = zero_vec();
  apply_acc(a, v, out, I(1));
  return out;
}

template <class I>
void KernelSpace<I>::axpy(const I& c, const Vec& v, Vec& out) const {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != I(0)) out[i] = kernel::add(out[i], kernel::mul(c, v[i]));
}

template <>
std::int64_t to_coeff_checked<std::int64_t>(const BigInt& v) {
  if (v > BigInt(std::numeric_limits<std::int64_t>::max()) ||
      v < BigInt(std::numeric_limits<std::int64_t>::min()))
    throw KernelOverflow{};
  return v.convert_to<std::int64_t>();
}

template <>
BigInt to_coeff_checked<BigInt>(const BigInt& v) {
  return v;
}

namespace {

BigInt lcm_big(const BigInt& a, const BigInt& b) {
  return a / boost::multiprecision::gcd(a, b) * b;
}

// Common denominator of a set of cyclotomic values.
BigInt common_denominator(const std::vector<const Cyclotomic*>& vals) {
  BigInt d = 1;
  for (const auto* v : vals)
    for (const auto& c : v->coeffs()) d = lcm_big(d, denominator(c));
  return d;
}

template <class I>
void push_scaled(std::vector<I>& out, const Cyclotomic& v, const BigInt& scale) {
  for (const auto& c : v.coeffs()) {
    BigInt scaled_num = numerator(c) * (scale / denominator(c));
    out.push_back(to_coeff_checked<I>(scaled_num));
  }
}

} // namespace

template <class I>
KernelMatrix<I> to_kernel(const KernelContext& kc, const SparseOp& op) {
  KernelMatrix<I> m;
  m.dim = op.dim();
  m.phi = kc.phi;
  std::vector<const Cyclotomic*> all;
  op.for_each([&](Rank, Rank, const Cyclotomic& v) { all.push_back(&v); });
  m.scale = common_denominator(all);

  // gather column-major
  std::vector<std::vector<std::pair<std::int32_t, const Cyclotomic*>>> cols(m.dim);
  op.for_each([&](Rank i, Rank j, const Cyclotomic& v) {
    cols[j].emplace_back(static_cast<std::int32_t>(i), &v);
  });
  m.col_ptr.assign(m.dim + 1, 0);
  for (Rank j = 0; j < m.dim; ++j) m.col_ptr[j + 1] = m.col_ptr[j] + static_cast<std::int64_t>(cols[j].size());
  m.row_idx.reserve(m.col_ptr[m.dim]);
  m.vals.reserve(m.col_ptr[m.dim] * kc.phi);
  for (Rank j = 0; j < m.dim; ++j) {
    std::sort(cols[j].begin(), cols[j].end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [i, v] : cols[j]) {
      m.row_idx.push_back(i);
      push_scaled<I>(m.vals, *v, m.scale);
    }
  }
  return m;
}

template <class I>
KernelMatrix<I> kernel_divided_power(const KernelContext& kc, const LatticeConfig& config,
                                     GenLabel g, long n, const std::vector<Rank>& sector) {
  const long nn = config.n();
  const long l = config.l();
  const Rank dim = static_cast<Rank>(sector.size());
  KernelMatrix<I> m;
  m.dim = dim;
  m.phi = kc.phi;
  m.col_ptr.assign(dim + 1, 0);
  if (n == 0) {
    // identity
    m.scale = 1;
    for (Rank j = 0; j < dim; ++j) {
      m.col_ptr[j + 1] = j + 1;
      m.row_idx.push_back(static_cast<std::int32_t>(j));
      for (long k = 0; k < kc.phi; ++k) m.vals.push_back(I(k == 0 ? 1 : 0));
    }
    return m;
  }
  if (n * nn > (nn - 1) * l) {
    m.scale = 1;
    return m;
  }

  const auto actions = divided_power_actions(config, g, n);

  // Each composition's entry carries the product of its per-site denominators;
  // the matrix scale is the lcm of those, topped up per composition.
  BigInt scale = 1;
  std::vector<BigInt> comp_denoms(actions.size(), 1);
  for (std::size_t a = 0; a < actions.size(); ++a) {
    BigInt d = 1;
    for (int s : actions[a].active) {
      BigInt site_d = 1;
      for (const auto& v : actions[a].factor[s])
        for (const auto& c : v.coeffs()) site_d = lcm_big(site_d, denominator(c));
      d *= site_d;
    }
    comp_denoms[a] = d;
    scale = lcm_big(scale, d);
  }
  m.scale = scale;

  // Integer factor tables: factor * site_denominator, then a per-composition
  // top-up g_a = scale / comp_denom keeps every composition on the same scale.
  struct IntAction {
    std::vector<int> shift;
    std::vector<int> active;
    std::vector<std::vector<std::vector<I>>> factor; // [active pos][digit][phi]
    I topup;
  };
  std::vector<IntAction> iacts;
  iacts.reserve(actions.size());
  for (std::size_t a = 0; a < actions.size(); ++a) {
    const auto& act = actions[a];
    IntAction ia;
    ia.shift = act.shift;
    ia.active = act.active;
    ia.topup = to_coeff_checked<I>(scale / comp_denoms[a]);
    for (int s : act.active) {
      BigInt site_d = 1;
      for (const auto& v : act.factor[s])
        for (const auto& c : v.coeffs()) site_d = lcm_big(site_d, denominator(c));
      std::vector<std::vector<I>> rows;
      for (const auto& v : act.factor[s]) {
        std::vector<I> coeffs;
        push_scaled<I>(coeffs, v, site_d);
        rows.push_back(std::move(coeffs));
      }
      ia.factor.push_back(std::move(rows));
    }
    iacts.push_back(std::move(ia));
  }

  std::vector<Rank> stride(l, 1);
  for (long s = l - 2; s >= 0; --s) stride[s] = stride[s + 1] * nn;
  std::vector<Rank> index_of(config.space_dim(), -1);
  for (std::size_t p = 0; p < sector.size(); ++p) index_of[sector[p]] = static_cast<Rank>(p);

  KernelSpace<I> space(kc, dim);
  std::vector<int> digits(l);
  std::vector<I> acc(kc.phi), tmp(kc.phi);
  std::vector<std::pair<std::int32_t, std::vector<I>>> column;
  for (Rank jc = 0; jc < dim; ++jc) {
    const Rank src = sector[jc];
    Rank t = src;
    for (long s = l - 1; s >= 0; --s) {
      digits[s] = static_cast<int>(t % nn);
      t /= nn;
    }
    column.clear();
    for (const auto& ia : iacts) {
      // product of the active site factors in Z[omega]
      bool dead = false;
      std::fill(acc.begin(), acc.end(), I(0));
      acc[0] = ia.topup;
      for (std::size_t p = 0; p < ia.active.size(); ++p) {
        const auto& row = ia.factor[p][digits[ia.active[p]]];
        if (row.empty()) {
          dead = true;
          break;
        }
        std::fill(tmp.begin(), tmp.end(), I(0));
        space.scalar_mul_acc(acc.data(), row.data(), tmp.data());
        acc.swap(tmp);
        bool zero = true;
        for (const auto& c : acc)
          if (c != I(0)) {
            zero = false;
            break;
          }
        if (zero) {
          dead = true;
          break;
        }
      }
      if (dead) continue;
      Rank target = src;
      for (std::size_t p = 0; p < ia.active.size(); ++p)
        target += static_cast<Rank>(ia.shift[ia.active[p]]) * stride[ia.active[p]];
      const Rank row = index_of[target];
      if (row < 0) throw std::logic_error("kernel_divided_power: target leaves the sector");
      column.emplace_back(static_cast<std::int32_t>(row), acc);
    }
    std::sort(column.begin(), column.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [row, coeffs] : column) {
      m.row_idx.push_back(row);
      for (auto& c : coeffs) m.vals.push_back(std::move(c));
    }
    m.col_ptr[jc + 1] = static_cast<std::int64_t>(m.row_idx.size());
  }
  return m;
}

template class KernelSpace<std::int64_t>;
template class KernelSpace<BigInt>;
template KernelMatrix<std::int64_t> to_kernel<std::int64_t>(const KernelContext&, const SparseOp&);
template KernelMatrix<BigInt> to_kernel<BigInt>(const KernelContext&, const SparseOp&);
template KernelMatrix<std::int64_t> kernel_divided_power<std::int64_t>(const KernelContext&,
                                                                       const LatticeConfig&,
                                                                       GenLabel, long,
                                                                       const std::vector<Rank>&);
template KernelMatrix<BigInt> kernel_divided_power<BigInt>(const KernelContext&,
                                                           const LatticeConfig&, GenLabel, long,
                                                           const std::vector<Rank>&);

} // namespace tau2
