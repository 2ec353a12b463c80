#include "tau2loop/loop_algebra.hpp"

#include <stdexcept>

namespace tau2 {

std::string to_string(GenLabel g) {
  switch (g) {
    case GenLabel::x0minus: return "x0minus";
    case GenLabel::x1minus: return "x1minus";
    case GenLabel::x0plus: return "x0plus";
    case GenLabel::xm1plus: return "xm1plus";
  }
  throw std::logic_error("unknown GenLabel");
}

GenLabel gen_label_from_string(const std::string& s) {
  if (s == "x0minus") return GenLabel::x0minus;
  if (s == "x1minus") return GenLabel::x1minus;
  if (s == "x0plus") return GenLabel::x0plus;
  if (s == "xm1plus") return GenLabel::xm1plus;
  throw std::invalid_argument("unknown generator label: " + s);
}

std::vector<std::vector<int>> bounded_compositions(long total, long parts, int max_part) {
  std::vector<std::vector<int>> out;
  if (total < 0 || parts < 0) return out;
  std::vector<int> cur(parts, 0);
  // depth-first with a remaining-capacity prune
  auto rec = [&](auto&& self, long pos, long remaining) -> void {
    if (pos == parts) {
      if (remaining == 0) out.push_back(cur);
      return;
    }
    long capacity_after = (parts - pos - 1) * static_cast<long>(max_part);
    for (int v = 0; v <= max_part; ++v) {
      long rest = remaining - v;
      if (rest < 0) break;
      if (rest > capacity_after) continue;
      cur[pos] = v;
      self(self, pos + 1, rest);
    }
    cur[pos] = 0;
  };
  rec(rec, 0, total);
  return out;
}

std::vector<CompositionAction> divided_power_actions(const LatticeConfig& config, GenLabel g,
                                                     long n) {
  if (!config.loop_compatible())
    throw std::invalid_argument("divided_power: L must be a multiple of N");
  if (n < 0) throw std::invalid_argument("divided_power: n must be >= 0");
  const auto& ctx = config.context();
  const long nn = config.n();
  const long l = config.l();
  const bool f_type = (g == GenLabel::x0minus || g == GenLabel::x1minus);
  const bool z_right_of_site = (g == GenLabel::x0minus || g == GenLabel::x0plus);

  std::vector<CompositionAction> actions;
  for (const auto& nu : bounded_compositions(n * nn, l, static_cast<int>(nn - 1))) {
    CompositionAction act;
    act.shift.resize(l);
    act.factor.assign(l, {});
    for (long m = 0; m < l; ++m) {
      const int v = nu[m];
      act.shift[m] = f_type ? v : -v;
      // Z_m exponent: sum of nu over the later sites (x0-, x0+) or the
      // earlier sites (x1-, x-1+).
      long s = 0;
      if (z_right_of_site) {
        for (long q = m + 1; q < l; ++q) s += nu[q];
      } else {
        for (long q = 0; q < m; ++q) s += nu[q];
      }
      if (v == 0 && s % nn == 0) continue; // factor row identically 1
      act.active.push_back(static_cast<int>(m));
      std::vector<Cyclotomic> row(nn, ctx->zero());
      const Cyclotomic inv_fact = v == 0 ? ctx->one() : ctx->q_factorial(v).inverse();
      // site phase omega^{m nu_m} for x0+, omega^{-m nu_m} for x1-; sites 1-based
      long site_phase = 0;
      if (g == GenLabel::x0plus) site_phase = (m + 1) * v;
      if (g == GenLabel::x1minus) site_phase = -(m + 1) * v;
      for (int d = 0; d < nn; ++d) {
        Cyclotomic val = ctx->one();
        if (f_type) {
          // f^v Z^s acting on |d>: Z first, then the raising chain
          if (d + v > nn - 1) continue; // dies at [N] = 0
          val *= ctx->omega_pow(s * d);
          for (int k = 1; k <= v; ++k) val *= ctx->q_integer(d + k);
        } else {
          // Z^s phase e^v acting on |d>: lowering chain first, then Z
          if (d - v < 0) continue;
          for (int k = 0; k < v; ++k) val *= ctx->q_integer(d - k);
          val *= ctx->omega_pow(s * (d - v));
        }
        val *= inv_fact;
        val *= ctx->omega_pow(site_phase);
        row[d] = std::move(val);
      }
      act.factor[m] = std::move(row);
    }
    actions.push_back(std::move(act));
  }
  return actions;
}

namespace {

SparseOp build_from_actions(const LatticeConfig& config, GenLabel g, long n,
                            const std::vector<Rank>* basis) {
  const auto& ctx = config.context();
  const long nn = config.n();
  const long l = config.l();
  const Rank out_dim = basis ? static_cast<Rank>(basis->size()) : config.space_dim();
  SparseOp op(ctx, out_dim);
  if (n == 0) return SparseOp::identity(ctx, out_dim);
  if (n * nn > (nn - 1) * l) return op; // no admissible composition

  const auto actions = divided_power_actions(config, g, n);

  // strides for digit -> rank arithmetic, site 0 most significant
  std::vector<Rank> stride(l, 1);
  for (long m = l - 2; m >= 0; --m) stride[m] = stride[m + 1] * nn;

  // map from full rank to output index (identity when unrestricted)
  std::vector<Rank> index_of;
  if (basis) {
    index_of.assign(config.space_dim(), -1);
    for (std::size_t p = 0; p < basis->size(); ++p) index_of[(*basis)[p]] = static_cast<Rank>(p);
  }

  std::vector<int> digits(l);
  const Rank source_count = basis ? static_cast<Rank>(basis->size()) : config.space_dim();
  for (Rank sc = 0; sc < source_count; ++sc) {
    const Rank src = basis ? (*basis)[sc] : sc;
    {
      Rank tmp = src;
      for (long m = l - 1; m >= 0; --m) {
        digits[m] = static_cast<int>(tmp % nn);
        tmp /= nn;
      }
    }
    for (const auto& act : actions) {
      Cyclotomic val = ctx->one();
      bool dead = false;
      for (int m : act.active) {
        const Cyclotomic& f = act.factor[m][digits[m]];
        if (f.is_zero()) {
          dead = true;
          break;
        }
        val *= f;
      }
      if (dead) continue;
      Rank target = src;
      for (int m : act.active) target += static_cast<Rank>(act.shift[m]) * stride[m];
      Rank row = target;
      if (basis) {
        row = index_of[target];
        if (row < 0) throw std::logic_error("divided_power_sector: target leaves the sector");
      }
      op.add_entry(row, basis ? sc : src, val);
    }
  }
  return op;
}

} // namespace

SparseOp divided_power(const LatticeConfig& config, GenLabel g, long n) {
  return build_from_actions(config, g, n, nullptr);
}

SparseOp divided_power_sector(const LatticeConfig& config, GenLabel g, long n,
                              const std::vector<Rank>& sector) {
  return build_from_actions(config, g, n, &sector);
}

} // namespace tau2
