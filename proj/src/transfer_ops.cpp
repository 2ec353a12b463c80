#include "tau2loop/transfer_ops.hpp"

#include <stdexcept>

namespace tau2 {

namespace {

// Lift a local N x N action |m> -> amp(m) |to(m)> to site j of the chain.
SparseOp lift_site_op(const LatticeConfig& config, long j,
                      const std::function<std::pair<int, Cyclotomic>(int)>& local) {
  if (j < 1 || j > config.l()) throw std::invalid_argument("site operator: j out of range");
  const auto& ctx = config.context();
  const long n = config.n();
  Rank stride = 1;
  for (long m = config.l(); m > j; --m) stride *= n;
  const Rank block = stride * n;
  SparseOp op(ctx, config.space_dim());
  for (Rank col = 0; col < config.space_dim(); ++col) {
    const int digit = static_cast<int>((col / stride) % n);
    auto [to, amp] = local(digit);
    if (amp.is_zero()) continue;
    const Rank base = col - (col % block) + (col % stride);
    op.add_entry(base + static_cast<Rank>(to) * stride, col, amp);
  }
  return op;
}

} // namespace

SparseOp site_z(const LatticeConfig& config, long j) {
  const auto& ctx = config.context();
  return lift_site_op(config, j, [&](int m) { return std::make_pair(m, ctx->omega_pow(m)); });
}

SparseOp site_x(const LatticeConfig& config, long j) {
  const auto& ctx = config.context();
  const int n = static_cast<int>(config.n());
  return lift_site_op(config, j,
                      [&](int m) { return std::make_pair((m + 1) % n, ctx->one()); });
}

SparseOp lowering_e(const LatticeConfig& config, long j) {
  const auto& ctx = config.context();
  return lift_site_op(config, j, [&](int m) {
    if (m == 0) return std::make_pair(0, ctx->zero());
    return std::make_pair(m - 1, ctx->q_integer(m));
  });
}

SparseOp raising_f(const LatticeConfig& config, long j) {
  const auto& ctx = config.context();
  const int n = static_cast<int>(config.n());
  return lift_site_op(config, j, [&](int m) {
    if (m == n - 1) return std::make_pair(0, ctx->zero());
    return std::make_pair(m + 1, ctx->q_integer(m + 1));
  });
}

std::array<std::array<OpPoly, 2>, 2> face_operator(const LatticeConfig& config, long j) {
  const auto& ctx = config.context();
  const Rank dim = config.space_dim();
  const Cyclotomic one = ctx->one();
  const Cyclotomic w = ctx->omega();
  const Cyclotomic one_minus_w = one - w;

  SparseOp z = site_z(config, j);
  SparseOp e = lowering_e(config, j);
  SparseOp f = raising_f(config, j);
  SparseOp id = SparseOp::identity(ctx, dim);

  auto poly = [&](SparseOp c0, SparseOp c1) {
    return OpPoly(ctx, dim, {std::move(c0), std::move(c1)});
  };

  std::array<std::array<OpPoly, 2>, 2> u;
  u[0][0] = poly(id, -(z * w));                                // 1 - omega t Z
  u[0][1] = poly(SparseOp(ctx, dim), -(f * (w * one_minus_w))); // -omega t (1-omega) f
  u[1][0] = OpPoly::constant(e * one_minus_w);                  // (1-omega) e
  u[1][1] = poly(z * w, -(id * w));                             // omega (Z - t)
  return u;
}

MonodromyBlocks monodromy(const LatticeConfig& config) {
  const auto& ctx = config.context();
  const Rank dim = config.space_dim();
  std::array<std::array<OpPoly, 2>, 2> acc = face_operator(config, 1);
  for (long j = 2; j <= config.l(); ++j) {
    auto next = face_operator(config, j);
    std::array<std::array<OpPoly, 2>, 2> prod;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        OpPoly sum(ctx, dim);
        for (int k = 0; k < 2; ++k) sum += acc[r][k] * next[k][c];
        prod[r][c] = std::move(sum);
      }
    acc = std::move(prod);
  }
  return MonodromyBlocks{acc[0][0], acc[0][1], acc[1][0], acc[1][1]};
}

SparseOp block_coefficient(const OpPoly& block, long j) {
  const auto& ctx = block.context();
  Cyclotomic scale = ctx->omega_pow(-j);
  if (j % 2 != 0) scale = -scale; // (-omega)^{-j}
  return block.coeff(j) * scale;
}

BoundaryCoefficients boundary_coefficients(const LatticeConfig& config) {
  const auto& ctx = config.context();
  const Rank dim = config.space_dim();
  const long l = config.l();
  const Cyclotomic one_minus_w = ctx->one() - ctx->omega();

  BoundaryCoefficients out{
      SparseOp::identity(ctx, dim), SparseOp::identity(ctx, dim),
      SparseOp::identity(ctx, dim), SparseOp::identity(ctx, dim),
      SparseOp(ctx, dim),           SparseOp(ctx, dim),
      SparseOp(ctx, dim),           SparseOp(ctx, dim)};

  SparseOp all_z = SparseOp::identity(ctx, dim);
  for (long j = 1; j <= l; ++j) all_z = all_z * site_z(config, j);
  out.aL = all_z;
  out.d0 = all_z * ctx->omega_pow(l);

  // prefix[j] = Z_1 ... Z_{j-1}, suffix[j] = Z_{j+1} ... Z_L
  std::vector<SparseOp> prefix(l + 2, SparseOp::identity(ctx, dim));
  std::vector<SparseOp> suffix(l + 2, SparseOp::identity(ctx, dim));
  for (long j = 2; j <= l; ++j) prefix[j] = prefix[j - 1] * site_z(config, j - 1);
  for (long j = l - 1; j >= 1; --j) suffix[j] = suffix[j + 1] * site_z(config, j + 1);

  for (long j = 1; j <= l; ++j) {
    SparseOp f = raising_f(config, j);
    SparseOp e = lowering_e(config, j);
    out.bL += prefix[j] * f;
    out.c0 += (prefix[j] * e) * ctx->omega_pow(j - 1);
    out.b1 += (f * suffix[j]) * ctx->omega_pow(l - j);
    out.cLm1 += e * suffix[j];
  }
  out.bL *= one_minus_w;
  out.c0 *= one_minus_w;
  out.b1 *= one_minus_w;
  out.cLm1 *= one_minus_w;
  return out;
}

OpPoly tau2_edge(const LatticeConfig& config, long q, const MonodromyBlocks& blocks) {
  OpPoly t2 = blocks.a;
  OpPoly d = blocks.d;
  d *= config.context()->omega_pow(-q);
  t2 += d;
  return t2;
}

OpPoly tau2_edge(const LatticeConfig& config, long q) {
  return tau2_edge(config, q, monodromy(config));
}

TPoly epsilon_poly(const LatticeConfig& config, long q) {
  const auto& ctx = config.context();
  TPoly one_minus_wt = TPoly::linear(ctx->one(), -ctx->omega());
  TPoly one_minus_t = TPoly::linear(ctx->one(), -ctx->one());
  return one_minus_wt.pow(config.l()) + one_minus_t.pow(config.l()) * ctx->omega_pow(q);
}

namespace {

// Face weight U(a, b, c, d): nonzero only for a-d and b-c in {0, 1}.
TPoly face_weight(const ContextPtr& ctx, long n, int a, int b, int c, int d) {
  auto md = [&](int x) { return ((x % static_cast<int>(n)) + static_cast<int>(n)) % n; };
  const int alpha = md(a - d);
  const int beta = md(b - c);
  const int edge = md(a - b);
  TPoly zero(ctx);
  if (alpha > 1 || beta > 1) return zero;
  if (alpha == 0 && beta == 0) // 1 - omega^{n+1} t
    return TPoly::linear(ctx->one(), -ctx->omega_pow(edge + 1));
  if (alpha == 0 && beta == 1) // omega t (omega^{n+1} - 1)
    return TPoly::linear(ctx->zero(), (ctx->omega_pow(edge + 1) - ctx->one()) * ctx->omega());
  if (alpha == 1 && beta == 0) // 1 - omega^n
    return TPoly::constant(ctx->one() - ctx->omega_pow(edge));
  // alpha == 1 && beta == 1: omega (omega^n - t)
  return TPoly::linear(ctx->omega_pow(edge + 1), -ctx->omega());
}

} // namespace

CheckResult fourier_consistency(const LatticeConfig& config) {
  const auto& ctx = config.context();
  const long n = config.n();
  const long l = config.l();
  const Rank dim = config.space_dim();
  Json params{{"N", n}, {"L", l}};
  if (l < 2) return CheckResult::skip("fourier.consistency", "needs L >= 2", params);
  if (dim > 3000)
    return CheckResult::skip("fourier.consistency", "spin space larger than 3e3", params);

  // <sigma'| tau2 |sigma> = prod_J U(sigma_J, sigma_{J+1}, sigma'_{J+1}, sigma'_J)
  auto spin_element = [&](const std::vector<int>& sp, const std::vector<int>& s) {
    TPoly acc = TPoly::constant(ctx->one());
    for (long j = 0; j < l; ++j) {
      long jn = (j + 1) % l;
      TPoly w = face_weight(ctx, n, s[j], s[jn], sp[jn], sp[j]);
      if (w.is_zero()) return w;
      acc *= w;
    }
    return acc;
  };

  // sigma from (sigma_1, edge state): sigma_{j+1} = sigma_j - n_j.
  auto spins_for = [&](int sigma1, const EdgeState& e) {
    std::vector<int> s(l);
    s[0] = sigma1;
    for (long j = 1; j < l; ++j) s[j] = ((s[j - 1] - e.n[j - 1]) % n + n) % n;
    return s;
  };

  const std::vector<Rank> sector = config.sector_basis(0);
  const MonodromyBlocks blocks = monodromy(config);

  for (long q = 0; q < n; ++q) {
    OpPoly expected = tau2_edge(config, q, blocks).restrict_to(sector);
    for (std::size_t col = 0; col < sector.size(); ++col) {
      EdgeState in_state = config.unrank(sector[col]);
      for (std::size_t row = 0; row < sector.size(); ++row) {
        EdgeState out_state = config.unrank(sector[row]);
        // (1/N) sum over sigma_1, sigma'_1 of omega^{Q (sigma'_1 - sigma_1)} element
        TPoly acc(ctx);
        for (int s1 = 0; s1 < n; ++s1) {
          auto s = spins_for(s1, in_state);
          for (int sp1 = 0; sp1 < n; ++sp1) {
            auto sp = spins_for(sp1, out_state);
            TPoly el = spin_element(sp, s);
            if (el.is_zero()) continue;
            acc += el * ctx->omega_pow(q * (sp1 - s1));
          }
        }
        acc *= ctx->from_rational(Rational(1, n));
        // gather the expected (row, col) entry across all t powers
        TPoly exp_entry(ctx);
        for (long k = 0; k <= expected.degree(); ++k) {
          Cyclotomic c = expected.coeff(k).entry(static_cast<Rank>(row), static_cast<Rank>(col));
          if (c.is_zero()) continue;
          std::vector<Cyclotomic> mono(k + 1, ctx->zero());
          mono[k] = c;
          exp_entry += TPoly(ctx, std::move(mono));
        }
        if (acc != exp_entry) {
          return CheckResult::fail(
              "fourier.consistency",
              Json{{"Q", q}, {"row", sector[row]}, {"col", sector[col]},
                   {"spin_side", acc.str()}, {"edge_side", exp_entry.str()}},
              params);
        }
      }
    }
  }

  // Spin-shift eigenvalue: the Fourier combination of any edge state is an
  // eigenvector of the shift sigma_j -> sigma_j + 1 with eigenvalue omega^Q.
  for (long q = 0; q < n; ++q) {
    for (Rank col : sector) {
      EdgeState e = config.unrank(col);
      std::map<Rank, Cyclotomic> vec, shifted;
      for (int s1 = 0; s1 < n; ++s1) {
        auto s = spins_for(s1, e);
        Rank sr = 0;
        for (long j = 0; j < l; ++j) sr = sr * n + s[j];
        vec[sr] = ctx->omega_pow(-q * s1);
        Rank sh = 0;
        for (long j = 0; j < l; ++j) sh = sh * n + (s[j] + 1) % n;
        shifted[sh] = ctx->omega_pow(-q * s1);
      }
      for (auto& [sr, amp] : shifted) {
        auto it = vec.find(sr);
        Cyclotomic v_here = it == vec.end() ? ctx->zero() : it->second;
        // X v = omega^Q v: the shifted amplitude must be omega^Q times v's
        if (amp != v_here * ctx->omega_pow(q))
          return CheckResult::fail("fourier.consistency",
                                   Json{{"Q", q}, {"edge_state", col},
                                        {"detail", "spin shift eigenvalue mismatch"}},
                                   params);
      }
    }
  }
  return CheckResult::pass("fourier.consistency", params);
}

CheckResult op_poly_commutator_zero(const LatticeConfig& config, const OpPoly& p,
                                    const OpPoly& r, int sector_charge,
                                    const std::string& check_id) {
  Json params{{"N", config.n()}, {"L", config.l()}, {"sector", sector_charge}};
  const std::vector<Rank> basis = config.sector_basis(sector_charge);
  std::vector<SparseOp> pc, rc;
  for (long i = 0; i <= p.degree(); ++i) pc.push_back(p.coeff(i).restrict_to(basis));
  for (long j = 0; j <= r.degree(); ++j) rc.push_back(r.coeff(j).restrict_to(basis));
  for (std::size_t i = 0; i < pc.size(); ++i)
    for (std::size_t j = 0; j < rc.size(); ++j) {
      if (!pc[i].commutator(rc[j]).is_zero())
        return CheckResult::fail(check_id, Json{{"i", i}, {"j", j}}, params);
    }
  return CheckResult::pass(check_id, params);
}

} // namespace tau2
