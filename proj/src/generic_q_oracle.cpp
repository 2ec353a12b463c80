#include "tau2loop/loop_algebra.hpp"

#include <stdexcept>

namespace tau2 {

namespace {

// Dense polynomial in the formal deformation parameter q, rational coefficients.
// Only the oracle needs symbolic q, so the type stays local to this file.
struct QPoly {
  std::vector<Rational> c; // ascending powers, trimmed

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  long degree() const { return static_cast<long>(c.size()) - 1; }

  static QPoly constant(const Rational& r) {
    QPoly p;
    if (r != 0) p.c = {r};
    return p;
  }
  static QPoly monomial(long k, const Rational& r = Rational(1)) {
    QPoly p;
    if (r != 0) {
      p.c.assign(k + 1, Rational(0));
      p.c[k] = r;
    }
    return p;
  }

  QPoly& operator+=(const QPoly& o) {
    if (o.c.size() > c.size()) c.resize(o.c.size(), Rational(0));
    for (std::size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
    trim();
    return *this;
  }
  friend QPoly operator*(const QPoly& a, const QPoly& b) {
    QPoly out;
    if (a.is_zero() || b.is_zero()) return out;
    out.c.assign(a.c.size() + b.c.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) {
      if (a.c[i] == 0) continue;
      for (std::size_t j = 0; j < b.c.size(); ++j) out.c[i + j] += a.c[i] * b.c[j];
    }
    out.trim();
    return out;
  }

  // Exact quotient; throws when the division leaves a remainder.
  QPoly divide_exact(const QPoly& d) const {
    if (d.is_zero()) throw std::invalid_argument("QPoly: division by zero");
    QPoly rem = *this;
    const long dd = d.degree();
    long dq = rem.degree() - dd;
    if (rem.is_zero()) return rem;
    if (dq < 0) throw std::domain_error("QPoly: non-exact division");
    QPoly quot;
    quot.c.assign(dq + 1, Rational(0));
    for (long k = dq; k >= 0; --k) {
      Rational f = rem.c[k + dd] / d.c[dd];
      quot.c[k] = f;
      if (f == 0) continue;
      for (long j = 0; j <= dd; ++j) rem.c[k + j] -= f * d.c[j];
    }
    rem.trim();
    if (!rem.is_zero()) throw std::domain_error("QPoly: non-exact division");
    quot.trim();
    return quot;
  }

  Cyclotomic eval_at_omega(const ContextPtr& ctx) const {
    Cyclotomic acc = ctx->zero();
    for (long i = degree(); i >= 0; --i) {
      acc *= ctx->omega();
      acc += ctx->from_rational(c[i]);
    }
    return acc;
  }
};

// [k]_q = 1 + q + ... + q^{k-1}
QPoly q_integer_poly(long k) {
  QPoly p;
  p.c.assign(k, Rational(1));
  p.trim();
  return p;
}

QPoly q_factorial_poly(long k) {
  QPoly p = QPoly::constant(Rational(1));
  for (long j = 2; j <= k; ++j) p = p * q_integer_poly(j);
  return p;
}

using QMatrix = std::vector<std::vector<QPoly>>; // dense [row][col]

QMatrix qm_zero(Rank dim) { return QMatrix(dim, std::vector<QPoly>(dim)); }

QMatrix qm_mul(const QMatrix& a, const QMatrix& b) {
  const Rank dim = static_cast<Rank>(a.size());
  QMatrix out = qm_zero(dim);
  for (Rank i = 0; i < dim; ++i)
    for (Rank k = 0; k < dim; ++k) {
      if (a[i][k].is_zero()) continue;
      for (Rank j = 0; j < dim; ++j) {
        if (b[k][j].is_zero()) continue;
        out[i][j] += a[i][k] * b[k][j];
      }
    }
  return out;
}

void qm_add_scaled(QMatrix& acc, const QMatrix& a, const QPoly& s) {
  const Rank dim = static_cast<Rank>(acc.size());
  for (Rank i = 0; i < dim; ++i)
    for (Rank j = 0; j < dim; ++j)
      if (!a[i][j].is_zero()) acc[i][j] += a[i][j] * s;
}

// Lift of a local q-deformed action to site j (1-based); mirrors the exact
// operators in transfer_ops but with q-polynomial entries.
QMatrix lift_q(const LatticeConfig& config, long j,
               const std::function<std::pair<int, QPoly>(int)>& local) {
  const long n = config.n();
  Rank stride = 1;
  for (long m = config.l(); m > j; --m) stride *= n;
  const Rank block = stride * n;
  QMatrix out = qm_zero(config.space_dim());
  for (Rank col = 0; col < config.space_dim(); ++col) {
    const int digit = static_cast<int>((col / stride) % n);
    auto [to, poly] = local(digit);
    if (poly.is_zero()) continue;
    const Rank base = col - (col % block) + (col % stride);
    out[base + static_cast<Rank>(to) * stride][col] += poly;
  }
  return out;
}

QMatrix q_site_z(const LatticeConfig& config, long j) {
  return lift_q(config, j, [](int m) { return std::make_pair(m, QPoly::monomial(m)); });
}

QMatrix q_raising_f(const LatticeConfig& config, long j) {
  const int n = static_cast<int>(config.n());
  return lift_q(config, j, [&](int m) {
    if (m == n - 1) return std::make_pair(0, QPoly{});
    return std::make_pair(m + 1, q_integer_poly(m + 1));
  });
}

QMatrix q_lowering_e(const LatticeConfig& config, long j) {
  return lift_q(config, j, [](int m) {
    if (m == 0) return std::make_pair(0, QPoly{});
    return std::make_pair(m - 1, q_integer_poly(m));
  });
}

// The (1-q)-scaled extremal coefficient operator that the label abbreviates.
QMatrix q_boundary_operator(const LatticeConfig& config, GenLabel g) {
  const long l = config.l();
  const Rank dim = config.space_dim();
  QMatrix acc = qm_zero(dim);
  // running prefix Z_1...Z_{j-1} and suffix Z_{j+1}...Z_L products
  std::vector<QMatrix> prefix(l + 1), suffix(l + 2);
  prefix[1] = qm_zero(dim);
  for (Rank i = 0; i < dim; ++i) prefix[1][i][i] = QPoly::constant(Rational(1));
  for (long j = 2; j <= l; ++j) prefix[j] = qm_mul(prefix[j - 1], q_site_z(config, j - 1));
  suffix[l] = qm_zero(dim);
  for (Rank i = 0; i < dim; ++i) suffix[l][i][i] = QPoly::constant(Rational(1));
  for (long j = l - 1; j >= 1; --j) suffix[j] = qm_mul(q_site_z(config, j + 1), suffix[j + 1]);

  for (long j = 1; j <= l; ++j) {
    QMatrix term;
    QPoly phase = QPoly::constant(Rational(1));
    switch (g) {
      case GenLabel::x0minus: // B_L = (1-q) sum prefix_j f_j
        term = qm_mul(prefix[j], q_raising_f(config, j));
        break;
      case GenLabel::x0plus: // C_0 = (1-q) sum q^{j-1} prefix_j e_j
        term = qm_mul(prefix[j], q_lowering_e(config, j));
        phase = QPoly::monomial(j - 1);
        break;
      case GenLabel::x1minus: // B_1 = (1-q) sum q^{L-j} f_j suffix_j
        term = qm_mul(q_raising_f(config, j), suffix[j]);
        phase = QPoly::monomial(l - j);
        break;
      case GenLabel::xm1plus: // C_{L-1} = (1-q) sum e_j suffix_j
        term = qm_mul(q_lowering_e(config, j), suffix[j]);
        break;
    }
    qm_add_scaled(acc, term, phase);
  }
  QPoly one_minus_q;
  one_minus_q.c = {Rational(1), Rational(-1)};
  for (auto& row : acc)
    for (auto& e : row)
      if (!e.is_zero()) e = e * one_minus_q;
  return acc;
}

} // namespace

SparseOp divided_power_oracle(const LatticeConfig& config, GenLabel g, long n) {
  if (config.space_dim() > 30)
    throw std::invalid_argument("divided_power_oracle: N^L must be <= 30");
  if (!config.loop_compatible())
    throw std::invalid_argument("divided_power_oracle: L must be a multiple of N");
  const auto& ctx = config.context();
  const Rank dim = config.space_dim();
  const long power = n * config.n();

  QMatrix base = q_boundary_operator(config, g);
  QMatrix acc = qm_zero(dim);
  for (Rank i = 0; i < dim; ++i) acc[i][i] = QPoly::constant(Rational(1));
  for (long p = 0; p < power; ++p) acc = qm_mul(acc, base);

  const QPoly fact = q_factorial_poly(power);
  SparseOp out(ctx, dim);
  for (Rank i = 0; i < dim; ++i)
    for (Rank j = 0; j < dim; ++j) {
      if (acc[i][j].is_zero()) continue;
      Cyclotomic v = acc[i][j].divide_exact(fact).eval_at_omega(ctx);
      out.add_entry(i, j, v);
    }
  return out;
}

CheckResult check_divided_power_oracle(const LatticeConfig& config, GenLabel g, long n) {
  Json params{{"N", config.n()}, {"L", config.l()}, {"generator", to_string(g)}, {"n", n}};
  const std::string id = "oracle.divided_power";
  if (config.space_dim() > 30) return CheckResult::skip(id, "N^L exceeds the oracle bound", params);
  if (!config.loop_compatible()) return CheckResult::skip(id, "L not a multiple of N", params);
  const auto& ctx = config.context();
  SparseOp via_q = divided_power_oracle(config, g, n);
  SparseOp direct = divided_power(config, g, n);
  direct *= (ctx->one() - ctx->omega()).pow(n * config.n());
  if (via_q != direct) {
    Json witness;
    via_q.for_each([&](Rank i, Rank j, const Cyclotomic&) {
      if (witness.is_null() && via_q.entry(i, j) != direct.entry(i, j))
        witness = Json{{"row", i}, {"col", j}};
    });
    direct.for_each([&](Rank i, Rank j, const Cyclotomic&) {
      if (witness.is_null() && via_q.entry(i, j) != direct.entry(i, j))
        witness = Json{{"row", i}, {"col", j}};
    });
    return CheckResult::fail(id, witness, params);
  }
  return CheckResult::pass(id, params);
}

} // namespace tau2
