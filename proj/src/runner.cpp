#include "tau2loop/runner.hpp"

#include "tau2loop/op_cache.hpp"
#include "tau2loop/parallel.hpp"
#include "tau2loop/version.hpp"

#include <chrono>
#include <fstream>
#include <mutex>
#include <sstream>

namespace tau2 {

namespace {

constexpr Rank kFullSpaceCap = 10000; // monodromy-backed checks
constexpr Rank kFourierCap = 3000;
constexpr Rank kOracleCap = 30;
constexpr Rank kSectorOpsCap = 4096;  // exact sector operators as rationals
constexpr Rank kExtendCap = 1024;     // generator extension and sl2 pipeline

std::string complex_str(Cplx z) {
  std::ostringstream os;
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

// Shared lazily-built artifacts for one (N, L); thread-safe for the
// check-level parallelism in run().
class RunContext {
 public:
  RunContext(const RunConfig& rc)
      : rc_(rc), config_(rc.n, rc.l), cache_(rc.cache_dir.empty()
                                                 ? OpCache()
                                                 : OpCache(rc.cache_dir)) {}

  const LatticeConfig& config() const { return config_; }
  const RunConfig& rc() const { return rc_; }
  OpCache& cache() { return cache_; }

  std::vector<long> q_labels() const {
    if (!rc_.q_list.empty()) return rc_.q_list;
    std::vector<long> qs;
    for (long q = 0; q < config_.n(); ++q) qs.push_back(q);
    return qs;
  }

  std::vector<Cplx> t_samples() const {
    if (!rc_.t_samples.empty()) return rc_.t_samples;
    return {Cplx(0.5, 0.0), Cplx(0.3, 0.2)};
  }

  const MonodromyBlocks& blocks() {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!blocks_) {
      const long l = config_.l();
      auto load_poly = [&](const std::string& base) -> std::optional<OpPoly> {
        std::vector<SparseOp> coeffs;
        for (long k = 0; k <= l; ++k) {
          auto op = cache_.try_load(config_, base + ".t" + std::to_string(k));
          if (!op) return std::nullopt;
          coeffs.push_back(std::move(*op));
        }
        return OpPoly(config_.context(), config_.space_dim(), std::move(coeffs));
      };
      auto a = load_poly("monodromy.a");
      auto b = load_poly("monodromy.b");
      auto c = load_poly("monodromy.c");
      auto d = load_poly("monodromy.d");
      if (a && b && c && d) {
        blocks_ = MonodromyBlocks{*a, *b, *c, *d};
      } else {
        blocks_ = monodromy(config_);
        save_blocks_locked();
      }
    }
    return *blocks_;
  }

  void save_blocks_locked() {
    if (!cache_.enabled() || !blocks_) return;
    auto save_poly = [&](const std::string& base, const OpPoly& p) {
      for (long k = 0; k <= config_.l(); ++k)
        cache_.store(config_, base + ".t" + std::to_string(k), p.coeff(k));
    };
    save_poly("monodromy.a", blocks_->a);
    save_poly("monodromy.b", blocks_->b);
    save_poly("monodromy.c", blocks_->c);
    save_poly("monodromy.d", blocks_->d);
  }

  OpPoly tau2(long q) {
    const MonodromyBlocks& b = blocks();
    std::lock_guard<std::mutex> lock(mutex_);
    return tau2_edge(config_, q, b);
  }

  // Base generators plus the loop extension to r+1, built once.
  LoopGenerators& generators() {
    std::lock_guard<std::mutex> lock(gens_mutex_);
    if (!gens_) {
      LoopGenerators g = build_base_generators_cached();
      extend_generators(g, config_.loop_rank() + 1);
      gens_ = std::move(g);
    }
    return *gens_;
  }

  DrinfeldData lambda() {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!lambda_) lambda_ = lambda_coefficients(config_);
    return *lambda_;
  }

  Sl2Decomposition& decomposition() {
    LoopGenerators& gens = generators(); // outside our own mutex
    std::lock_guard<std::mutex> lock(dec_mutex_);
    if (!dec_) {
      RootSet roots = drinfeld_roots(lambda(), rc_.tol);
      dec_ = build_sl2(gens, roots, rc_.tol);
    }
    return *dec_;
  }

 private:
  LoopGenerators build_base_generators_cached() {
    if (!cache_.enabled()) return base_generators(config_);
    // try the four cached sector restrictions before building from scratch
    auto xm0 = cache_.try_load(config_, "x0minus.n1.sector");
    auto xm1 = cache_.try_load(config_, "x1minus.n1.sector");
    auto xp0 = cache_.try_load(config_, "x0plus.n1.sector");
    auto xpm1 = cache_.try_load(config_, "xm1plus.n1.sector");
    if (xm0 && xm1 && xp0 && xpm1) {
      LoopGenerators gens(config_, config_.sector_basis(0));
      gens.set_x_minus(0, std::move(*xm0));
      gens.set_x_minus(1, std::move(*xm1));
      gens.set_x_plus(0, std::move(*xp0));
      gens.set_x_plus(-1, std::move(*xpm1));
      SparseOp h0 = gens.x_plus(0).commutator(gens.x_minus(0));
      gens.set_h(0, std::move(h0));
      return gens;
    }
    LoopGenerators gens = base_generators(config_);
    cache_.store(config_, "x0minus.n1.sector", gens.x_minus(0));
    cache_.store(config_, "x1minus.n1.sector", gens.x_minus(1));
    cache_.store(config_, "x0plus.n1.sector", gens.x_plus(0));
    cache_.store(config_, "xm1plus.n1.sector", gens.x_plus(-1));
    return gens;
  }

  const RunConfig& rc_;
  LatticeConfig config_;
  OpCache cache_;
  std::mutex mutex_, gens_mutex_, dec_mutex_;
  std::optional<MonodromyBlocks> blocks_;
  std::optional<LoopGenerators> gens_;
  std::optional<DrinfeldData> lambda_;
  std::optional<Sl2Decomposition> dec_;
};

using CheckFn = std::function<std::vector<CheckResult>(RunContext&)>;

struct CheckEntry {
  std::string id;
  CheckFn fn;
};

Json base_params(const LatticeConfig& c) { return Json{{"N", c.n()}, {"L", c.l()}}; }

std::vector<CheckResult> one(CheckResult r) {
  std::vector<CheckResult> v;
  v.push_back(std::move(r));
  return v;
}

CheckResult skip_large(const std::string& id, const LatticeConfig& c, const char* what) {
  return CheckResult::skip(id, std::string(what) + " exceeds the desk-scale cap",
                           base_params(c));
}

// ---- individual checks ------------------------------------------------

std::vector<CheckResult> check_lambda(RunContext& ctx) {
  const auto& c = ctx.config();
  Json params = base_params(c);
  if (!c.loop_compatible())
    return one(CheckResult::skip("lambda.table", "L not a multiple of N", params));
  DrinfeldData d = ctx.lambda(); // both methods agree or this throws
  Json lam = Json::array();
  for (const auto& v : d.lambdas) lam.push_back(v.str());
  params["r"] = d.r;
  params["lambdas"] = lam;
  return one(CheckResult::pass("lambda.table", params));
}

std::vector<CheckResult> check_drinfeld_roots(RunContext& ctx) {
  const auto& c = ctx.config();
  Json params = base_params(c);
  const std::string id = "drinfeld.roots";
  if (!c.loop_compatible())
    return one(CheckResult::skip(id, "L not a multiple of N", params));
  DrinfeldData d = ctx.lambda();
  RootSet roots = drinfeld_roots(d, ctx.rc().tol);
  Json rj = Json::array();
  bool real_negative = true;
  for (Cplx z : roots.roots) {
    rj.push_back(Json::array({z.real(), z.imag()}));
    if (z.real() >= 0 || std::abs(z.imag()) > 1e-9) real_negative = false;
  }
  params["roots"] = rj;
  params["separation"] = roots.separation;
  params["residual"] = roots.residual;
  params["all_real_negative"] = real_negative; // recorded, not asserted
  if (roots.residual > ctx.rc().tol)
    return one(CheckResult::fail(id, Json{{"residual", roots.residual}}, params));
  // Vieta: prod z_m = (-1)^r Lambda_0 / Lambda_r
  Cplx prod{1.0, 0.0};
  for (Cplx z : roots.roots) prod *= z;
  const double expected = (d.r % 2 == 0) ? 1.0 : -1.0;
  if (std::abs(prod - Cplx(expected, 0.0)) > 1e-6)
    return one(CheckResult::fail(id, Json{{"vieta_product", complex_str(prod)}}, params));
  return one(CheckResult::pass(id, params));
}

std::vector<CheckResult> check_eigen_ground(RunContext& ctx) {
  const auto& c = ctx.config();
  const auto& cyc = c.context();
  const std::string id = "eigen.ground";
  if (c.space_dim() > kFullSpaceCap) return one(skip_large(id, c, "N^L"));
  std::vector<CheckResult> out;
  GroundStates gs = ground_states(c);
  TPoly one_minus_wt = TPoly::linear(cyc->one(), -cyc->omega());
  TPoly one_minus_t = TPoly::linear(cyc->one(), -cyc->one());
  const TPoly a_omega = one_minus_wt.pow(c.l());
  const TPoly d_omega = one_minus_t.pow(c.l()) * cyc->omega_pow(c.l());
  const TPoly a_bar = one_minus_t.pow(c.l());
  const TPoly d_bar = one_minus_wt.pow(c.l());
  for (long q : ctx.q_labels()) {
    Json params = base_params(c);
    params["Q"] = q;
    OpPoly t2 = ctx.tau2(q);
    const Cyclotomic wq = cyc->omega_pow(-q);
    TPoly eps_omega = a_omega + d_omega * wq; // (1-wt)^L + w^{L-Q} (1-t)^L
    TPoly eps_bar = a_bar + d_bar * wq;
    if (!poly_vectors_equal(t2.apply(gs.omega), scale_vector(eps_omega, gs.omega))) {
      out.push_back(CheckResult::fail(id, Json{{"state", "omega"}}, params));
      continue;
    }
    if (!poly_vectors_equal(t2.apply(gs.omega_bar), scale_vector(eps_bar, gs.omega_bar))) {
      out.push_back(CheckResult::fail(id, Json{{"state", "omegabar"}}, params));
      continue;
    }
    // with N | L the omega eigenvalue is exactly epsilon_{-Q} of the paper form
    if (c.loop_compatible() && eps_omega != epsilon_poly(c, -q)) {
      out.push_back(CheckResult::fail(id, Json{{"state", "omega"},
                                               {"detail", "epsilon form mismatch"}},
                                      params));
      continue;
    }
    out.push_back(CheckResult::pass(id, params));
  }
  return out;
}

std::vector<CheckResult> check_boundary_coeffs(RunContext& ctx) {
  const auto& c = ctx.config();
  const std::string id = "boundary.coeffs";
  if (c.space_dim() > kFullSpaceCap) return one(skip_large(id, c, "N^L"));
  Json params = base_params(c);
  const MonodromyBlocks& blocks = ctx.blocks();
  BoundaryCoefficients bc = boundary_coefficients(c);
  const long l = c.l();
  const SparseOp ident = SparseOp::identity(c.context(), c.space_dim());

  auto check = [&](const char* name, const OpPoly& block, long j,
                   const SparseOp& want) -> std::optional<CheckResult> {
    if (block_coefficient(block, j) == want) return std::nullopt;
    return CheckResult::fail(id, Json{{"coefficient", name}, {"j", j}}, params);
  };
  if (auto r = check("A0", blocks.a, 0, ident)) return one(*r);
  if (auto r = check("AL", blocks.a, l, bc.aL)) return one(*r);
  if (auto r = check("D0", blocks.d, 0, bc.d0)) return one(*r);
  if (auto r = check("DL", blocks.d, l, ident)) return one(*r);
  if (auto r = check("BL", blocks.b, l, bc.bL)) return one(*r);
  if (auto r = check("B1", blocks.b, 1, bc.b1)) return one(*r);
  if (auto r = check("C0", blocks.c, 0, bc.c0)) return one(*r);
  if (auto r = check("CLm1", blocks.c, l - 1, bc.cLm1)) return one(*r);
  if (blocks.a.degree() != l || blocks.d.degree() != l || blocks.b.degree() > l ||
      blocks.c.degree() > l - 1 || !blocks.b.coeff(0).is_zero())
    return one(CheckResult::fail(id, Json{{"detail", "degree bounds violated"}}, params));
  // A_L acts as the identity on every charge-0 state; D_0 needs N | L
  const std::vector<Rank> sector = c.sector_basis(0);
  if (bc.aL.restrict_to(sector) != SparseOp::identity(c.context(), sector.size()))
    return one(CheckResult::fail(id, Json{{"detail", "A_L != 1 on the charge-0 sector"}}, params));
  if (c.loop_compatible() &&
      bc.d0.restrict_to(sector) != SparseOp::identity(c.context(), sector.size()))
    return one(CheckResult::fail(id, Json{{"detail", "D_0 != 1 on the charge-0 sector"}}, params));
  return one(CheckResult::pass(id, params));
}

std::vector<CheckResult> check_charge_grading(RunContext& ctx) {
  const auto& c = ctx.config();
  const std::string id = "charge.grading";
  if (c.space_dim() > kFullSpaceCap) return one(skip_large(id, c, "N^L"));
  Json params = base_params(c);
  const MonodromyBlocks& blocks = ctx.blocks();
  struct Grade {
    const char* name;
    const OpPoly* block;
    int shift;
  };
  const int n = static_cast<int>(c.n());
  for (const Grade& g : {Grade{"A", &blocks.a, 0}, Grade{"B", &blocks.b, 1},
                         Grade{"C", &blocks.c, n - 1}, Grade{"D", &blocks.d, 0}}) {
    for (long k = 0; k <= g.block->degree(); ++k) {
      SparseOp coeff = g.block->coeff(k);
      if (coeff.is_zero()) continue;
      auto shift = coeff.charge_shift(c);
      if (!shift || *shift != g.shift)
        return one(CheckResult::fail(
            id, Json{{"block", g.name}, {"t_power", k},
                     {"shift", shift ? Json(*shift) : Json("mixed")}},
            params));
    }
  }
  return one(CheckResult::pass(id, params));
}

std::vector<CheckResult> check_oracle(RunContext& ctx) {
  const auto& c = ctx.config();
  const std::string id = "oracle.divided_power";
  if (!c.loop_compatible())
    return one(CheckResult::skip(id, "L not a multiple of N", base_params(c)));
  if (c.space_dim() > kOracleCap) return one(skip_large(id, c, "N^L"));
  std::vector<CheckResult> out;
  const long r = c.loop_rank();
  for (GenLabel g :
       {GenLabel::x0minus, GenLabel::x1minus, GenLabel::x0plus, GenLabel::xm1plus})
    for (long n = 0; n <= std::min<long>(r, 2); ++n)
      out.push_back(check_divided_power_oracle(c, g, n));
  return out;
}

std::vector<CheckResult> check_fourier(RunContext& ctx) {
  const auto& c = ctx.config();
  if (c.space_dim() > kFourierCap)
    return one(skip_large("fourier.consistency", c, "N^L"));
  return one(fourier_consistency(c));
}

std::vector<CheckResult> check_tau2_selfcomm(RunContext& ctx) {
  const auto& c = ctx.config();
  const std::string id = "tau2.selfcomm";
  if (c.space_dim() > kFullSpaceCap) return one(skip_large(id, c, "N^L"));
  std::vector<CheckResult> out;
  for (long q : ctx.q_labels()) {
    OpPoly t2 = ctx.tau2(q);
    CheckResult r = op_poly_commutator_zero(c, t2, t2, 0, id);
    r.params["Q"] = q;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckResult> check_comm_sector(RunContext& ctx) {
  const auto& c = ctx.config();
  const std::string id = "comm.tau2.sector";
  if (!c.loop_compatible())
    return one(CheckResult::skip(id, "L not a multiple of N", base_params(c)));
  if (c.space_dim() > kFullSpaceCap) return one(skip_large(id, c, "N^L"));
  return one(verify_tau2_sector_commutation(c));
}

std::vector<CheckResult> check_comm_oppoly(RunContext& ctx) {
  const auto& c = ctx.config();
  const std::string id = "comm.tau2.oppoly";
  if (!c.loop_compatible())
    return one(CheckResult::skip(id, "L not a multiple of N", base_params(c)));
  if (c.space_dim() > kFullSpaceCap) return one(skip_large(id, c, "N^L"));
  return one(verify_tau2_commutation_identities(c));
}

std::vector<CheckResult> check_gen_h0(RunContext& ctx) {
  return one(verify_h0_consistency(ctx.config()));
}

std::vector<CheckResult> check_h_route(RunContext& ctx) {
  const auto& c = ctx.config();
  const std::string id = "gen.loop.h_route";
  if (!c.loop_compatible())
    return one(CheckResult::skip(id, "L not a multiple of N", base_params(c)));
  if (c.sector_dim() > kExtendCap) return one(skip_large(id, c, "sector dimension"));
  std::vector<CheckResult> out;
  for (const CheckResult& r : ctx.generators().log())
    if (r.id == id) out.push_back(r);
  if (out.empty())
    out.push_back(CheckResult::skip(id, "extension produced no route checks", base_params(c)));
  return out;
}

std::vector<CheckResult> check_hw(RunContext& ctx) {
  const auto& c = ctx.config();
  if (!c.loop_compatible())
    return one(CheckResult::skip("hw.ground", "L not a multiple of N", base_params(c)));
  if (c.sector_dim() > kSectorOpsCap)
    return one(skip_large("hw.ground", c, "sector dimension"));
  return one(verify_highest_weight(c));
}

std::vector<CheckResult> check_partial_serre(RunContext& ctx) {
  const auto& c = ctx.config();
  const std::string id = "serre.partial";
  if (!c.loop_compatible())
    return one(CheckResult::skip(id, "L not a multiple of N", base_params(c)));
  if (c.sector_dim() > kSectorOpsCap) return one(skip_large(id, c, "sector dimension"));
  std::vector<CheckResult> out;
  for (long n = 0; n <= c.loop_rank(); ++n) out.push_back(verify_partial_serre(c, n));
  return out;
}

std::vector<CheckResult> check_adq_oppoly(RunContext& ctx) {
  const auto& c = ctx.config();
  const std::string id = "adq.oppoly";
  if (!c.loop_compatible())
    return one(CheckResult::skip(id, "L not a multiple of N", base_params(c)));
  if (c.space_dim() > kFullSpaceCap) return one(skip_large(id, c, "N^L"));
  std::vector<CheckResult> out;
  for (long m = 1; m < c.n(); ++m) out.push_back(verify_adq_identities(c, m));
  return out;
}

std::vector<CheckResult> check_adq_eigen(RunContext& ctx) {
  const auto& c = ctx.config();
  const std::string id = "adq.eigen";
  if (!c.loop_compatible())
    return one(CheckResult::skip(id, "L not a multiple of N", base_params(c)));
  if (c.space_dim() > kFullSpaceCap) return one(skip_large(id, c, "N^L"));
  std::vector<CheckResult> out;
  for (long q : ctx.q_labels()) {
    if (q < 1 || q >= c.n()) continue;
    out.push_back(verify_adq_eigenvectors(c, q));
  }
  if (out.empty())
    out.push_back(CheckResult::skip(id, "no Q in [1, N-1] requested", base_params(c)));
  return out;
}

std::vector<CheckResult> check_induction(RunContext& ctx) {
  const auto& c = ctx.config();
  const std::string id = "induction.finiteness";
  if (!c.loop_compatible())
    return one(CheckResult::skip(id, "L not a multiple of N", base_params(c)));
  if (c.sector_dim() > kExtendCap) return one(skip_large(id, c, "sector dimension"));
  return one(verify_induction_and_finiteness(c, ctx.generators()));
}

template <class Fn>
std::vector<CheckResult> sl2_guarded(RunContext& ctx, const std::string& id, Fn&& fn) {
  const auto& c = ctx.config();
  if (!c.loop_compatible())
    return one(CheckResult::skip(id, "L not a multiple of N", base_params(c)));
  if (c.sector_dim() > kExtendCap) return one(skip_large(id, c, "sector dimension"));
  return one(fn());
}

std::vector<CheckResult> check_sl2_relations(RunContext& ctx) {
  return sl2_guarded(ctx, "sl2.relations",
                     [&] { return verify_sl2_relations(ctx.decomposition(), ctx.rc().tol); });
}

std::vector<CheckResult> check_sl2_nilpotency(RunContext& ctx) {
  return sl2_guarded(ctx, "sl2.nilpotency", [&] {
    return verify_nilpotency_and_weights(ctx.decomposition(), ctx.rc().tol);
  });
}

std::vector<CheckResult> check_sl2_vandermonde(RunContext& ctx) {
  return sl2_guarded(ctx, "sl2.vandermonde", [&] {
    return verify_vandermonde_reconstruction(ctx.decomposition(), ctx.generators(),
                                             ctx.rc().tol);
  });
}

std::vector<CheckResult> check_sl2_eigenspace(RunContext& ctx) {
  return sl2_guarded(ctx, "sl2.eigenspace", [&]() -> CheckResult {
    const auto& c = ctx.config();
    Json params = base_params(c);
    const std::string id = "sl2.eigenspace";
    EigenspaceResult es = generate_eigenspace(ctx.decomposition(), ctx.rc().tol);
    params["rank"] = es.rank;
    params["expected"] = es.expected;
    if (es.rank != es.expected)
      return CheckResult::fail(id, Json{{"rank", es.rank}, {"expected", es.expected}}, params);
    // every generated vector is a tau2(t*) eigenvector with eigenvalue eps_0
    const std::vector<Rank> sector = c.sector_basis(0);
    OpPoly t2 = ctx.tau2(0).restrict_to(sector);
    for (Cplx t : ctx.t_samples()) {
      DenseMatrix m = DenseMatrix::Zero(sector.size(), sector.size());
      Cplx tp{1.0, 0.0};
      for (long k = 0; k <= t2.degree(); ++k) {
        m += tp * embed_dense(t2.coeff(k));
        tp *= t;
      }
      const Cplx eps = epsilon_poly(c, 0).eval_complex(t);
      const double scale = std::max(1.0, m.norm());
      for (long col = 0; col < es.basis.cols(); ++col) {
        DenseVector v = es.basis.col(col);
        double res = (m * v - eps * v).norm() / (scale * std::max(1e-300, v.norm()));
        if (res > ctx.rc().tol)
          return CheckResult::fail(id,
                                   Json{{"t", complex_str(t)}, {"subset", col},
                                        {"residual", res}},
                                   params);
      }
    }
    return CheckResult::pass(id, params);
  });
}

std::vector<CheckResult> check_spectrum_multiplicity(RunContext& ctx) {
  const auto& c = ctx.config();
  const std::string id = "spectrum.multiplicity";
  if (!c.loop_compatible())
    return one(CheckResult::skip(id, "L not a multiple of N", base_params(c)));
  if (c.space_dim() > kFullSpaceCap) return one(skip_large(id, c, "N^L"));
  std::vector<CheckResult> out;
  const long expected = 1L << c.loop_rank();
  for (Cplx t : ctx.t_samples()) {
    Json params = base_params(c);
    params["t"] = complex_str(t);
    params["Q"] = 0;
    SpectrumTable table = spectrum(c, t, 0, 1e-7);
    params["epsilon_multiplicity"] = table.epsilon_multiplicity;
    if (table.epsilon_multiplicity != expected) {
      out.push_back(CheckResult::fail(
          id, Json{{"multiplicity", table.epsilon_multiplicity}, {"expected", expected}},
          params));
    } else {
      out.push_back(CheckResult::pass(id, params));
    }
  }
  return out;
}

std::vector<CheckResult> check_serre_exhaustive(RunContext& ctx) {
  const auto& c = ctx.config();
  const std::string id = "serre.q0.exhaustive";
  if (!c.loop_compatible())
    return one(CheckResult::skip(id, "L not a multiple of N", base_params(c)));
  if (c.sector_dim() > kSectorOpsCap)
    return one(CheckResult::skip(id, "sector too large for the exhaustive sweep; use serre.q0.sampled",
                                 base_params(c)));
  SampleSpec spec;
  spec.exhaustive = true;
  return one(verify_serre(c, spec, ctx.rc().workers));
}

std::vector<CheckResult> check_serre_sampled(RunContext& ctx) {
  const auto& c = ctx.config();
  if (!c.loop_compatible())
    return one(CheckResult::skip("serre.q0.sampled", "L not a multiple of N", base_params(c)));
  SampleSpec spec;
  spec.exhaustive = false;
  spec.count = ctx.rc().samples;
  spec.seed = ctx.rc().seed;
  return one(verify_serre(c, spec, ctx.rc().workers));
}

const std::vector<CheckEntry>& registry() {
  // ordered roughly from cheapest to costliest
  static const std::vector<CheckEntry> entries{
      {"lambda.table", check_lambda},
      {"drinfeld.roots", check_drinfeld_roots},
      {"eigen.ground", check_eigen_ground},
      {"boundary.coeffs", check_boundary_coeffs},
      {"charge.grading", check_charge_grading},
      {"oracle.divided_power", check_oracle},
      {"fourier.consistency", check_fourier},
      {"tau2.selfcomm", check_tau2_selfcomm},
      {"comm.tau2.sector", check_comm_sector},
      {"comm.tau2.oppoly", check_comm_oppoly},
      {"gen.h0", check_gen_h0},
      {"gen.loop.h_route", check_h_route},
      {"hw.ground", check_hw},
      {"serre.partial", check_partial_serre},
      {"adq.oppoly", check_adq_oppoly},
      {"adq.eigen", check_adq_eigen},
      {"induction.finiteness", check_induction},
      {"sl2.relations", check_sl2_relations},
      {"sl2.nilpotency", check_sl2_nilpotency},
      {"sl2.vandermonde", check_sl2_vandermonde},
      {"sl2.eigenspace", check_sl2_eigenspace},
      {"spectrum.multiplicity", check_spectrum_multiplicity},
      {"serre.q0.exhaustive", check_serre_exhaustive},
      {"serre.q0.sampled", check_serre_sampled},
  };
  return entries;
}

} // namespace

const std::vector<std::string>& available_check_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& e : registry()) v.push_back(e.id);
    return v;
  }();
  return ids;
}

Json RunConfig::to_json() const {
  Json ts = Json::array();
  for (Cplx t : t_samples) ts.push_back(Json::array({t.real(), t.imag()}));
  return Json{{"N", n},           {"L", l},       {"Q", q_list},   {"checks", checks},
              {"seed", seed},     {"samples", samples}, {"tol", tol},
              {"t_samples", ts},  {"cache_dir", cache_dir}, {"workers", workers}};
}

Json Report::to_json() const {
  Json checks = Json::array();
  for (const auto& r : results) checks.push_back(r.to_json());
  return Json{{"schema", kReportSchema},
              {"tool_version", kToolVersion},
              {"config", config},
              {"checks", checks},
              {"summary", Json{{"pass", n_pass}, {"fail", n_fail}, {"skip", n_skip}}},
              {"elapsed_ms", elapsed_ms}};
}

std::string Report::pretty() const {
  std::ostringstream os;
  for (const auto& r : results) {
    os << to_string(r.status) << "  " << r.id;
    if (!r.params.empty()) os << "  " << r.params.dump();
    if (r.status != CheckStatus::pass && r.witness) os << "\n      " << r.witness->dump();
    os << "\n";
  }
  os << "pass " << n_pass << ", fail " << n_fail << ", skip " << n_skip << "\n";
  return os.str();
}

Report run(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<const CheckEntry*> selected;
  const bool all = cfg.checks.empty() ||
                   (cfg.checks.size() == 1 && cfg.checks[0] == "all");
  if (all) {
    for (const auto& e : registry()) selected.push_back(&e);
  } else {
    for (const auto& want : cfg.checks) {
      const CheckEntry* found = nullptr;
      for (const auto& e : registry())
        if (e.id == want) found = &e;
      if (!found) {
        std::string msg = "unknown check id \"" + want + "\"; available:";
        for (const auto& id : available_check_ids()) msg += " " + id;
        throw std::invalid_argument(msg);
      }
      selected.push_back(found);
    }
  }

  RunContext ctx(cfg);
  std::vector<std::vector<CheckResult>> slots(selected.size());
  parallel_for(static_cast<long>(selected.size()), cfg.workers, [&](long i) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<CheckResult> rs;
    try {
      rs = selected[i]->fn(ctx);
    } catch (const std::exception& e) {
      rs = one(CheckResult::fail(selected[i]->id, Json{{"exception", e.what()}},
                                 Json{{"N", cfg.n}, {"L", cfg.l}}));
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    for (auto& r : rs)
      if (r.elapsed_ms == 0.0) r.elapsed_ms = ms / static_cast<double>(rs.size());
    slots[i] = std::move(rs);
  });

  Report report;
  report.config = cfg.to_json();
  for (auto& rs : slots)
    for (auto& r : rs) report.results.push_back(std::move(r));
  std::stable_sort(report.results.begin(), report.results.end(),
                   [](const CheckResult& a, const CheckResult& b) {
                     if (a.id != b.id) return a.id < b.id;
                     return a.params.dump() < b.params.dump();
                   });
  for (const auto& r : report.results) {
    switch (r.status) {
      case CheckStatus::pass: ++report.n_pass; break;
      case CheckStatus::fail: ++report.n_fail; break;
      case CheckStatus::skip: ++report.n_skip; break;
    }
  }
  report.warnings = ctx.cache().warnings();
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path);
    out << report.to_json().dump(2) << "\n";
  }
  return report;
}

std::string spectrum_csv(const RunConfig& cfg) {
  LatticeConfig config(cfg.n, cfg.l);
  std::vector<Cplx> ts = cfg.t_samples.empty() ? std::vector<Cplx>{Cplx(0.5, 0.0)}
                                               : cfg.t_samples;
  std::vector<long> qs = cfg.q_list;
  if (qs.empty())
    for (long q = 0; q < cfg.n; ++q) qs.push_back(q);
  std::ostringstream os;
  os << "t_re,t_im,Q,eigenvalue_re,eigenvalue_im,multiplicity\n";
  for (Cplx t : ts)
    for (long q : qs) {
      SpectrumTable table = spectrum(config, t, q, 1e-7);
      for (const auto& row : table.rows)
        os << t.real() << "," << t.imag() << "," << q << "," << row.eigenvalue.real() << ","
           << row.eigenvalue.imag() << "," << row.multiplicity << "\n";
    }
  return os.str();
}

Json decompose_summary(const RunConfig& cfg) {
  RunContext ctx(cfg);
  const auto& c = ctx.config();
  if (!c.loop_compatible())
    return Json{{"error", "L must be a multiple of N for the sl2 pipeline"}};
  DrinfeldData d = ctx.lambda();
  Json lam = Json::array();
  for (const auto& v : d.lambdas) lam.push_back(v.str());
  RootSet roots = drinfeld_roots(d, cfg.tol);
  Json rj = Json::array();
  for (Cplx z : roots.roots) rj.push_back(Json::array({z.real(), z.imag()}));
  Sl2Decomposition& dec = ctx.decomposition();
  CheckResult rel = verify_sl2_relations(dec, cfg.tol);
  CheckResult nil = verify_nilpotency_and_weights(dec, cfg.tol);
  CheckResult van = verify_vandermonde_reconstruction(dec, ctx.generators(), cfg.tol);
  EigenspaceResult es = generate_eigenspace(dec, cfg.tol);
  return Json{{"N", cfg.n},
              {"L", cfg.l},
              {"r", d.r},
              {"lambdas", lam},
              {"roots", rj},
              {"separation", roots.separation},
              {"residual", roots.residual},
              {"relations", rel.to_json()},
              {"nilpotency", nil.to_json()},
              {"vandermonde", van.to_json()},
              {"eigenspace_rank", es.rank},
              {"eigenspace_expected", es.expected}};
}

std::vector<std::string> gen_operators(const RunConfig& cfg) {
  if (cfg.cache_dir.empty())
    throw std::invalid_argument("gen requires --cache-dir");
  RunContext ctx(cfg);
  const auto& c = ctx.config();
  std::vector<std::string> names;
  ctx.blocks();
  for (const char* b : {"a", "b", "c", "d"})
    for (long k = 0; k <= c.l(); ++k)
      names.push_back(std::string("monodromy.") + b + ".t" + std::to_string(k));
  if (c.loop_compatible() && c.sector_dim() <= kSectorOpsCap) {
    ctx.generators();
    for (const char* g : {"x0minus", "x1minus", "x0plus", "xm1plus"})
      names.push_back(std::string(g) + ".n1.sector");
  }
  return names;
}

} // namespace tau2
