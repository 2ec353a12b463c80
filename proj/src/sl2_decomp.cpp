#include "tau2loop/sl2_decomp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>

namespace tau2 {

DenseMatrix embed_dense(const SparseOp& op) {
  DenseMatrix m = DenseMatrix::Zero(op.dim(), op.dim());
  op.for_each([&](Rank i, Rank j, const Cyclotomic& v) { m(i, j) = v.embed(); });
  return m;
}

RootSet drinfeld_roots(const DrinfeldData& data, double tol) {
  const long r = data.r;
  std::vector<double> lam(r + 1);
  double coeff_scale = 0.0;
  for (long i = 0; i <= r; ++i) {
    lam[i] = data.lambdas[i].convert_to<double>();
    coeff_scale = std::max(coeff_scale, std::abs(lam[i]));
  }
  // Lambda_r = 1: companion matrix of the monic polynomial
  DenseMatrix comp = DenseMatrix::Zero(r, r);
  for (long i = 1; i < r; ++i) comp(i, i - 1) = 1.0;
  for (long i = 0; i < r; ++i) comp(i, r - 1) = -lam[i];
  Eigen::ComplexEigenSolver<DenseMatrix> solver(comp);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("drinfeld_roots: eigensolver failed");

  auto horner = [&](Cplx z, bool derivative) {
    Cplx acc{0.0, 0.0};
    if (derivative) {
      for (long i = r; i >= 1; --i) acc = acc * z + static_cast<double>(i) * lam[i];
    } else {
      for (long i = r; i >= 0; --i) acc = acc * z + lam[i];
    }
    return acc;
  };

  RootSet out;
  for (long m = 0; m < r; ++m) {
    Cplx z = solver.eigenvalues()(m);
    Cplx dp = horner(z, true);
    if (std::abs(dp) > 0) z -= horner(z, false) / dp; // one Newton polish pass
    out.roots.push_back(z);
  }
  std::sort(out.roots.begin(), out.roots.end(), [](Cplx a, Cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  out.residual = 0.0;
  double max_root = 0.0;
  for (Cplx z : out.roots) {
    out.residual = std::max(out.residual, std::abs(horner(z, false)) / coeff_scale);
    max_root = std::max(max_root, std::abs(z));
  }
  out.separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.roots.size(); ++i)
    for (std::size_t j = i + 1; j < out.roots.size(); ++j)
      out.separation = std::min(out.separation, std::abs(out.roots[i] - out.roots[j]));
  if (r >= 2 && out.separation <= tol * std::max(1.0, max_root))
    throw std::runtime_error("drinfeld_roots: repeated root within tolerance, separation " +
                             std::to_string(out.separation));
  return out;
}

Sl2Decomposition build_sl2(const LoopGenerators& gens, const RootSet& roots, double tol) {
  const long r = static_cast<long>(roots.roots.size());
  Sl2Decomposition dec;
  dec.r = r;
  dec.roots = roots.roots;

  DenseMatrix vand(r, r);
  for (long j = 0; j < r; ++j)
    for (long m = 0; m < r; ++m) vand(j, m) = std::pow(roots.roots[m], static_cast<double>(j));
  Eigen::JacobiSVD<DenseMatrix> svd(vand);
  const double cond = svd.singularValues()(0) / svd.singularValues()(r - 1);
  if (!(cond < 1.0 / tol))
    throw std::runtime_error("build_sl2: Vandermonde condition " + std::to_string(cond) +
                             " exceeds 1/tol");
  DenseMatrix inv = vand.inverse();

  std::vector<DenseMatrix> xm, xp, hh;
  for (long j = 0; j < r; ++j) {
    xm.push_back(embed_dense(gens.x_minus(j)));
    xp.push_back(embed_dense(gens.x_plus(j)));
    hh.push_back(embed_dense(gens.h(j)));
  }
  const Rank dim = static_cast<Rank>(xm[0].rows());
  for (long m = 0; m < r; ++m) {
    DenseMatrix em = DenseMatrix::Zero(dim, dim);
    DenseMatrix ep = DenseMatrix::Zero(dim, dim);
    DenseMatrix hm = DenseMatrix::Zero(dim, dim);
    for (long j = 0; j < r; ++j) {
      em += inv(m, j) * xm[j];
      ep += inv(m, j) * xp[j];
      hm += inv(m, j) * hh[j];
    }
    dec.e_minus.push_back(std::move(em));
    dec.e_plus.push_back(std::move(ep));
    dec.h.push_back(std::move(hm));
  }
  return dec;
}

namespace {

double op_scale(const Sl2Decomposition& dec) {
  double s = 1.0;
  for (long m = 0; m < dec.r; ++m) {
    s = std::max(s, dec.e_minus[m].norm());
    s = std::max(s, dec.e_plus[m].norm());
    s = std::max(s, dec.h[m].norm());
  }
  return s;
}

// Orthonormal frame of the subspace generated from |Omega> by the lowering
// triples. The triple relations are claimed on this subspace; away from it
// the evaluation form of the generators need not hold.
DenseMatrix eigenspace_frame(const Sl2Decomposition& dec, double tol) {
  EigenspaceResult es = generate_eigenspace(dec, tol);
  Eigen::JacobiSVD<DenseMatrix> svd(es.basis, Eigen::ComputeThinU);
  const double smax = svd.singularValues()(0);
  long rank = 0;
  for (long i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol * smax) ++rank;
  return svd.matrixU().leftCols(rank);
}

} // namespace

CheckResult verify_sl2_relations(const Sl2Decomposition& dec, double tol) {
  Json params{{"r", dec.r}, {"tol", tol}};
  const std::string id = "sl2.relations";
  const double scale = op_scale(dec);
  const DenseMatrix frame = eigenspace_frame(dec, tol);
  double worst = 0.0, worst_full = 0.0;
  for (long m = 0; m < dec.r; ++m) {
    for (long n = 0; n < dec.r; ++n) {
      const double delta = m == n ? 1.0 : 0.0;
      const DenseMatrix d1 = dec.e_plus[m] * dec.e_minus[n] - dec.e_minus[n] * dec.e_plus[m] -
                             delta * dec.h[m];
      const DenseMatrix d2 = dec.h[m] * dec.e_minus[n] - dec.e_minus[n] * dec.h[m] -
                             2.0 * delta * dec.e_minus[m];
      const DenseMatrix d3 = dec.h[m] * dec.e_plus[n] - dec.e_plus[n] * dec.h[m] +
                             2.0 * delta * dec.e_plus[m];
      double r1 = (d1 * frame).norm() / scale;
      double r2 = (d2 * frame).norm() / scale;
      double r3 = (d3 * frame).norm() / scale;
      worst = std::max({worst, r1, r2, r3});
      worst_full = std::max({worst_full, d1.norm() / scale, d2.norm() / scale,
                             d3.norm() / scale});
      if (r1 > tol || r2 > tol || r3 > tol)
        return CheckResult::fail(id,
                                 Json{{"m", m}, {"n", n},
                                      {"residuals", Json::array({r1, r2, r3})},
                                      {"scale", scale}},
                                 params);
    }
  }
  params["worst_relative_residual"] = worst;
  params["full_sector_residual"] = worst_full; // recorded, not asserted
  return CheckResult::pass(id, params);
}

CheckResult verify_nilpotency_and_weights(const Sl2Decomposition& dec, double tol) {
  Json params{{"r", dec.r}, {"tol", tol}};
  const std::string id = "sl2.nilpotency";
  const Rank dim = static_cast<Rank>(dec.e_minus[0].rows());
  DenseVector omega = DenseVector::Zero(dim);
  omega(0) = 1.0; // |Omega> is the first charge-0 sector state
  Json weights = Json::array();
  double worst = 0.0;
  for (long m = 0; m < dec.r; ++m) {
    const double scale = std::max(1.0, dec.e_minus[m].norm());
    double res = (dec.e_minus[m] * (dec.e_minus[m] * omega)).norm() / (scale * scale);
    worst = std::max(worst, res);
    if (res > tol)
      return CheckResult::fail(id, Json{{"m", m}, {"residual", res}}, params);
    // observed H_m weight on |Omega>, recorded only
    DenseVector hw = dec.h[m] * omega;
    Cplx w = hw(0);
    weights.push_back(Json::array({w.real(), w.imag()}));
  }
  params["worst_relative_residual"] = worst;
  params["h_weights_on_omega"] = weights;
  return CheckResult::pass(id, params);
}

CheckResult verify_vandermonde_reconstruction(const Sl2Decomposition& dec,
                                              const LoopGenerators& gens, double tol) {
  Json params{{"r", dec.r}, {"tol", tol}};
  const std::string id = "sl2.vandermonde";
  const Rank dim = static_cast<Rank>(dec.e_minus[0].rows());
  const DenseMatrix frame = eigenspace_frame(dec, tol);
  double worst = 0.0;
  for (long j = 0; j <= dec.r; ++j) {
    DenseMatrix xm = DenseMatrix::Zero(dim, dim);
    DenseMatrix xp = DenseMatrix::Zero(dim, dim);
    DenseMatrix hh = DenseMatrix::Zero(dim, dim);
    for (long m = 0; m < dec.r; ++m) {
      const Cplx zj = std::pow(dec.roots[m], static_cast<double>(j));
      xm += zj * dec.e_minus[m];
      xp += zj * dec.e_plus[m];
      hh += zj * dec.h[m];
    }
    DenseMatrix exm = embed_dense(gens.x_minus(j));
    DenseMatrix exp_ = embed_dense(gens.x_plus(j));
    DenseMatrix ehh = embed_dense(gens.h(j));
    const double s = std::max({1.0, exm.norm(), exp_.norm(), ehh.norm()});
    double res;
    if (j < dec.r) {
      // rows the solve was built from: exact on the whole sector
      res = std::max({(xm - exm).norm(), (xp - exp_).norm(), (hh - ehh).norm()}) / s;
    } else {
      // out-of-sample row: the finiteness sums pin it on the eigenspace only
      res = std::max({((xm - exm) * frame).norm(), ((xp - exp_) * frame).norm(),
                      ((hh - ehh) * frame).norm()}) /
            s;
      params["full_sector_residual_at_r"] =
          std::max({(xm - exm).norm(), (xp - exp_).norm(), (hh - ehh).norm()}) / s;
    }
    worst = std::max(worst, res);
    if (res > tol)
      return CheckResult::fail(id, Json{{"j", j}, {"residual", res}}, params);
  }
  params["worst_relative_residual"] = worst;
  return CheckResult::pass(id, params);
}

EigenspaceResult generate_eigenspace(const Sl2Decomposition& dec, double tol) {
  const Rank dim = static_cast<Rank>(dec.e_minus[0].rows());
  const long count = 1L << dec.r;
  EigenspaceResult out;
  out.expected = count;
  out.basis = DenseMatrix::Zero(dim, count);
  DenseVector omega = DenseVector::Zero(dim);
  omega(0) = 1.0;
  for (long mask = 0; mask < count; ++mask) {
    DenseVector v = omega;
    for (long m = 0; m < dec.r; ++m)
      if (mask & (1L << m)) v = dec.e_minus[m] * v;
    out.basis.col(mask) = v;
  }
  Eigen::JacobiSVD<DenseMatrix> svd(out.basis);
  const double smax = svd.singularValues()(0);
  long rank = 0;
  for (long i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol * smax) ++rank;
  out.rank = rank;
  return out;
}

SpectrumTable spectrum(const LatticeConfig& config, Cplx t_sample, long q, double cluster_tol) {
  SpectrumTable table;
  table.t = t_sample;
  table.q = q;
  const std::vector<Rank> sector = config.sector_basis(0);
  OpPoly tau2 = tau2_edge(config, q).restrict_to(sector);
  DenseMatrix m = DenseMatrix::Zero(sector.size(), sector.size());
  Cplx tp{1.0, 0.0};
  for (long k = 0; k <= tau2.degree(); ++k) {
    m += tp * embed_dense(tau2.coeff(k));
    tp *= t_sample;
  }
  Eigen::ComplexEigenSolver<DenseMatrix> solver(m);
  if (solver.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failed");
  std::vector<Cplx> evs(solver.eigenvalues().data(),
                        solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(evs.begin(), evs.end(), [](Cplx a, Cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  double scale = 1.0;
  for (Cplx e : evs) scale = std::max(scale, std::abs(e));
  const double tol = cluster_tol * scale;
  // greedy clustering against running cluster means; the list is tiny
  std::vector<Cplx> sums;
  std::vector<long> counts;
  for (Cplx e : evs) {
    bool placed = false;
    for (std::size_t c = 0; c < sums.size(); ++c) {
      if (std::abs(e - sums[c] / static_cast<double>(counts[c])) < tol) {
        sums[c] += e;
        ++counts[c];
        placed = true;
        break;
      }
    }
    if (!placed) {
      sums.push_back(e);
      counts.push_back(1);
    }
  }
  for (std::size_t c = 0; c < sums.size(); ++c)
    table.rows.push_back({sums[c] / static_cast<double>(counts[c]), counts[c]});
  std::sort(table.rows.begin(), table.rows.end(), [](const SpectrumRow& a, const SpectrumRow& b) {
    return a.eigenvalue.real() != b.eigenvalue.real()
               ? a.eigenvalue.real() < b.eigenvalue.real()
               : a.eigenvalue.imag() < b.eigenvalue.imag();
  });
  table.epsilon = epsilon_poly(config, q).eval_complex(t_sample);
  table.epsilon_multiplicity = 0;
  for (const auto& row : table.rows)
    if (std::abs(row.eigenvalue - table.epsilon) < std::max(tol, cluster_tol * std::abs(table.epsilon)))
      table.epsilon_multiplicity += row.multiplicity;
  return table;
}

} // namespace tau2
