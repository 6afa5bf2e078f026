#include "covalg/structure_theorem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/Dense>

namespace covalg {

namespace {

// Pseudo-inverse square root of a positive grade-0 element, computed inside
// each weight-homogeneous subspace so the result is exactly grade 0.
Element grade_zero_isqrt(const CircleAction& act, const Element& xx, double cutoff,
                         int* rank) {
  const FdAlgebra& alg = act.algebra();
  Element out = Element::zero(alg);
  if (rank) *rank = 0;
  for (int b = 0; b < alg.num_blocks(); ++b) {
    std::map<int, std::vector<int>> groups;
    for (int r = 0; r < alg.block_size(b); ++r)
      groups[act.weight(b, r)].push_back(r);
    for (const auto& [w, idx] : groups) {
      const int m = static_cast<int>(idx.size());
      Matrix sub(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) sub(i, j) = xx.block(b)(idx[i], idx[j]);
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sub + sub.adjoint()));
      for (int k = 0; k < m; ++k) {
        const double lam = es.eigenvalues()(k);
        if (lam <= cutoff) continue;
        if (rank) ++(*rank);
        Vector wv = es.eigenvectors().col(k);
        const double f = 1.0 / std::sqrt(lam);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            out.block(b)(idx[i], idx[j]) += f * wv(i) * std::conj(wv(j));
      }
    }
  }
  return out;
}

std::string sizes_string(const std::vector<int>& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << "]";
  return os.str();
}

}  // namespace

WitnessSearch regularity_witness(const CircleAction& act, std::uint64_t seed,
                                 int max_retries, const Tolerances& tol) {
  WitnessSearch out;
  const FdAlgebra& alg = act.algebra();
  auto b1 = spectral_subspace(act, 1);
  if (b1.dim() == 0) {
    out.found = true;
    out.detail = "grade-1 space is zero";
    out.witness = RegularityWitness{act, Element::zero(alg), 0.0};
    return out;
  }
  std::vector<Element> star_b1;
  star_b1.reserve(b1.basis.size());
  for (const auto& x : b1.basis) star_b1.push_back(x.adjoint());
  Element e_r = span_unit(product_span(star_b1, b1.basis));  // unit of B_1*B_1
  Element e_l = span_unit(product_span(b1.basis, star_b1));  // unit of B_1B_1*

  Rng rng(seed);
  double best = 1e300;
  int generic_rank = 0;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Element x = Element::zero(alg);
    for (const auto& b : b1.basis) x = x + b * rng.cgauss();
    const double nx = x.hs_norm();
    if (nx < 1e-12) continue;
    x = x * Complex(1.0 / nx, 0.0);
    int rank = 0;
    Element isq = grade_zero_isqrt(act, x.adjoint() * x, tol.cutoff, &rank);
    generic_rank = std::max(generic_rank, rank);
    Element v = x * isq;
    const double res = std::max((v.adjoint() * v - e_r).hs_norm(),
                                (v * v.adjoint() - e_l).hs_norm());
    best = std::min(best, res);
    if (res <= tol.isometry) {
      out.found = true;
      out.witness = RegularityWitness{act, v, res};
      return out;
    }
  }
  const int rank_r = static_cast<int>(std::llround(e_r.trace().real()));
  const int rank_l = static_cast<int>(std::llround(e_l.trace().real()));
  std::ostringstream os;
  if (rank_r != rank_l) {
    out.provable_obstruction = true;
    os << "support ranks differ: B_1*B_1 has rank " << rank_r
       << ", B_1B_1* has rank " << rank_l;
  } else if (generic_rank < rank_r) {
    out.provable_obstruction = true;
    os << "generic rank " << generic_rank << " of B_1 is below the support rank "
       << rank_r;
  } else {
    os << "no witness found after " << max_retries
       << " draws; best residual " << best;
  }
  out.detail = os.str();
  return out;
}

InducedSystem build_theta_lambda(const RegularityWitness& w,
                                 const WedderburnOptions& opts) {
  const CircleAction& act = w.action;
  const FdAlgebra& amb = act.algebra();
  auto b0 = spectral_subspace(act, 0);

  std::vector<Matrix> gens;
  Matrix fp = Matrix::Zero(amb.carrier_dim(), amb.carrier_dim());
  for (std::size_t i = 0; i < b0.basis.size(); ++i)
    fp += b0.basis[i].full() / double(i + 2);
  gens.push_back(fp);
  for (const auto& e : b0.basis) gens.push_back(e.full());
  Wedderburn wed = wedderburn(gens, opts);
  if (wed.dim() != static_cast<int>(b0.basis.size()))
    throw Error("build_theta_lambda: fixed-algebra span changed dimension");
  const FdAlgebra& a0 = wed.algebra;

  double worst = wed.dec.residual;
  auto ideal_of = [&](const Element& unit_elt) {
    Element a = wed.to_abstract(unit_elt.full());
    std::vector<int> blocks;
    for (int b = 0; b < a0.num_blocks(); ++b) {
      Matrix blk = a.block(b);
      const double as_unit =
          (blk - Matrix::Identity(blk.rows(), blk.cols())).cwiseAbs().maxCoeff();
      const double as_zero = blk.cwiseAbs().maxCoeff();
      if (as_unit <= 1e-6) {
        blocks.push_back(b);
        worst = std::max(worst, as_unit);
      } else if (as_zero <= 1e-6) {
        worst = std::max(worst, as_zero);
      } else {
        throw Error("build_theta_lambda: support unit is not a central projection");
      }
    }
    return Ideal(a0, blocks);
  };
  Ideal src = ideal_of(w.v.adjoint() * w.v);
  Ideal dst = ideal_of(w.v * w.v.adjoint());

  const Matrix vf = w.v.full();
  auto conj_image = [&](const Element& e) {
    return wed.to_abstract(vf * wed.to_concrete(e) * vf.adjoint());
  };

  std::map<int, int> sigma;
  std::map<int, Matrix> unitaries;
  for (int b : src.blocks()) {
    const int n = a0.block_size(b);
    Element bu = Element::zero(a0);
    bu.block(b).setIdentity();
    Element img = conj_image(bu);
    int tgt = -1;
    for (int c : dst.blocks())
      if (img.block(c).cwiseAbs().maxCoeff() > 0.5) {
        if (tgt >= 0)
          throw Error("build_theta_lambda: block image is not a single block");
        tgt = c;
      }
    if (tgt < 0 || a0.block_size(tgt) != n)
      throw Error("build_theta_lambda: block image mismatch");
    Element tgt_unit = Element::zero(a0);
    tgt_unit.block(tgt).setIdentity();
    worst = std::max(worst, (img - tgt_unit).max_abs());

    auto unit_image = [&](int r, int s) {
      Element e = Element::zero(a0);
      e.block(b)(r, s) = 1.0;
      return conj_image(e);
    };
    Matrix f11 = unit_image(0, 0).block(tgt);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (f11 + f11.adjoint()));
    if (std::abs(es.eigenvalues()(n - 1) - 1.0) > 1e-6)
      throw Error("build_theta_lambda: corner image is not a rank-one projection");
    Vector col = es.eigenvectors().col(n - 1);
    int kmax = 0;
    for (int k = 1; k < n; ++k)
      if (std::abs(col(k)) > std::abs(col(kmax))) kmax = k;
    col *= std::conj(col(kmax)) / std::abs(col(kmax));
    Matrix u(n, n);
    u.col(0) = col;
    for (int r = 1; r < n; ++r) u.col(r) = unit_image(r, 0).block(tgt) * col;
    worst = std::max(worst,
                     (u.adjoint() * u - Matrix::Identity(n, n)).cwiseAbs().maxCoeff());
    for (int s = 0; s < n; ++s)
      for (int r = 0; r < n; ++r) {
        Matrix expect = Matrix::Zero(n, n);
        expect(r, s) = 1.0;
        worst = std::max(worst, (unit_image(r, s).block(tgt) -
                                 u * expect * u.adjoint())
                                    .cwiseAbs()
                                    .maxCoeff());
      }
    sigma[b] = tgt;
    unitaries[b] = u;
  }
  if (worst > 1e-5)
    throw Error("build_theta_lambda: induced map failed residual validation");
  System theta = make_system(a0, src, dst, sigma, unitaries);
  return InducedSystem{std::move(wed), std::move(theta), w.v, worst};
}

Element lambda_map(const RegularityWitness& w, const Element& t) { return w.v * t; }
Element rho_map(const RegularityWitness& w, const Element& t) { return t * w.v; }
Element lambda_dagger(const RegularityWitness& w, const Element& x) {
  return w.v.adjoint() * x;
}
Element rho_dagger(const RegularityWitness& w, const Element& x) {
  return x * w.v.adjoint();
}

Element witness_power(const Element& v, int n) {
  Element out = Element::identity(v.algebra());
  Element step = n >= 0 ? v : v.adjoint();
  for (int k = 0; k < std::abs(n); ++k) out = out * step;
  return out;
}

Element i_map(const RegularityWitness& w, int n, const Element& x) {
  Element pure = w.action.project_grade(x, n);
  if ((x - pure).hs_norm() > 1e-9 * std::max(1.0, x.hs_norm()))
    throw Error("i_map: element is not of pure grade " + std::to_string(n));
  return pure * witness_power(w.v, -n);
}

Element i_map_inverse(const RegularityWitness& w, int n, const Element& a) {
  return a * witness_power(w.v, n);
}

StructureReport verify_structure_theorem(const CircleAction& act,
                                         std::uint64_t seed) {
  StructureReport rep;
  auto add = [&](std::string name, bool pass, double res, std::string detail = "") {
    rep.checks.push_back({std::move(name), pass, res, std::move(detail)});
  };
  auto finish = [&]() {
    rep.ok = !rep.checks.empty() &&
             std::all_of(rep.checks.begin(), rep.checks.end(),
                         [](const StructureCheck& c) { return c.pass; });
    return rep;
  };

  auto sat = is_semisaturated(act);
  add("semisaturated", sat.semisaturated, 0.0,
      sat.semisaturated
          ? ""
          : "grade " + std::to_string(sat.first_failure) + " is not spanned by powers of B_1");
  if (!sat.semisaturated) return finish();

  auto ws = regularity_witness(act, seed);
  add("regularity-witness", ws.found, ws.found ? ws.witness->residual : 0.0,
      ws.detail);
  if (!ws.found) return finish();
  const RegularityWitness& wit = *ws.witness;

  WedderburnOptions wopts;
  wopts.seed = seed;
  try {
    rep.induced = std::make_shared<InducedSystem>(build_theta_lambda(wit, wopts));
  } catch (const Error& e) {
    add("induced-system", false, 0.0, e.what());
    return finish();
  }
  const InducedSystem& ind = *rep.induced;
  add("induced-system", true, ind.residual,
      "fixed algebra " + sizes_string(ind.b0.algebra.block_sizes()));

  auto bound = chain_bound(ind.theta);
  add("chain-bound", bound.has_value(), 0.0,
      bound ? std::to_string(*bound) : "unbounded");
  if (!bound) return finish();

  // Domain chains of theta' match the graded product ideals:
  // D_{-n} = psi(B_n* B_n), D_n = psi(B_n B_n*).
  {
    bool pass = true;
    double worst = 0.0;
    std::string detail;
    const int top = std::max(act.max_spread(), *bound);
    for (int n = 1; n <= top && pass; ++n) {
      auto bn = spectral_subspace(act, n);
      std::vector<Element> starred;
      for (const auto& x : bn.basis) starred.push_back(x.adjoint());
      auto expect_blocks = [&](const std::vector<Element>& span_basis) {
        std::vector<int> blocks;
        if (span_basis.empty()) return blocks;
        Element unit = span_unit(orthonormal_span(span_basis));
        Element a = ind.b0.to_abstract(unit.full());
        for (int b = 0; b < ind.b0.algebra.num_blocks(); ++b)
          if (a.block(b).cwiseAbs().maxCoeff() > 0.5) blocks.push_back(b);
        return blocks;
      };
      std::vector<Element> ss, ds;
      for (const auto& x : starred)
        for (const auto& y : bn.basis) ss.push_back(x * y);
      for (const auto& x : bn.basis)
        for (const auto& y : starred) ds.push_back(x * y);
      if (expect_blocks(ss) != domain_chain(ind.theta, -n).blocks() ||
          expect_blocks(ds) != domain_chain(ind.theta, n).blocks()) {
        pass = false;
        detail = "mismatch at level " + std::to_string(n);
      }
    }
    add("domain-chains", pass, worst, detail);
    if (!pass) return finish();
  }

  // Dimension equality between the level algebra of theta' and B.
  int dim_l = 0;
  for (int n = -*bound; n <= *bound; ++n) dim_l += domain_chain(ind.theta, n).dim();
  add("dimension", dim_l == act.algebra().dim(), 0.0,
      std::to_string(dim_l) + " vs " + std::to_string(act.algebra().dim()));

  // phi(a delta_n) = a v^n, from the level algebra onto B.
  auto phi = [&](const LElement& x) {
    Element out = Element::zero(act.algebra());
    for (const auto& [n, an] : x.terms()) {
      Element a0 = Element::from_full(act.algebra(), ind.b0.to_concrete(an), 1e-7);
      out = out + a0 * witness_power(ind.v, n);
    }
    return out;
  };

  std::vector<LElement> monomials;
  for (int n = -*bound; n <= *bound; ++n) {
    Ideal dn = domain_chain(ind.theta, n);
    for (int b : dn.blocks())
      for (int s = 0; s < ind.b0.algebra.block_size(b); ++s)
        for (int r = 0; r < ind.b0.algebra.block_size(b); ++r)
          monomials.push_back(LElement::monomial(
              ind.theta, Element::matrix_unit(ind.b0.algebra, b, r, s), n));
  }

  {
    Rng rng(seed ^ 0xabcdef1234567890ULL);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      LElement x = random_l(ind.theta, rng, *bound);
      LElement y = random_l(ind.theta, rng, *bound);
      Element px = phi(x);
      Element py = phi(y);
      const double scale = std::max(1.0, px.hs_norm() * py.hs_norm());
      worst = std::max(worst, (phi(l_mul(x, y)) - px * py).hs_norm() / scale);
      worst = std::max(worst,
                       (phi(l_star(x)) - px.adjoint()).hs_norm() /
                           std::max(1.0, px.hs_norm()));
    }
    for (const auto& m : monomials) {
      for (const auto& [n, an] : m.terms()) {
        Element pm = phi(m);
        worst = std::max(worst, (pm - act.project_grade(pm, n)).hs_norm());
      }
    }
    add("phi-homomorphism", worst <= 1e-9, worst);
  }

  {
    Matrix cols(act.algebra().dim(), static_cast<int>(monomials.size()));
    for (std::size_t i = 0; i < monomials.size(); ++i)
      cols.col(static_cast<int>(i)) = phi(monomials[i]).coords();
    Eigen::BDCSVD<Matrix> svd(cols);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-8 * std::max(1.0, sv(0))) ++rank;
    const bool pass = rank == static_cast<int>(monomials.size()) &&
                      rank == act.algebra().dim();
    add("phi-bijective", pass, 0.0, "rank " + std::to_string(rank));
  }

  try {
    RealizeOptions ropts;
    ropts.seed = seed;
    rep.realization =
        std::make_shared<Realization>(realize_covariance(ind.theta, ropts));
    std::vector<int> got = rep.realization->target.block_sizes();
    std::vector<int> want = act.algebra().block_sizes();
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    add("realized-blocks", got == want, 0.0,
        sizes_string(got) + " vs " + sizes_string(want));
  } catch (const Error& e) {
    add("realized-blocks", false, 0.0, e.what());
  }
  return finish();
}

}  // namespace covalg
