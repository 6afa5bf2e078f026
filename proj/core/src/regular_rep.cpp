#include "covalg/regular_rep.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace covalg {

RegularRep::RegularRep(System sys, int max_level) : sys_(std::move(sys)) {
  auto bound = chain_bound(sys_);
  if (!bound)
    throw Error("RegularRep: the domain chain is unbounded; the covariance "
                "algebra is not finite-dimensional");
  max_level_ = max_level < 0 ? *bound : max_level;
  if (max_level_ < *bound)
    throw Error("RegularRep: max_level is below the chain bound; levels would "
                "be truncated");
  const int levels = 2 * max_level_ + 1;
  ideals_.reserve(levels);
  offsets_.resize(levels);
  block_offsets_.resize(levels);
  for (int n = -max_level_; n <= max_level_; ++n) {
    const int idx = n + max_level_;
    ideals_.push_back(domain_chain(sys_, -n));
    offsets_[idx] = hdim_;
    int pos = hdim_;
    for (int b : ideals_[idx].blocks()) {
      block_offsets_[idx][b] = pos;
      pos += sys_->algebra().block_size(b);
    }
    hdim_ = pos;
  }
}

int RegularRep::level_dim(int n) const {
  if (!in_range(n)) return 0;
  int d = 0;
  for (int b : ideals_[n + max_level_].blocks())
    d += sys_->algebra().block_size(b);
  return d;
}

int RegularRep::level_offset(int n) const {
  if (!in_range(n)) throw Error("RegularRep: level out of range");
  return offsets_[n + max_level_];
}

const Ideal& RegularRep::level_ideal(int n) const {
  if (!in_range(n)) throw Error("RegularRep: level out of range");
  return ideals_[n + max_level_];
}

Matrix RegularRep::level_projection(int n) const {
  Matrix p = Matrix::Zero(hdim_, hdim_);
  if (!in_range(n)) return p;
  const int off = level_offset(n);
  const int d = level_dim(n);
  p.block(off, off, d, d).setIdentity();
  return p;
}

Matrix RegularRep::represent(const LElement& a) const {
  if (a.system() != sys_) throw Error("RegularRep: element of a different system");
  Matrix out = Matrix::Zero(hdim_, hdim_);
  const FdAlgebra& alg = sys_->algebra();
  for (const auto& [m, am] : a.terms()) {
    if (am.max_abs() == 0.0) continue;
    Element pulled = paut_apply(sys_, am, -m);
    for (int n = -max_level_; n <= max_level_; ++n) {
      if (!in_range(n + m)) continue;
      // theta^{-n}( theta^{-m}(a) e_{D_n} ), supported on D_{-n} & D_{-n-m}
      const Ideal& dn = ideals_[max_level_ - n];  // D_n
      if (dn.empty()) continue;
      Element x = paut_apply(sys_, dn.project(pulled), -n);
      const auto& col_off = block_offsets_[n + max_level_];
      const auto& row_off = block_offsets_[n + m + max_level_];
      for (int b : x.support(1e-300)) {
        auto rit = row_off.find(b);
        auto cit = col_off.find(b);
        if (rit == row_off.end() || cit == col_off.end())
          throw Error("RegularRep: representation left the level carrier");
        const int s = alg.block_size(b);
        out.block(rit->second, cit->second, s, s) += x.block(b);
      }
    }
  }
  return out;
}

std::vector<LElement> RegularRep::spanning() const {
  std::vector<LElement> out;
  const FdAlgebra& alg = sys_->algebra();
  for (int n = -max_level_; n <= max_level_; ++n) {
    Ideal dn = domain_chain(sys_, n);
    for (int b : dn.blocks())
      for (int s = 0; s < alg.block_size(b); ++s)
        for (int r = 0; r < alg.block_size(b); ++r)
          out.push_back(LElement::monomial(sys_, Element::matrix_unit(alg, b, r, s), n));
  }
  return out;
}

double RegularRep::min_singular_value() const {
  auto basis = spanning();
  if (basis.empty() || hdim_ == 0) return 0.0;
  Matrix m(hdim_ * hdim_, static_cast<int>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    Matrix r = represent(basis[i]);
    m.col(static_cast<int>(i)) = Eigen::Map<const Vector>(r.data(), r.size());
  }
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().minCoeff();
}

Element Realization::realize(const LElement& a) const {
  return wed.to_abstract(rep.represent(a));
}

LElement Realization::unrealize(const Element& x) const {
  if (!(x.algebra() == target))
    throw Error("Realization: element of a different algebra");
  Vector c = transfer_inv * x.coords();
  LElement out(sys);
  for (int i = 0; i < c.size(); ++i)
    if (std::abs(c(i)) > 1e-13) out = out + basis[static_cast<std::size_t>(i)] * c(i);
  return out;
}

Element Realization::act(const Complex& z, const Element& x) const {
  if (std::abs(std::abs(z) - 1.0) > 1e-9)
    throw Error("Realization: dual action scalar must lie on the unit circle");
  if (!(x.algebra() == target))
    throw Error("Realization: element of a different algebra");
  Element out = x;
  for (int j = 0; j < target.num_blocks(); ++j) {
    const auto& w = weights[static_cast<std::size_t>(j)];
    const int n = target.block_size(j);
    for (int s = 0; s < n; ++s)
      for (int r = 0; r < n; ++r)
        out.block(j)(r, s) *= std::pow(z, w[static_cast<std::size_t>(r)] -
                                              w[static_cast<std::size_t>(s)]);
  }
  return out;
}

Realization realize_covariance(System sys, const RealizeOptions& opts) {
  RegularRep rep(sys, opts.max_level);
  auto basis = rep.spanning();
  if (basis.empty())
    throw Error("realize_covariance: the level algebra is zero");

  // The first generator seeds the fingerprint that orders equal-size blocks,
  // so make it a fixed generic combination of the whole basis.
  std::vector<Matrix> gens;
  Matrix fp = Matrix::Zero(rep.dim(), rep.dim());
  for (std::size_t i = 0; i < basis.size(); ++i)
    fp += rep.represent(basis[i]) / double(i + 2);
  gens.push_back(fp);
  for (const auto& b : basis) gens.push_back(rep.represent(b));

  WedderburnOptions wopts;
  wopts.tol = opts.tol;
  wopts.seed = opts.seed;
  Wedderburn wed = wedderburn(gens, wopts);

  if (wed.dim() != static_cast<int>(basis.size()))
    throw Error("realize_covariance: representation is not injective on the "
                "level algebra");

  // Transport the dual action: the grade-g part of an operator is the sum of
  // its level compressions P_{n+g} M P_n.
  const int ml = rep.max_level();
  auto split = [&](const Vector& coords) {
    Matrix m = wed.matrix_of(coords);
    std::map<int, Matrix> parts;
    for (int nr = -ml; nr <= ml; ++nr)
      for (int nc = -ml; nc <= ml; ++nc) {
        const int dr = rep.level_dim(nr);
        const int dc = rep.level_dim(nc);
        if (dr == 0 || dc == 0) continue;
        Matrix sub = m.block(rep.level_offset(nr), rep.level_offset(nc), dr, dc);
        if (sub.norm() < 1e-14) continue;
        auto [it, fresh] = parts.try_emplace(nr - nc, Matrix::Zero(rep.dim(), rep.dim()));
        it->second.block(rep.level_offset(nr), rep.level_offset(nc), dr, dc) = sub;
      }
    std::vector<std::pair<int, Vector>> out;
    for (const auto& [g, pm] : parts) out.emplace_back(g, wed.coords_of(pm));
    return out;
  };
  auto weights = attach_weights(wed.dec, split);

  Realization real{std::move(sys), std::move(rep), std::move(wed), FdAlgebra{},
                   std::move(weights), std::move(basis), Matrix{}, Matrix{}};
  real.target = real.wed.dec.algebra;

  const int d = static_cast<int>(real.basis.size());
  real.transfer = Matrix(d, d);
  for (int i = 0; i < d; ++i)
    real.transfer.col(i) = real.realize(real.basis[static_cast<std::size_t>(i)]).coords();
  Eigen::PartialPivLU<Matrix> lu(real.transfer);
  real.transfer_inv = lu.inverse();
  const double res = (real.transfer * real.transfer_inv - Matrix::Identity(d, d)).norm() /
                     std::sqrt(double(d));
  if (res > 1e-7)
    throw Error("realize_covariance: level basis transfer failed to invert");
  return real;
}

}  // namespace covalg
