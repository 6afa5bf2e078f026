#include "covalg/circle_action.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace covalg {

CircleAction::CircleAction(FdAlgebra algebra, std::vector<std::vector<int>> weights)
    : alg_(std::move(algebra)), weights_(std::move(weights)) {
  if (static_cast<int>(weights_.size()) != alg_.num_blocks())
    throw Error("CircleAction: one weight list per block required");
  for (int b = 0; b < alg_.num_blocks(); ++b)
    if (static_cast<int>(weights_[b].size()) != alg_.block_size(b))
      throw Error("CircleAction: weight list length must match the block size");
}

int CircleAction::weight(int block, int r) const {
  return weights_.at(block).at(r);
}

int CircleAction::max_spread() const {
  int spread = 0;
  for (const auto& w : weights_) {
    if (w.empty()) continue;
    auto [lo, hi] = std::minmax_element(w.begin(), w.end());
    spread = std::max(spread, *hi - *lo);
  }
  return spread;
}

Element CircleAction::act(const Complex& z, const Element& x) const {
  if (std::abs(std::abs(z) - 1.0) > 1e-9)
    throw Error("CircleAction: the acting scalar must lie on the unit circle");
  if (!(x.algebra() == alg_))
    throw Error("CircleAction: element of a different algebra");
  Element out = x;
  for (int b = 0; b < alg_.num_blocks(); ++b)
    for (int s = 0; s < alg_.block_size(b); ++s)
      for (int r = 0; r < alg_.block_size(b); ++r)
        out.block(b)(r, s) *= std::pow(z, grade(b, r, s));
  return out;
}

Element CircleAction::project_grade(const Element& x, int n) const {
  if (!(x.algebra() == alg_))
    throw Error("CircleAction: element of a different algebra");
  Element out = Element::zero(alg_);
  for (int b = 0; b < alg_.num_blocks(); ++b)
    for (int s = 0; s < alg_.block_size(b); ++s)
      for (int r = 0; r < alg_.block_size(b); ++r)
        if (grade(b, r, s) == n) out.block(b)(r, s) = x.block(b)(r, s);
  return out;
}

GradedSubspace spectral_subspace(const CircleAction& act, int n) {
  GradedSubspace out;
  out.grade = n;
  const FdAlgebra& alg = act.algebra();
  for (int b = 0; b < alg.num_blocks(); ++b)
    for (int s = 0; s < alg.block_size(b); ++s)
      for (int r = 0; r < alg.block_size(b); ++r)
        if (act.grade(b, r, s) == n)
          out.basis.push_back(Element::matrix_unit(alg, b, r, s));
  return out;
}

SaturationCertificate is_semisaturated(const CircleAction& act) {
  SaturationCertificate cert;
  const int spread = act.max_spread();
  auto b1 = spectral_subspace(act, 1);
  std::vector<Element> power = b1.basis;
  cert.semisaturated = true;
  for (int n = 1; n <= spread; ++n) {
    if (n > 1) power = product_span(power, b1.basis);
    cert.power_dims.push_back(static_cast<int>(power.size()));
    cert.graded_dims.push_back(spectral_subspace(act, n).dim());
    if (n >= 2 && cert.power_dims.back() != cert.graded_dims.back() &&
        cert.semisaturated) {
      cert.semisaturated = false;
      cert.first_failure = n;
    }
  }
  return cert;
}

std::vector<Element> orthonormal_span(const std::vector<Element>& v, double tol) {
  std::vector<Element> out;
  if (v.empty()) return out;
  const FdAlgebra& alg = v[0].algebra();
  const int d = alg.dim();
  Matrix bmat(d, 0);
  for (const auto& x : v) {
    if (!(x.algebra() == alg))
      throw Error("orthonormal_span: elements of different algebras");
    Vector c = x.coords();
    const double n0 = c.norm();
    if (n0 < 1e-12) continue;
    c /= n0;
    if (bmat.cols() > 0) {
      c -= bmat * (bmat.adjoint() * c);
      c -= bmat * (bmat.adjoint() * c);
    }
    const double r = c.norm();
    if (r < tol) continue;
    c /= r;
    bmat.conservativeResize(d, bmat.cols() + 1);
    bmat.col(bmat.cols() - 1) = c;
    out.push_back(Element::from_coords(alg, c));
  }
  return out;
}

std::vector<Element> product_span(const std::vector<Element>& a,
                                  const std::vector<Element>& b, double tol) {
  std::vector<Element> prods;
  prods.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) prods.push_back(x * y);
  return orthonormal_span(prods, tol);
}

Element span_unit(const std::vector<Element>& basis, double tol) {
  if (basis.empty()) throw Error("span_unit: empty span has no ambient algebra");
  const FdAlgebra& alg = basis[0].algebra();
  const int d = alg.dim();
  const int m = static_cast<int>(basis.size());
  // e s_k = s_k and s_k e = s_k for every basis vector, in least squares over
  // the span coefficients of e.
  Matrix lhs(2 * d * m, m);
  Vector rhs(2 * d * m);
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < m; ++i) {
      lhs.col(i).segment(k * d, d) = (basis[i] * basis[k]).coords();
      lhs.col(i).segment((m + k) * d, d) = (basis[k] * basis[i]).coords();
    }
    rhs.segment(k * d, d) = basis[k].coords();
    rhs.segment((m + k) * d, d) = basis[k].coords();
  }
  Vector c = lhs.colPivHouseholderQr().solve(rhs);
  if ((lhs * c - rhs).norm() > tol * std::max(1.0, rhs.norm()))
    throw Error("span_unit: the span has no unit");
  Element e = Element::zero(alg);
  for (int i = 0; i < m; ++i) e = e + basis[i] * c(i);
  e = (e + e.adjoint()) * Complex(0.5, 0.0);
  if ((e * e - e).hs_norm() > tol * std::max(1.0, e.hs_norm()))
    throw Error("span_unit: candidate unit is not idempotent");
  return e;
}

}  // namespace covalg
