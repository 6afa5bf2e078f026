#pragma once

#include "covalg/regular_rep.hpp"
#include "covalg/rng.hpp"

namespace covalg {

/// A *-homomorphism from a block algebra into d x d matrices, stored as the
/// images of the coordinate basis and validated on construction.
class AlgebraRep {
 public:
  AlgebraRep() = default;
  /// images: d^2 x dim(domain); column i is the vectorized image of the i-th
  /// coordinate basis vector of the domain.
  AlgebraRep(FdAlgebra domain, int carrier, Matrix images, double tol = 1e-9);

  /// The defining block-diagonal representation on C^d.
  static AlgebraRep identity(const FdAlgebra& alg);

  const FdAlgebra& domain() const { return domain_; }
  int carrier() const { return carrier_; }
  double residual() const { return residual_; }

  Matrix apply(const Element& x) const;

 private:
  FdAlgebra domain_;
  int carrier_ = 0;
  Matrix images_;
  double residual_ = 0.0;
};

/// u-conjugated copy: x -> u rep(x) u*.
AlgebraRep conjugate_rep(const AlgebraRep& rep, const Matrix& u);
/// Block-diagonal sum of two representations of the same algebra.
AlgebraRep direct_sum(const AlgebraRep& a, const AlgebraRep& b);
/// The zero map into d x d matrices (a degenerate representation).
AlgebraRep zero_rep(const FdAlgebra& alg, int carrier);

/// Random representation: per-block multiplicities in {0,1,2} (not all zero),
/// an optional null summand, and a Haar-random change of basis.
AlgebraRep random_rep(const FdAlgebra& alg, Rng& rng);

/// A covariant pair (pi, u) for a system: pi represents the coefficient
/// algebra, u is a partial isometry with initial space pi(e_I)H, final space
/// pi(e_J)H, and u pi(x) u* = pi(theta(x)) on the source ideal.
struct CovariantRep {
  System sys;
  AlgebraRep pi;
  Matrix u;
};

struct CovrepReport {
  bool ok = false;
  double pi_residual = 0.0;
  double isometry = 0.0;
  double initial = 0.0;
  double final_space = 0.0;
  double covariance = 0.0;
  double worst() const;
};

CovrepReport covrep_validate(const CovariantRep& r, double tol = 1e-9);

/// u^n for n >= 0, (u*)^{|n|} for n < 0; identity at n = 0.
Matrix pisometry_pow(const Matrix& u, int n);

/// The integrated form (pi x u)(y) = sum_n pi(y(n)) u^n; a representation of
/// the level algebra whenever (pi, u) is covariant.
Matrix pi_cross_u(const CovariantRep& r, const LElement& y);

/// Recover the covariant pair from a representation sigma of the realized
/// covariance algebra: pi = sigma on the zero level, u = sigma of the
/// distinguished isometry. Then sigma = pi x u on every level element.
CovariantRep extract_covrep(const Realization& real, const AlgebraRep& sigma);

}  // namespace covalg
