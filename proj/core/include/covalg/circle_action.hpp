#pragma once

#include <vector>

#include "covalg/fd_algebra.hpp"

namespace covalg {

/// A circle action on an FdAlgebra, encoded as conjugation by the diagonal
/// unitary diag(z^{w_1}, z^{w_2}, ...): one integer weight per basis vector of
/// each block. Matrix entry (r,s) of block b then has pure grade w_r - w_s,
/// and the grade-n part of the algebra is spanned by entries of grade n.
/// Every continuous circle action on a finite-dimensional C*-algebra is of
/// this form.
class CircleAction {
 public:
  CircleAction() = default;
  CircleAction(FdAlgebra algebra, std::vector<std::vector<int>> weights);

  const FdAlgebra& algebra() const { return alg_; }
  const std::vector<std::vector<int>>& weights() const { return weights_; }
  int weight(int block, int r) const;
  int grade(int block, int r, int s) const { return weight(block, r) - weight(block, s); }

  /// Largest |grade| carried by any matrix entry.
  int max_spread() const;

  /// alpha_z; requires |z| = 1.
  Element act(const Complex& z, const Element& x) const;

  /// Exact evaluation of the averaging projection onto grade n.
  Element project_grade(const Element& x, int n) const;

 private:
  FdAlgebra alg_;
  std::vector<std::vector<int>> weights_;
};

/// The grade-n spectral subspace with an orthonormal matrix-unit basis.
struct GradedSubspace {
  int grade = 0;
  std::vector<Element> basis;
  int dim() const { return static_cast<int>(basis.size()); }
};

GradedSubspace spectral_subspace(const CircleAction& act, int n);

struct SaturationCertificate {
  bool semisaturated = false;
  int first_failure = 0;           // smallest n >= 2 with a span mismatch
  std::vector<int> power_dims;     // dim span((B_1)^n), n = 1..spread
  std::vector<int> graded_dims;    // dim B_n, n = 1..spread
};

/// Semi-saturation: the grade-1 space multiplicatively generates every
/// positive grade, checked as span dimension equalities.
SaturationCertificate is_semisaturated(const CircleAction& act);

/// Orthonormal basis (trace inner product) of the span of the given elements.
std::vector<Element> orthonormal_span(const std::vector<Element>& v, double tol = 1e-8);

/// Orthonormal basis of span{ a_i b_j }.
std::vector<Element> product_span(const std::vector<Element>& a,
                                  const std::vector<Element>& b, double tol = 1e-8);

/// The unit of a *-closed span (least squares over the span; zero element for
/// the zero span). Throws when the span has no unit within tolerance.
Element span_unit(const std::vector<Element>& basis, double tol = 1e-7);

}  // namespace covalg
