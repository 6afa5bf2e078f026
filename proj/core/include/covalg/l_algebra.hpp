#pragma once

#include <map>
#include <vector>

#include "covalg/partial_automorphism.hpp"
#include "covalg/rng.hpp"

namespace covalg {

/// Finitely supported section n -> a(n) with a(n) in the domain ideal D_n,
/// under the twisted convolution product
///   (a b)(n) = sum_k theta^k( theta^{-k}(a(k)) b(n-k) )
/// and the involution (a*)(n) = theta^n( a(-n)* ). These are the finite
/// "Fourier polynomials" of the covariance algebra; every identity that holds
/// here verbatim survives the C*-completion.
class LElement {
 public:
  explicit LElement(System sys);

  /// a delta_n; requires a in D_n.
  static LElement monomial(System sys, const Element& a, int n, double tol = 1e-9);

  const System& system() const { return sys_; }
  const std::map<int, Element>& terms() const { return terms_; }

  /// Coefficient at level n (zero element when absent).
  Element coeff(int n) const;
  void set_coeff(int n, const Element& a, double tol = 1e-9);
  std::vector<int> support() const;

  bool is_zero(double tol = 0.0) const;
  double hs_norm() const;   // sqrt of the sum of squared Frobenius norms
  double sup_norm() const;  // max over levels of the block operator norm
  double l1_norm() const;   // sum over levels of the block operator norm

  /// Drop coefficients below an absolute threshold.
  LElement& prune(double tol = 1e-14);

  LElement operator+(const LElement& o) const;
  LElement operator-(const LElement& o) const;
  LElement operator-() const;
  LElement operator*(const Complex& c) const;

 private:
  System sys_;
  std::map<int, Element> terms_;

  void require_same(const LElement& o) const;
};

inline LElement operator*(const Complex& c, const LElement& a) { return a * c; }

/// Twisted convolution product.
LElement l_mul(const LElement& a, const LElement& b);

/// Involution (a*)(n) = theta^n(a(-n)*).
LElement l_star(const LElement& a);

/// Conditional expectation onto level zero: a(0) delta_0.
LElement cond_expect(const LElement& a);

/// Dual circle action: scales level n by z^n. Requires |z| = 1.
LElement dual_act(const Complex& z, const LElement& a, double tol = 1e-9);

/// Level-n coefficient (the n-th spectral component for the dual action).
Element spectral_component(const LElement& a, int n);

/// Unity at level zero.
LElement l_unit(System sys);

/// The distinguished partial isometry u = theta(e_I) delta_1 satisfying
/// u*u = e_I delta_0, uu* = e_J delta_0 and u x u* = theta(x) delta_0 on I.
LElement u_element(System sys);

/// Random element supported on levels |n| <= max_level (only where D_n is
/// nonzero), with independent Gaussian coefficients.
LElement random_l(System sys, Rng& rng, int max_level);

/// Worst relative defect of associativity, the involution axioms and
/// distributivity on one triple.
double l_axiom_residual(const LElement& a, const LElement& b, const LElement& c);

}  // namespace covalg
