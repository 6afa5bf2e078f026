#pragma once

#include <map>
#include <memory>
#include <utility>

#include "covalg/circle_action.hpp"
#include "covalg/covariant_rep.hpp"
#include "covalg/regular_rep.hpp"

namespace covalg {

/// Coefficient ideal of the (i, j) correction: theta^i(D_{-i} * D_{-j}).
/// Zero once min(i, j) reaches the chain bound. Requires i, j >= 1.
Ideal correction_ideal(const System& sys, int i, int j);

/// An element of the Toeplitz extension of the covariance algebra: the level
/// algebra represented on H tensor l2(N) with the unilateral shift S in place
/// of the bilateral one. Stored in normal form as
///   sum_n a_n u^n tensor S^n  +  sum_{i,j >= 1} c_{ij} u^{i-j} tensor e_{ij},
/// i.e. a symbol (an LElement; coefficient a_n in D_n per level) plus finitely
/// many corrections, c_{ij} in correction_ideal(i, j). The product rules close
/// this form: S* S = 1 exactly, while
///   S^a S^{*b} = S^{a-b} - sum_{k=1..b} e_{k+a-b, k}   (a >= b, adjoint else)
/// spills matrix-unit corrections.
class ToeplitzElement {
 public:
  explicit ToeplitzElement(System sys);

  static ToeplitzElement from_symbol(const LElement& s);

  const System& system() const { return sys_; }
  const LElement& symbol() const { return symbol_; }
  const std::map<std::pair<int, int>, Element>& corrections() const { return corr_; }

  /// Correction coefficient at (i, j); zero element when absent.
  Element correction(int i, int j) const;
  /// Validates membership in correction_ideal(i, j) within tol.
  void set_correction(int i, int j, const Element& c, double tol = 1e-9);
  void set_symbol_coeff(int n, const Element& a, double tol = 1e-9);

  bool is_zero(double tol = 0.0) const;
  double hs_norm() const;
  ToeplitzElement& prune(double tol = 1e-14);

  ToeplitzElement operator+(const ToeplitzElement& o) const;
  ToeplitzElement operator-(const ToeplitzElement& o) const;
  ToeplitzElement operator-() const;
  ToeplitzElement operator*(const Complex& c) const;

 private:
  System sys_;
  LElement symbol_;
  std::map<std::pair<int, int>, Element> corr_;

  void require_same(const ToeplitzElement& o) const;

  friend ToeplitzElement t_mul(const ToeplitzElement&, const ToeplitzElement&);
  friend ToeplitzElement t_adjoint(const ToeplitzElement&);
};

inline ToeplitzElement operator*(const Complex& c, const ToeplitzElement& a) {
  return a * c;
}

/// Product in normal form. Throws on unbounded domain chains (the corrections
/// would not stay finitely supported).
ToeplitzElement t_mul(const ToeplitzElement& a, const ToeplitzElement& b);

/// Adjoint: the symbol conjugates levelwise, correction (i, j) moves to
/// (j, i) with coefficient theta^{j-i}(c*).
ToeplitzElement t_adjoint(const ToeplitzElement& a);

/// True iff the symbol vanishes, i.e. the element lies in the ideal of
/// finite-rank corrections.
bool lambda_membership(const ToeplitzElement& a, double tol = 1e-12);

/// Grade-n part for the gauge action: symbol level n plus corrections with
/// i - j = n.
ToeplitzElement gamma_component(const ToeplitzElement& a, int n);

/// The quotient map onto the covariance algebra: drop the corrections. Exactly
/// multiplicative and *-preserving; its kernel is the correction ideal.
LElement quotient_phi(const ToeplitzElement& a);

/// Coordinate model of the Toeplitz extension of a bounded system: the
/// canonical basis, the coordinate layout (symbol levels first, then
/// corrections in lexicographic order), and the concrete action on
/// H tensor C^M by truncated operator matrices. Holds the regular
/// representation of the level algebra for the matrix entries.
class ToeplitzModel {
 public:
  explicit ToeplitzModel(System sys);

  const System& system() const { return sys_; }
  const RegularRep& rep() const { return rep_; }
  int bound() const { return bound_; }

  int dim() const { return dim_; }
  int symbol_dim() const { return symbol_dim_; }
  int lambda_dim() const { return dim_ - symbol_dim_; }

  /// Coefficient ideal of correction (i, j) (cached).
  const Ideal& coefficient_ideal(int i, int j) const;

  Vector coords(const ToeplitzElement& x) const;
  ToeplitzElement from_coords(const Vector& v) const;
  /// Grade carried by coordinate k (symbol level or i - j).
  int coord_grade(int k) const;

  /// Canonical basis: matrix units of every symbol level, then of every
  /// correction ideal.
  const std::vector<ToeplitzElement>& basis() const { return basis_; }

  /// Truncated operator matrix on H tensor C^M (cells 1..M): cell (k, l)
  /// carries the represented symbol coefficient at level k - l plus the
  /// represented (k, l) correction.
  Matrix truncated(const ToeplitzElement& x, int M) const;

  /// Faithful positive trace: Tr of truncated(x, 2 * bound + 2), evaluated
  /// directly from the diagonal cells.
  Complex tau(const ToeplitzElement& x) const;

  /// Compares t_mul against operator multiplication of truncated matrices:
  /// factors are truncated on a padded window M + bound + 1, multiplied, and
  /// compressed back to M, which reproduces the infinite product exactly.
  /// Returns the relative max-abs deviation from truncated(t_mul(x, y), M).
  double oracle_residual(const ToeplitzElement& x, const ToeplitzElement& y,
                         int M) const;

 private:
  struct Segment {
    int level = 0;       // symbol level, or i for corrections
    int partner = 0;     // unused for symbol, j for corrections
    bool is_correction = false;
    Ideal ideal;
    int offset = 0;
  };

  System sys_;
  RegularRep rep_;
  int bound_ = 0;
  int dim_ = 0;
  int symbol_dim_ = 0;
  std::vector<Segment> segments_;
  std::map<std::pair<int, int>, int> corr_segment_;  // (i,j) -> segment index
  std::vector<ToeplitzElement> basis_;
};

/// Conjugation x -> (u tensor S) x (u tensor S)*: the partial automorphism of
/// the Toeplitz model whose covariance algebra is the model itself. The
/// domain is the span of (grade 1)* (grade 1); membership is checked within
/// tol and violations throw.
ToeplitzElement toeplitz_theta(const ToeplitzModel& m, const ToeplitzElement& x,
                               double tol = 1e-9);

/// The Toeplitz extension as a concrete block algebra: coordinates are fed to
/// the decomposition engine with the trace tau as the Gram functional, and the
/// gauge grading is transported onto the blocks.
struct ToeplitzRealization {
  std::shared_ptr<const ToeplitzModel> model;
  CoordDecomposition dec;
  CircleAction action;  // realized algebra with the gauge weights
  Ideal lambda;         // blocks carrying the correction ideal

  Element realize(const ToeplitzElement& x) const;
  ToeplitzElement unrealize(const Element& y) const;
};

ToeplitzRealization realize_toeplitz(std::shared_ptr<const ToeplitzModel> model,
                                     const WedderburnOptions& opts = {});

/// Integrated form of a Toeplitz-covariant pair (pi, v) on C^d, where
///   v pi(x) = pi(theta(x)) v  and  v* v pi(x) = pi(x)   for x in I.
/// Sends a_n u^n tensor S^n to pi(a_n) v^n and the correction c tensor e_{ij}
/// to pi(c) v^{i-j} diag_j(e_{D_j}) with
///   diag_n(d) = v^{n-1} pi(theta^{-(n-1)}(d)) v^{(n-1)*}
///             - v^n pi(theta^{-n}(d)) v^{n*}.
/// No final-space condition is imposed, so the corrections need not die: this
/// is how representations of the extension that do not factor through the
/// covariance algebra arise. Validates the two conditions within tol.
Matrix toeplitz_rep(const AlgebraRep& pi, const Matrix& v,
                    const ToeplitzElement& x, double tol = 1e-7);

}  // namespace covalg
