#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <string>
#include <vector>

#include "covalg/regular_rep.hpp"
#include "covalg/toeplitz.hpp"

namespace covalg {

using BigInt = boost::multiprecision::cpp_int;

/// Dense matrix over the integers with exact arbitrary-precision entries.
/// Zero-row / zero-column shapes are legal (maps from or to the zero group).
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  static IntMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  BigInt& operator()(int i, int j) { return a_[i * cols_ + j]; }
  const BigInt& operator()(int i, int j) const { return a_[i * cols_ + j]; }

  IntMatrix operator*(const IntMatrix& o) const;
  IntMatrix operator+(const IntMatrix& o) const;
  IntMatrix operator-(const IntMatrix& o) const;
  bool operator==(const IntMatrix& o) const;
  bool is_zero() const;

  std::string str() const;  // [[row], [row], ...]

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<BigInt> a_;
};

/// K_0 of a finite-dimensional C*-algebra: the free group on its blocks,
/// via dimension vectors of projections.
struct K0Group {
  int rank = 0;
  std::vector<int> blocks;  // generator labels
};

K0Group k0(const FdAlgebra& alg);

/// K_1 of any finite-dimensional C*-algebra vanishes (the unitary group of a
/// matrix block is connected); recorded here so reports can carry the full
/// six-term data with four zero corners.
int k1_rank(const FdAlgebra& alg);

/// A map of K_0 groups as a multiplicity matrix: entry (j, i) is the rank,
/// inside target block j, of the image of a minimal projection of source
/// block i. Differences of homomorphism-induced maps lose positivity but keep
/// the shape.
struct InducedMap {
  IntMatrix m;  // target blocks x source blocks
};

/// Multiplicity matrix of a *-homomorphism given as a linear map. Validates
/// the homomorphism property on basis pairs and the integrality of the
/// projection ranks within tol.
InducedMap induced_map(const FdAlgebra& from, const FdAlgebra& to,
                       const std::function<Element(const Element&)>& h,
                       double tol = 1e-6);

/// Smith normal form u m v = d, with u, v unimodular and the diagonal of d
/// nonnegative with ascending divisibility. The accumulated inverses ride
/// along so lattice computations never invert anything.
struct Snf {
  IntMatrix u, d, v;
  IntMatrix u_inv, v_inv;
};

Snf snf(const IntMatrix& m);

/// Square with |det| = 1 (equivalently: every invariant factor is 1).
bool is_unimodular(const IntMatrix& m);

/// Exactness certificate at the middle group of f: Z^p -> Z^b, g: Z^b -> Z^q.
/// The quotient ker g / im f is presented by its elementary divisors: one
/// entry per kernel generator, 1 = hit exactly, 0 = missed free generator,
/// k > 1 = torsion. Exact iff all divisors are 1 (and g f = 0).
struct ExactnessCertificate {
  bool exact = false;
  bool composite_zero = false;
  std::vector<BigInt> divisors;
  int kernel_rank = 0;
  int image_rank = 0;
};

ExactnessCertificate exact_at(const IntMatrix& f, const IntMatrix& g);

/// The K-group sequence of a bounded system:
///   0 -> K_0(J) --(i_* - theta^{-1}_*)--> K_0(A) --(i_*)--> K_0(B) -> 0,
/// B the realized covariance algebra. The K_1 corners of the six-term
/// sequence vanish in finite dimensions, which is what collapses it to one
/// line. Exactness is checked at all three interior positions.
struct PvReport {
  bool ok = false;
  std::vector<int> a_blocks, b_blocks, j_blocks;
  IntMatrix delta;      // i_* - theta^{-1}_* : K_0(J) -> K_0(A)
  IntMatrix inclusion;  // i_* : K_0(A) -> K_0(B)
  ExactnessCertificate at_source, at_middle, at_target;
};

PvReport pv_verify(const System& sys, const RealizeOptions& opts = {});

/// Commutativity of the square linking the sequence above to the Toeplitz
/// extension: the corner embedding j(x) = x tensor e_11 of J into the
/// correction ideal and the symbol section d(a) = a tensor 1 satisfy
///   (Lambda inclusion)_* j_* = d_* (i_* - theta^{-1}_*).
/// Also certifies that j_* and d_* are unimodular: J tensor e_11 is a full
/// corner of the correction ideal, and the symbol section is a K-theory
/// equivalence between A and the extension.
struct CornerDiagramReport {
  bool ok = false;
  bool commutes = false;
  bool j_unimodular = false;
  bool d_unimodular = false;
  IntMatrix j_star;            // K_0(J) -> K_0(Lambda)
  IntMatrix d_star;            // K_0(A) -> K_0(E)
  IntMatrix lambda_inclusion;  // K_0(Lambda) -> K_0(E)
  IntMatrix delta;             // i_* - theta^{-1}_* : K_0(J) -> K_0(A)
};

CornerDiagramReport diagram_72_check(const System& sys,
                                     const WedderburnOptions& opts = {});

}  // namespace covalg
