#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace covalg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// All workbench failures surface as this exception; the message names the
/// violated precondition or invariant.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Default tolerances. Identity: relative residual for algebraic identities.
/// Gap: spectral-gap threshold for clustering eigenvalues of random central
/// elements. Isometry: partial-isometry residuals. Cutoff: pseudo-inverse
/// singular value cutoff in polar decompositions.
struct Tolerances {
  double identity = 1e-9;
  double gap = 1e-6;
  double isometry = 1e-8;
  double cutoff = 1e-10;
};

/// A finite-dimensional C*-algebra presented as a direct sum of full complex
/// matrix blocks M_{n_1} + ... + M_{n_k}. Value type; compared structurally.
class FdAlgebra {
 public:
  FdAlgebra() = default;
  explicit FdAlgebra(std::vector<int> block_sizes);

  int num_blocks() const { return static_cast<int>(sizes_.size()); }
  int block_size(int b) const { return sizes_.at(b); }
  const std::vector<int>& block_sizes() const { return sizes_; }

  /// Linear dimension, sum of n_i^2.
  int dim() const { return dim_; }
  /// Dimension of the defining carrier C^d, d = sum of n_i.
  int carrier_dim() const { return carrier_; }
  /// Offset of block b inside the carrier.
  int carrier_offset(int b) const { return offsets_.at(b); }
  /// Offset of block b inside the flattened coordinate vector.
  int coord_offset(int b) const { return coord_offsets_.at(b); }

  bool operator==(const FdAlgebra& other) const { return sizes_ == other.sizes_; }
  bool operator!=(const FdAlgebra& other) const { return !(*this == other); }

 private:
  std::vector<int> sizes_;
  std::vector<int> offsets_;
  std::vector<int> coord_offsets_;
  int dim_ = 0;
  int carrier_ = 0;
};

/// An element of an FdAlgebra: one dense complex matrix per block.
class Element {
 public:
  Element() = default;
  explicit Element(const FdAlgebra& alg);
  Element(const FdAlgebra& alg, std::vector<Matrix> blocks);

  static Element zero(const FdAlgebra& alg) { return Element(alg); }
  static Element identity(const FdAlgebra& alg);
  /// Matrix unit E_{rs} of block b (0-based everywhere).
  static Element matrix_unit(const FdAlgebra& alg, int b, int r, int s);

  const FdAlgebra& algebra() const { return alg_; }
  const Matrix& block(int b) const { return blocks_.at(b); }
  Matrix& block(int b) { return blocks_.at(b); }

  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator*(const Element& o) const;  // algebra product, blockwise
  Element operator*(Complex c) const;
  Element operator-() const { return *this * Complex(-1.0, 0.0); }
  Element adjoint() const;

  /// C*-norm: the largest operator norm over the blocks.
  double norm() const;
  /// Frobenius norm of the flattened element.
  double hs_norm() const;
  /// Trace inner product <this, o> = tr(o* this).
  Complex hs_inner(const Element& o) const;
  Complex trace() const;
  double max_abs() const;
  bool is_zero(double tol = 1e-12) const { return max_abs() <= tol; }

  /// Block-diagonal matrix on the carrier C^d.
  Matrix full() const;
  /// Inverse of full(): entries outside the diagonal blocks must vanish
  /// within tol.
  static Element from_full(const FdAlgebra& alg, const Matrix& m, double tol = 1e-9);
  /// Flattened coordinates (block by block, column-major entries).
  Vector coords() const;
  static Element from_coords(const FdAlgebra& alg, const Vector& v);

  /// Blocks whose content exceeds tol in max-abs.
  std::vector<int> support(double tol = 1e-12) const;

 private:
  FdAlgebra alg_;
  std::vector<Matrix> blocks_;
};

inline Element operator*(Complex c, const Element& x) { return x * c; }

/// A closed two-sided ideal of an FdAlgebra: a subset of its blocks.
class Ideal {
 public:
  Ideal() = default;
  Ideal(const FdAlgebra& alg, std::vector<int> blocks);

  static Ideal zero(const FdAlgebra& alg) { return Ideal(alg, {}); }
  static Ideal full(const FdAlgebra& alg);

  const FdAlgebra& algebra() const { return alg_; }
  const std::vector<int>& blocks() const { return blocks_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  bool contains_block(int b) const;
  bool empty() const { return blocks_.empty(); }

  /// Linear dimension, sum of n_b^2 over member blocks.
  int dim() const;

  /// The identity of the ideal: unit matrices on member blocks, zero
  /// elsewhere. Acts as the exact stand-in for an approximate identity.
  Element unit() const;

  /// Membership: the element vanishes outside the member blocks.
  bool contains(const Element& x, double tol = 1e-9) const;

  /// Zero out the non-member blocks.
  Element project(const Element& x) const;

  /// The ideal viewed as an FdAlgebra in its own right (member blocks only,
  /// in ascending block order).
  FdAlgebra as_algebra() const;

  bool operator==(const Ideal& o) const {
    return alg_ == o.alg_ && blocks_ == o.blocks_;
  }
  bool operator!=(const Ideal& o) const { return !(*this == o); }

 private:
  FdAlgebra alg_;
  std::vector<int> blocks_;
};

/// Product of ideals; for block ideals this is the intersection of the block
/// sets. Throws if the ambient algebras differ.
Ideal ideal_product(const Ideal& a, const Ideal& b);

}  // namespace covalg
