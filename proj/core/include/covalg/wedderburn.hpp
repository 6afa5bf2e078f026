#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "covalg/fd_algebra.hpp"

namespace covalg {

struct WedderburnOptions {
  double tol = 1e-9;   // identity / residual tolerance
  double gap = 1e-6;   // spectral-gap threshold for eigenvalue clustering
  int max_retries = 12;
  std::uint64_t seed = 1;
};

/// A finite-dimensional *-algebra presented in coordinates over a fixed basis
/// w_0..w_{D-1}: structure constants, the star map, and a positive-definite
/// Gram matrix G_{ji} = <w_i, w_j> coming from a faithful positive functional.
/// The decomposition engine works entirely in this presentation, so callers
/// with exact product rules (the L-algebra, the Toeplitz model) never pay for
/// ambient matrix arithmetic.
struct CoordStarAlgebra {
  int dim = 0;
  std::vector<Matrix> left_mul;  // left_mul[i] * y = coords of w_i * (y in coords)
  Matrix star;                   // coords(x*) = star * conj(coords(x))
  Matrix gram;                   // identity when the basis is orthonormal
  Vector fingerprint;            // element whose block traces order the blocks

  Vector mul(const Vector& x, const Vector& y) const;
  Vector conj_star(const Vector& x) const { return star * x.conjugate(); }
};

/// Block presentation of a semisimple *-algebra plus the change of basis:
/// abstract = to_abstract * coords, coords = to_coords * abstract.
/// Abstract coordinates use the Element::coords layout of `algebra`.
struct CoordDecomposition {
  FdAlgebra algebra;
  Matrix to_abstract;
  Matrix to_coords;
  Vector unit;      // coords of the algebra unit
  double residual = 0.0;

  Element abstract_of(const Vector& coords) const {
    return Element::from_coords(algebra, to_abstract * coords);
  }
  Vector coords_of(const Element& x) const { return to_coords * x.coords(); }
};

/// Artin-Wedderburn decomposition of a coordinate-presented *-algebra.
/// Minimal central projections are read off a random self-adjoint central
/// element; a fresh element is drawn when the central spectrum gap falls
/// below opts.gap, failing after opts.max_retries.
CoordDecomposition decompose(const CoordStarAlgebra& a, const WedderburnOptions& opts);

/// Result of wedderburn(): the generated algebra W inside M_d, its block
/// presentation, and the *-isomorphism both ways.
struct Wedderburn {
  FdAlgebra algebra;
  int ambient = 0;                // d
  std::vector<Matrix> basis;      // orthonormal basis of W under the trace inner product
  Matrix basis_mat;               // d^2 x dim, column i = vec(basis[i])
  CoordDecomposition dec;

  int dim() const { return static_cast<int>(basis.size()); }

  /// Coordinates of w in the basis; *residual receives the distance to the
  /// span when requested.
  Vector coords_of(const Matrix& w, double* residual = nullptr) const;
  Matrix matrix_of(const Vector& coords) const;

  Element to_abstract(const Matrix& w, double span_tol = 1e-7) const;
  Matrix to_concrete(const Element& x) const;
};

/// Numerical Artin-Wedderburn decomposition of the *-algebra generated by the
/// given d x d matrices: span-closure under products, center, minimal central
/// projections, matrix units. Blocks are reported in ascending size, ties
/// broken by the block trace of the first generator. Throws when the
/// generated algebra is not closed under adjoints.
Wedderburn wedderburn(const std::vector<Matrix>& generators,
                      const WedderburnOptions& opts = {});

/// Transport an integer grading onto a decomposition. `split` maps a
/// coordinate vector to its graded parts (grade, coords); the grading must be
/// multiplicative on the underlying algebra. Finds per-block integer weights
/// w (normalized to min 0, ascending) and rotates the abstract basis so that
/// the grade of matrix entry (r,s) is exactly w_r - w_s. Mutates
/// dec.to_abstract / dec.to_coords.
std::vector<std::vector<int>> attach_weights(
    CoordDecomposition& dec,
    const std::function<std::vector<std::pair<int, Vector>>(const Vector&)>& split,
    double tol = 1e-6);

}  // namespace covalg
