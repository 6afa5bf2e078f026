#pragma once

#include <map>
#include <memory>
#include <optional>

#include "covalg/fd_algebra.hpp"

namespace covalg {

/// A partial automorphism of a finite-dimensional C*-algebra: a triple
/// (theta, I, J) where I and J are closed two-sided ideals and theta: I -> J
/// is a *-isomorphism. Structurally: a bijection of the member blocks of I
/// onto the member blocks of J plus a unitary per source block, acting as
/// theta(x)_{sigma(b)} = u_b x_b u_b*.
class PartialAutomorphism {
 public:
  /// Validates: block_map is a bijection of source blocks onto target blocks,
  /// mapped blocks have equal sizes, and each unitary passes the unitarity
  /// check within tol. Unitaries may be omitted entirely (identity maps).
  PartialAutomorphism(FdAlgebra algebra, Ideal source, Ideal target,
                      std::map<int, int> block_map, std::map<int, Matrix> unitaries,
                      double tol = 1e-9);

  const FdAlgebra& algebra() const { return algebra_; }
  const Ideal& source() const { return source_; }  // I = Dom(theta)
  const Ideal& target() const { return target_; }  // J = Im(theta)
  const std::map<int, int>& block_map() const { return block_map_; }
  const Matrix& unitary(int source_block) const { return unitaries_.at(source_block); }

  int map_block(int b) const;    // sigma(b); -1 if b not in I
  int unmap_block(int b) const;  // sigma^{-1}(b); -1 if b not in J

 private:
  FdAlgebra algebra_;
  Ideal source_;
  Ideal target_;
  std::map<int, int> block_map_;
  std::map<int, int> inverse_map_;
  std::map<int, Matrix> unitaries_;
};

/// Systems are shared immutably; elements of the L-algebra hold a reference.
using System = std::shared_ptr<const PartialAutomorphism>;

System make_system(FdAlgebra algebra, Ideal source, Ideal target,
                   std::map<int, int> block_map, std::map<int, Matrix> unitaries = {},
                   double tol = 1e-9);

/// Apply theta^n (n may be negative; theta^0 = identity). Throws when the
/// support of x leaves the domain of the next step, i.e. when x is not in
/// Dom(theta^n) = D_{-n} within tol.
Element paut_apply(const PartialAutomorphism& pa, const Element& x, int n,
                   double tol = 1e-9);

/// The domain chain: D_0 = A, D_1 = J, D_{-1} = I, and inductively
/// D_{n+1} = {a in J : theta^{-1}(a) in D_n},
/// D_{n-1} = {a in I : theta(a) in D_n}.
/// D_n is the ideal on which theta^{-n} is defined.
Ideal domain_chain(const PartialAutomorphism& pa, int n);

/// Smallest N >= 0 with D_n = {0} for all |n| >= N, or nullopt when the
/// chains never die (the block map contains a cycle).
std::optional<int> chain_bound(const PartialAutomorphism& pa);

inline Element paut_apply(const System& sys, const Element& x, int n,
                          double tol = 1e-9) {
  return paut_apply(*sys, x, n, tol);
}
inline Ideal domain_chain(const System& sys, int n) { return domain_chain(*sys, n); }
inline std::optional<int> chain_bound(const System& sys) { return chain_bound(*sys); }

}  // namespace covalg
