#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "covalg/l_algebra.hpp"
#include "covalg/wedderburn.hpp"

namespace covalg {

/// Concrete faithful *-representation of the level algebra of a system with
/// bounded domain chains, on H = K_{-N} + ... + K_N where K_n is the carrier
/// space of the ideal D_{-n}. An element a delta_m acts from K_n to K_{n+m}
/// as the common-block restriction of theta^{-n}( theta^{-m}(a) e_{D_n} ).
class RegularRep {
 public:
  /// max_level = -1 uses the chain bound. Throws on unbounded chains and on
  /// max_level below the chain bound (levels would be silently truncated).
  explicit RegularRep(System sys, int max_level = -1);

  const System& system() const { return sys_; }
  int max_level() const { return max_level_; }
  int dim() const { return hdim_; }

  int level_dim(int n) const;
  int level_offset(int n) const;
  /// The ideal D_{-n} whose carrier is K_n.
  const Ideal& level_ideal(int n) const;
  /// Orthogonal projection of H onto K_n.
  Matrix level_projection(int n) const;

  Matrix represent(const LElement& a) const;

  /// Monomial basis of the level algebra: all matrix units of D_n at every
  /// populated level n.
  std::vector<LElement> spanning() const;

  /// Smallest singular value of the representation restricted to the span of
  /// the monomial basis; positive iff the representation is faithful.
  double min_singular_value() const;

 private:
  System sys_;
  int max_level_ = 0;
  int hdim_ = 0;
  std::vector<Ideal> ideals_;                    // D_{-n}, index n + max_level
  std::vector<int> offsets_;                     // K_n start, index n + max_level
  std::vector<std::map<int, int>> block_offsets_;  // block -> offset inside K_n

  bool in_range(int n) const { return n >= -max_level_ && n <= max_level_; }
};

struct RealizeOptions {
  int max_level = -1;          // -1: chain bound
  double tol = 1e-9;
  std::uint64_t seed = 20240801;
};

/// The covariance algebra of a bounded system made concrete: the image of the
/// level algebra under the regular representation, decomposed into matrix
/// blocks, together with the transported dual circle action.
struct Realization {
  System sys;
  RegularRep rep;
  Wedderburn wed;
  FdAlgebra target;                        // block presentation of the image
  std::vector<std::vector<int>> weights;   // dual-action weights per block
  std::vector<LElement> basis;             // monomial basis of the level algebra
  Matrix transfer;      // column i = coords of realize(basis[i])
  Matrix transfer_inv;

  Element realize(const LElement& a) const;
  LElement unrealize(const Element& x) const;

  /// Dual action on the realized algebra: entry (r,s) of block j scales by
  /// z^{w_r - w_s}.
  Element act(const Complex& z, const Element& x) const;
};

/// Builds the realization. Throws when the domain chain is unbounded (the
/// covariance algebra is then infinite-dimensional; only the level algebra
/// is available).
Realization realize_covariance(System sys, const RealizeOptions& opts = {});

}  // namespace covalg
