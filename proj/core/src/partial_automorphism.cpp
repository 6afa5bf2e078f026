#include "covalg/partial_automorphism.hpp"

#include <algorithm>
#include <set>

namespace covalg {

PartialAutomorphism::PartialAutomorphism(FdAlgebra algebra, Ideal source, Ideal target,
                                         std::map<int, int> block_map,
                                         std::map<int, Matrix> unitaries, double tol)
    : algebra_(std::move(algebra)),
      source_(std::move(source)),
      target_(std::move(target)),
      block_map_(std::move(block_map)),
      unitaries_(std::move(unitaries)) {
  if (source_.algebra() != algebra_ || target_.algebra() != algebra_)
    throw Error("PartialAutomorphism: ideals live in a different algebra");
  if (static_cast<int>(block_map_.size()) != source_.num_blocks())
    throw Error("PartialAutomorphism: block map must cover the source ideal exactly");

  std::set<int> hit;
  for (const auto& [from, to] : block_map_) {
    if (!source_.contains_block(from))
      throw Error("PartialAutomorphism: block " + std::to_string(from) +
                  " mapped but not in the source ideal");
    if (!target_.contains_block(to))
      throw Error("PartialAutomorphism: block " + std::to_string(from) +
                  " maps to block " + std::to_string(to) + " outside the target ideal");
    if (algebra_.block_size(from) != algebra_.block_size(to))
      throw Error("PartialAutomorphism: size mismatch between blocks " +
                  std::to_string(from) + " and " + std::to_string(to));
    if (!hit.insert(to).second)
      throw Error("PartialAutomorphism: block map is not injective at block " +
                  std::to_string(to));
    inverse_map_[to] = from;
  }
  if (static_cast<int>(hit.size()) != target_.num_blocks())
    throw Error("PartialAutomorphism: block map is not onto the target ideal");

  for (const auto& [from, _] : block_map_) {
    int n = algebra_.block_size(from);
    auto it = unitaries_.find(from);
    if (it == unitaries_.end()) {
      unitaries_[from] = Matrix::Identity(n, n);
      continue;
    }
    const Matrix& u = it->second;
    if (u.rows() != n || u.cols() != n)
      throw Error("PartialAutomorphism: unitary for block " + std::to_string(from) +
                  " has wrong shape");
    double res = (u.adjoint() * u - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (res > tol)
      throw Error("PartialAutomorphism: matrix for block " + std::to_string(from) +
                  " is not unitary (residual " + std::to_string(res) + ")");
  }
  for (const auto& [from, _] : unitaries_) {
    if (block_map_.find(from) == block_map_.end())
      throw Error("PartialAutomorphism: unitary given for unmapped block " +
                  std::to_string(from));
  }
}

int PartialAutomorphism::map_block(int b) const {
  auto it = block_map_.find(b);
  return it == block_map_.end() ? -1 : it->second;
}

int PartialAutomorphism::unmap_block(int b) const {
  auto it = inverse_map_.find(b);
  return it == inverse_map_.end() ? -1 : it->second;
}

System make_system(FdAlgebra algebra, Ideal source, Ideal target,
                   std::map<int, int> block_map, std::map<int, Matrix> unitaries,
                   double tol) {
  return std::make_shared<const PartialAutomorphism>(
      std::move(algebra), std::move(source), std::move(target), std::move(block_map),
      std::move(unitaries), tol);
}

Element paut_apply(const PartialAutomorphism& pa, const Element& x, int n, double tol) {
  if (x.algebra() != pa.algebra()) throw Error("paut_apply: mismatched ambient algebra");
  Element cur = x;
  double scale = std::max(1.0, x.norm());
  for (int step = 0; step < std::abs(n); ++step) {
    const Ideal& dom = (n > 0) ? pa.source() : pa.target();
    if (!dom.contains(cur, tol * scale))
      throw Error("paut_apply: element leaves the domain of theta^" + std::to_string(n) +
                  " (support outside D_" + std::to_string(-n) + ")");
    Element next(pa.algebra());
    if (n > 0) {
      for (const auto& [from, to] : pa.block_map()) {
        const Matrix& u = pa.unitary(from);
        next.block(to) = u * cur.block(from) * u.adjoint();
      }
    } else {
      for (const auto& [from, to] : pa.block_map()) {
        const Matrix& u = pa.unitary(from);
        next.block(from) = u.adjoint() * cur.block(to) * u;
      }
    }
    cur = std::move(next);
  }
  return cur;
}

Ideal domain_chain(const PartialAutomorphism& pa, int n) {
  std::vector<int> cur;
  for (int b = 0; b < pa.algebra().num_blocks(); ++b) cur.push_back(b);
  // D_{k+1} = sigma(D_k ∩ I); D_{k-1} = sigma^{-1}(D_k ∩ J).
  for (int step = 0; step < std::abs(n); ++step) {
    std::vector<int> next;
    for (int b : cur) {
      int img = (n > 0) ? pa.map_block(b) : pa.unmap_block(b);
      if (img >= 0) next.push_back(img);
    }
    cur = std::move(next);
  }
  return Ideal(pa.algebra(), std::move(cur));
}

std::optional<int> chain_bound(const PartialAutomorphism& pa) {
  int k = pa.algebra().num_blocks();
  auto first_empty = [&](int direction) -> std::optional<int> {
    std::vector<int> cur;
    for (int b = 0; b < k; ++b) cur.push_back(b);
    for (int n = 1; n <= k + 1; ++n) {
      std::vector<int> next;
      for (int b : cur) {
        int img = (direction > 0) ? pa.map_block(b) : pa.unmap_block(b);
        if (img >= 0) next.push_back(img);
      }
      cur = std::move(next);
      if (cur.empty()) return n;
    }
    // A block surviving num_blocks+1 images must sit on a cycle.
    return std::nullopt;
  };
  auto fwd = first_empty(+1);
  auto bwd = first_empty(-1);
  if (!fwd || !bwd) return std::nullopt;
  return std::max(*fwd, *bwd);
}

}  // namespace covalg
