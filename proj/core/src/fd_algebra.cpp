#include "covalg/fd_algebra.hpp"

#include <algorithm>

namespace covalg {

FdAlgebra::FdAlgebra(std::vector<int> block_sizes) : sizes_(std::move(block_sizes)) {
  for (int n : sizes_) {
    if (n <= 0) throw Error("FdAlgebra: block sizes must be positive");
    offsets_.push_back(carrier_);
    coord_offsets_.push_back(dim_);
    carrier_ += n;
    dim_ += n * n;
  }
}

Element::Element(const FdAlgebra& alg) : alg_(alg) {
  blocks_.reserve(alg.num_blocks());
  for (int b = 0; b < alg.num_blocks(); ++b)
    blocks_.push_back(Matrix::Zero(alg.block_size(b), alg.block_size(b)));
}

Element::Element(const FdAlgebra& alg, std::vector<Matrix> blocks)
    : alg_(alg), blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != alg.num_blocks())
    throw Error("Element: wrong number of blocks");
  for (int b = 0; b < alg.num_blocks(); ++b) {
    if (blocks_[b].rows() != alg.block_size(b) || blocks_[b].cols() != alg.block_size(b))
      throw Error("Element: block " + std::to_string(b) + " has wrong shape");
  }
}

Element Element::identity(const FdAlgebra& alg) {
  Element x(alg);
  for (int b = 0; b < alg.num_blocks(); ++b)
    x.blocks_[b] = Matrix::Identity(alg.block_size(b), alg.block_size(b));
  return x;
}

Element Element::matrix_unit(const FdAlgebra& alg, int b, int r, int s) {
  Element x(alg);
  x.blocks_.at(b)(r, s) = Complex(1.0, 0.0);
  return x;
}

namespace {
void require_same(const FdAlgebra& a, const FdAlgebra& b) {
  if (a != b) throw Error("Element: mismatched ambient algebra");
}
}  // namespace

Element Element::operator+(const Element& o) const {
  require_same(alg_, o.alg_);
  Element x(alg_);
  for (size_t b = 0; b < blocks_.size(); ++b) x.blocks_[b] = blocks_[b] + o.blocks_[b];
  return x;
}

Element Element::operator-(const Element& o) const {
  require_same(alg_, o.alg_);
  Element x(alg_);
  for (size_t b = 0; b < blocks_.size(); ++b) x.blocks_[b] = blocks_[b] - o.blocks_[b];
  return x;
}

Element Element::operator*(const Element& o) const {
  require_same(alg_, o.alg_);
  Element x(alg_);
  for (size_t b = 0; b < blocks_.size(); ++b) x.blocks_[b] = blocks_[b] * o.blocks_[b];
  return x;
}

Element Element::operator*(Complex c) const {
  Element x(alg_);
  for (size_t b = 0; b < blocks_.size(); ++b) x.blocks_[b] = blocks_[b] * c;
  return x;
}

Element Element::adjoint() const {
  Element x(alg_);
  for (size_t b = 0; b < blocks_.size(); ++b) x.blocks_[b] = blocks_[b].adjoint();
  return x;
}

double Element::norm() const {
  double m = 0.0;
  for (const Matrix& blk : blocks_) {
    if (blk.rows() == 0) continue;
    Eigen::JacobiSVD<Matrix> svd(blk);
    if (svd.singularValues().size() > 0) m = std::max(m, svd.singularValues()(0));
  }
  return m;
}

double Element::hs_norm() const {
  double s = 0.0;
  for (const Matrix& blk : blocks_) s += blk.squaredNorm();
  return std::sqrt(s);
}

Complex Element::hs_inner(const Element& o) const {
  require_same(alg_, o.alg_);
  Complex s(0.0, 0.0);
  for (size_t b = 0; b < blocks_.size(); ++b)
    s += (o.blocks_[b].adjoint() * blocks_[b]).trace();
  return s;
}

Complex Element::trace() const {
  Complex s(0.0, 0.0);
  for (const Matrix& blk : blocks_) s += blk.trace();
  return s;
}

double Element::max_abs() const {
  double m = 0.0;
  for (const Matrix& blk : blocks_)
    for (Eigen::Index j = 0; j < blk.cols(); ++j)
      for (Eigen::Index i = 0; i < blk.rows(); ++i) m = std::max(m, std::abs(blk(i, j)));
  return m;
}

Matrix Element::full() const {
  Matrix m = Matrix::Zero(alg_.carrier_dim(), alg_.carrier_dim());
  for (int b = 0; b < alg_.num_blocks(); ++b) {
    int off = alg_.carrier_offset(b);
    int n = alg_.block_size(b);
    m.block(off, off, n, n) = blocks_[b];
  }
  return m;
}

Element Element::from_full(const FdAlgebra& alg, const Matrix& m, double tol) {
  if (m.rows() != alg.carrier_dim() || m.cols() != alg.carrier_dim())
    throw Error("Element: carrier matrix has the wrong size");
  Element out(alg);
  double on_mass = 0.0;
  for (int b = 0; b < alg.num_blocks(); ++b) {
    int off = alg.carrier_offset(b);
    int n = alg.block_size(b);
    out.blocks_[b] = m.block(off, off, n, n);
    on_mass += out.blocks_[b].squaredNorm();
  }
  double off_mass = std::sqrt(std::max(0.0, m.squaredNorm() - on_mass));
  if (off_mass > tol * std::max(1.0, m.norm()))
    throw Error("Element: matrix has mass outside the diagonal blocks");
  return out;
}

Vector Element::coords() const {
  Vector v(alg_.dim());
  int k = 0;
  for (const Matrix& blk : blocks_)
    for (Eigen::Index j = 0; j < blk.cols(); ++j)
      for (Eigen::Index i = 0; i < blk.rows(); ++i) v(k++) = blk(i, j);
  return v;
}

Element Element::from_coords(const FdAlgebra& alg, const Vector& v) {
  if (v.size() != alg.dim()) throw Error("Element::from_coords: wrong length");
  Element x(alg);
  int k = 0;
  for (int b = 0; b < alg.num_blocks(); ++b) {
    int n = alg.block_size(b);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) x.blocks_[b](i, j) = v(k++);
  }
  return x;
}

std::vector<int> Element::support(double tol) const {
  std::vector<int> out;
  for (int b = 0; b < alg_.num_blocks(); ++b) {
    if (blocks_[b].cwiseAbs().maxCoeff() > tol) out.push_back(b);
  }
  return out;
}

Ideal::Ideal(const FdAlgebra& alg, std::vector<int> blocks)
    : alg_(alg), blocks_(std::move(blocks)) {
  std::sort(blocks_.begin(), blocks_.end());
  blocks_.erase(std::unique(blocks_.begin(), blocks_.end()), blocks_.end());
  for (int b : blocks_) {
    if (b < 0 || b >= alg.num_blocks())
      throw Error("Ideal: block index " + std::to_string(b) + " out of range");
  }
}

Ideal Ideal::full(const FdAlgebra& alg) {
  std::vector<int> all(alg.num_blocks());
  for (int b = 0; b < alg.num_blocks(); ++b) all[b] = b;
  return Ideal(alg, std::move(all));
}

bool Ideal::contains_block(int b) const {
  return std::binary_search(blocks_.begin(), blocks_.end(), b);
}

int Ideal::dim() const {
  int d = 0;
  for (int b : blocks_) d += alg_.block_size(b) * alg_.block_size(b);
  return d;
}

Element Ideal::unit() const {
  Element x(alg_);
  for (int b : blocks_)
    x.block(b) = Matrix::Identity(alg_.block_size(b), alg_.block_size(b));
  return x;
}

bool Ideal::contains(const Element& x, double tol) const {
  if (x.algebra() != alg_) throw Error("Ideal::contains: mismatched ambient algebra");
  for (int b = 0; b < alg_.num_blocks(); ++b) {
    if (contains_block(b)) continue;
    if (x.block(b).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

Element Ideal::project(const Element& x) const {
  if (x.algebra() != alg_) throw Error("Ideal::project: mismatched ambient algebra");
  Element y(alg_);
  for (int b : blocks_) y.block(b) = x.block(b);
  return y;
}

FdAlgebra Ideal::as_algebra() const {
  std::vector<int> sizes;
  for (int b : blocks_) sizes.push_back(alg_.block_size(b));
  return FdAlgebra(sizes);
}

Ideal ideal_product(const Ideal& a, const Ideal& b) {
  if (a.algebra() != b.algebra()) throw Error("ideal_product: mismatched ambient algebra");
  std::vector<int> common;
  for (int blk : a.blocks())
    if (b.contains_block(blk)) common.push_back(blk);
  return Ideal(a.algebra(), std::move(common));
}

}  // namespace covalg
