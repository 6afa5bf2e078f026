#pragma once

#include <random>

#include "covalg/fd_algebra.hpp"

namespace covalg {

/// Seeded random source for every randomized procedure in the workbench.
/// All draws are deterministic functions of the seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double gauss() { return normal_(gen_); }

  Complex cgauss() {
    double re = normal_(gen_);
    double im = normal_(gen_);
    return Complex(re, im);
  }

  Matrix gaussian(int rows, int cols) {
    Matrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = cgauss();
    return m;
  }

  /// Haar-distributed unitary: QR of a Gaussian matrix with the phase of the
  /// R diagonal absorbed.
  Matrix unitary(int n) {
    if (n == 0) return Matrix(0, 0);
    Matrix g = gaussian(n, n);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
      Complex d = r(j, j);
      double a = std::abs(d);
      q.col(j) *= (a > 0) ? d / a : Complex(1.0, 0.0);
    }
    return q;
  }

  Element element(const FdAlgebra& alg) {
    Element x(alg);
    for (int b = 0; b < alg.num_blocks(); ++b)
      x.block(b) = gaussian(alg.block_size(b), alg.block_size(b));
    return x;
  }

  Element element_in(const Ideal& ideal) {
    Element x(ideal.algebra());
    for (int b : ideal.blocks()) {
      int n = ideal.algebra().block_size(b);
      x.block(b) = gaussian(n, n);
    }
    return x;
  }

  std::uint64_t integer() { return gen_(); }

  std::mt19937_64& generator() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace covalg
