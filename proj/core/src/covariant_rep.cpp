#include "covalg/covariant_rep.hpp"

#include <algorithm>

#include "covalg/partial_automorphism.hpp"

namespace covalg {

namespace {

Matrix unvec(const Vector& v, int d) {
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

}  // namespace

AlgebraRep::AlgebraRep(FdAlgebra domain, int carrier, Matrix images, double tol)
    : domain_(std::move(domain)), carrier_(carrier), images_(std::move(images)) {
  if (images_.rows() != static_cast<Eigen::Index>(carrier_) * carrier_ ||
      images_.cols() != domain_.dim())
    throw Error("AlgebraRep: image matrix has the wrong shape");
  // Check multiplicativity and *-compatibility on the matrix-unit basis.
  double worst = 0.0;
  std::vector<std::tuple<int, int, int>> units;  // block, row, col per basis column
  for (int b = 0; b < domain_.num_blocks(); ++b) {
    int n = domain_.block_size(b);
    for (int s = 0; s < n; ++s)
      for (int r = 0; r < n; ++r) units.emplace_back(b, r, s);
  }
  std::vector<Matrix> img(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) img[i] = unvec(images_.col(i), carrier_);
  for (std::size_t i = 0; i < units.size(); ++i) {
    auto [bi, ri, si] = units[i];
    // Star: image of E_sr must be the adjoint of the image of E_rs.
    int j = domain_.coord_offset(bi) + ri * domain_.block_size(bi) + si;
    worst = std::max(worst, (img[j] - img[i].adjoint()).cwiseAbs().maxCoeff());
    for (std::size_t k = 0; k < units.size(); ++k) {
      auto [bk, rk, sk] = units[k];
      Matrix prod = img[i] * img[k];
      if (bi == bk && si == rk) {
        int t = domain_.coord_offset(bi) + sk * domain_.block_size(bi) + ri;
        prod -= img[t];
      }
      worst = std::max(worst, prod.size() ? prod.cwiseAbs().maxCoeff() : 0.0);
    }
  }
  residual_ = worst;
  if (worst > tol) throw Error("AlgebraRep: images do not define a *-homomorphism");
}

AlgebraRep AlgebraRep::identity(const FdAlgebra& alg) {
  int d = alg.carrier_dim();
  Matrix images(d * d, alg.dim());
  int col = 0;
  for (int b = 0; b < alg.num_blocks(); ++b) {
    int n = alg.block_size(b);
    for (int s = 0; s < n; ++s)
      for (int r = 0; r < n; ++r) {
        Matrix m = Matrix::Zero(d, d);
        m(alg.carrier_offset(b) + r, alg.carrier_offset(b) + s) = 1.0;
        images.col(col++) = vec(m);
      }
  }
  return AlgebraRep(alg, d, std::move(images));
}

Matrix AlgebraRep::apply(const Element& x) const {
  Vector v = images_ * x.coords();
  return unvec(v, carrier_);
}

AlgebraRep conjugate_rep(const AlgebraRep& rep, const Matrix& u) {
  int d = rep.carrier();
  if (u.rows() != d || u.cols() != d)
    throw Error("conjugate_rep: unitary size does not match the carrier");
  const FdAlgebra& alg = rep.domain();
  Matrix images(d * d, alg.dim());
  for (int i = 0; i < alg.dim(); ++i) {
    Vector e = Vector::Zero(alg.dim());
    e(i) = 1.0;
    Matrix m = rep.apply(Element::from_coords(alg, e));
    images.col(i) = vec(Matrix(u * m * u.adjoint()));
  }
  return AlgebraRep(alg, d, std::move(images));
}

AlgebraRep direct_sum(const AlgebraRep& a, const AlgebraRep& b) {
  if (!(a.domain() == b.domain()))
    throw Error("direct_sum: representations have different domains");
  const FdAlgebra& alg = a.domain();
  int d = a.carrier() + b.carrier();
  Matrix images(d * d, alg.dim());
  for (int i = 0; i < alg.dim(); ++i) {
    Vector e = Vector::Zero(alg.dim());
    e(i) = 1.0;
    Element x = Element::from_coords(alg, e);
    Matrix m = Matrix::Zero(d, d);
    m.topLeftCorner(a.carrier(), a.carrier()) = a.apply(x);
    m.bottomRightCorner(b.carrier(), b.carrier()) = b.apply(x);
    images.col(i) = vec(m);
  }
  return AlgebraRep(alg, d, std::move(images));
}

AlgebraRep zero_rep(const FdAlgebra& alg, int carrier) {
  return AlgebraRep(alg, carrier, Matrix::Zero(carrier * carrier, alg.dim()));
}

AlgebraRep random_rep(const FdAlgebra& alg, Rng& rng) {
  std::vector<int> mult(alg.num_blocks());
  int total = 0;
  do {
    total = 0;
    for (int b = 0; b < alg.num_blocks(); ++b) {
      mult[b] = static_cast<int>(rng.integer() % 3);
      total += mult[b] * alg.block_size(b);
    }
  } while (total == 0);
  int null_dim = static_cast<int>(rng.integer() % 3);
  int d = total + null_dim;
  Matrix images(d * d, alg.dim());
  int col = 0;
  // Carrier offsets: block b occupies mult[b] consecutive copies of itself.
  std::vector<int> start(alg.num_blocks());
  int pos = 0;
  for (int b = 0; b < alg.num_blocks(); ++b) {
    start[b] = pos;
    pos += mult[b] * alg.block_size(b);
  }
  for (int b = 0; b < alg.num_blocks(); ++b) {
    int n = alg.block_size(b);
    for (int s = 0; s < n; ++s)
      for (int r = 0; r < n; ++r) {
        Matrix m = Matrix::Zero(d, d);
        for (int c = 0; c < mult[b]; ++c)
          m(start[b] + c * n + r, start[b] + c * n + s) = 1.0;
        images.col(col++) = vec(m);
      }
  }
  AlgebraRep plain(alg, d, std::move(images));
  return conjugate_rep(plain, rng.unitary(d));
}

double CovrepReport::worst() const {
  return std::max({pi_residual, isometry, initial, final_space, covariance});
}

CovrepReport covrep_validate(const CovariantRep& r, double tol) {
  CovrepReport rep;
  const PartialAutomorphism& theta = *r.sys;
  const FdAlgebra& alg = theta.algebra();
  if (!(r.pi.domain() == alg))
    throw Error("covrep_validate: representation domain does not match the system");
  int d = r.pi.carrier();
  if (r.u.rows() != d || r.u.cols() != d)
    throw Error("covrep_validate: partial isometry size does not match the carrier");

  rep.pi_residual = r.pi.residual();
  Matrix uu = r.u * r.u.adjoint() * r.u - r.u;
  rep.isometry = uu.size() ? uu.cwiseAbs().maxCoeff() : 0.0;

  Matrix pi_ei = r.pi.apply(theta.source().unit());
  Matrix pi_ej = r.pi.apply(theta.target().unit());
  Matrix ini = r.u.adjoint() * r.u - pi_ei;
  Matrix fin = r.u * r.u.adjoint() - pi_ej;
  rep.initial = ini.size() ? ini.cwiseAbs().maxCoeff() : 0.0;
  rep.final_space = fin.size() ? fin.cwiseAbs().maxCoeff() : 0.0;

  double cov = 0.0;
  for (int b : theta.source().blocks()) {
    int n = alg.block_size(b);
    for (int rr = 0; rr < n; ++rr)
      for (int ss = 0; ss < n; ++ss) {
        Element x = Element::matrix_unit(alg, b, rr, ss);
        Matrix lhs = r.pi.apply(paut_apply(r.sys, x, 1));
        Matrix rhs = r.u * r.pi.apply(x) * r.u.adjoint();
        Matrix diff = lhs - rhs;
        cov = std::max(cov, diff.size() ? diff.cwiseAbs().maxCoeff() : 0.0);
      }
  }
  rep.covariance = cov;
  rep.ok = rep.worst() <= tol;
  return rep;
}

Matrix pisometry_pow(const Matrix& u, int n) {
  int d = static_cast<int>(u.rows());
  Matrix out = Matrix::Identity(d, d);
  Matrix step = n >= 0 ? u : Matrix(u.adjoint());
  for (int k = 0; k < std::abs(n); ++k) out = step * out;
  return out;
}

Matrix pi_cross_u(const CovariantRep& r, const LElement& y) {
  int d = r.pi.carrier();
  Matrix out = Matrix::Zero(d, d);
  for (int n : y.support()) out += r.pi.apply(y.coeff(n)) * pisometry_pow(r.u, n);
  return out;
}

CovariantRep extract_covrep(const Realization& real, const AlgebraRep& sigma) {
  if (!(sigma.domain() == real.target))
    throw Error("extract_covrep: sigma is not a representation of the realized algebra");
  const FdAlgebra& alg = real.sys->algebra();
  int d = sigma.carrier();
  Matrix images(d * d, alg.dim());
  for (int i = 0; i < alg.dim(); ++i) {
    Vector e = Vector::Zero(alg.dim());
    e(i) = 1.0;
    LElement mono = LElement::monomial(real.sys, Element::from_coords(alg, e), 0);
    images.col(i) = vec(sigma.apply(real.realize(mono)));
  }
  AlgebraRep pi(alg, d, std::move(images));
  Matrix u = sigma.apply(real.realize(u_element(real.sys)));
  return CovariantRep{real.sys, std::move(pi), std::move(u)};
}

}  // namespace covalg
