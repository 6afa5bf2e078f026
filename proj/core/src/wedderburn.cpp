#include "covalg/wedderburn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include <Eigen/Dense>

#include "covalg/rng.hpp"

namespace covalg {

namespace {

Vector vec_of(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix cmat(const CoordStarAlgebra& a, const Vector& x) {
  Matrix c = Matrix::Zero(a.dim, a.dim);
  for (int i = 0; i < a.dim; ++i)
    if (std::abs(x(i)) > 1e-300) c.noalias() += x(i) * a.left_mul[i];
  return c;
}

struct Cluster {
  double mean = 0.0;
  int count = 0;
};

// Split ascending eigenvalues into groups separated by more than `gap`.
std::vector<Cluster> split_clusters(const Eigen::VectorXd& vals, double gap) {
  std::vector<Cluster> out;
  const int n = static_cast<int>(vals.size());
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || vals(i) - vals(i - 1) > gap) {
      Cluster c;
      c.count = i - start;
      c.mean = vals.segment(start, i - start).mean();
      out.push_back(c);
      start = i;
    }
  }
  return out;
}

double min_gap(const std::vector<Cluster>& cs) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < cs.size(); ++i)
    g = std::min(g, cs[i].mean - cs[i - 1].mean);
  return g;
}

struct Engine {
  const CoordStarAlgebra& a;
  WedderburnOptions opts;
  Rng rng;
  Matrix sqrt_g, isqrt_g;
  bool plain = true;
  double residual = 0.0;

  Engine(const CoordStarAlgebra& alg, const WedderburnOptions& o)
      : a(alg), opts(o), rng(o.seed) {
    if (a.gram.size() != 0 && !a.gram.isIdentity(1e-12)) {
      plain = false;
      Eigen::SelfAdjointEigenSolver<Matrix> es(a.gram);
      const double top = es.eigenvalues().maxCoeff();
      if (es.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, top))
        throw Error("wedderburn: Gram matrix is not positive definite");
      Eigen::VectorXd r = es.eigenvalues().cwiseSqrt();
      sqrt_g = es.eigenvectors() * r.asDiagonal() * es.eigenvectors().adjoint();
      isqrt_g = es.eigenvectors() * r.cwiseInverse().asDiagonal() *
                es.eigenvectors().adjoint();
    }
  }

  void bump(double r) { residual = std::max(residual, r); }

  // GNS representation: unitarily equivalent to left multiplication, and a
  // *-representation with respect to the plain inner product.
  Matrix rep(const Vector& x) const {
    Matrix c = cmat(a, x);
    if (plain) return c;
    return sqrt_g * c * isqrt_g;
  }

  Eigen::VectorXd spectrum_sa(const Vector& x) const {
    Matrix m = rep(x);
    Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

  double gnorm(const Vector& x) const {
    if (plain) return x.norm();
    return std::sqrt(std::abs((x.adjoint() * a.gram * x)(0, 0).real()));
  }

  Vector find_unit() const {
    const int d = a.dim;
    Matrix lhs(2 * d * d, d);
    for (int i = 0; i < d; ++i) {
      Matrix r(d, d);
      for (int j = 0; j < d; ++j) r.col(j) = a.left_mul[j].col(i);
      lhs.col(i).head(d * d) = vec_of(a.left_mul[i]);
      lhs.col(i).tail(d * d) = vec_of(r);
    }
    Vector rhs(2 * d * d);
    Matrix id = Matrix::Identity(d, d);
    rhs.head(d * d) = vec_of(id);
    rhs.tail(d * d) = rhs.head(d * d);
    Vector u = lhs.colPivHouseholderQr().solve(rhs);
    const double res = (lhs * u - rhs).norm() / rhs.norm();
    if (res > 1e-6) throw Error("wedderburn: presented algebra has no unit");
    return u;
  }

  // Right null space of the coordinate commutator map [., w_j].
  // JacobiSVD throughout this file: BDCSVD in Eigen 3.4 returns inaccurate
  // singular vectors on complex matrices with highly repeated singular
  // values, exactly the spectra these structural maps have.
  Matrix center_basis() const {
    const int d = a.dim;
    Matrix n(d * d, d);
    for (int i = 0; i < d; ++i) {
      Matrix r(d, d);
      for (int j = 0; j < d; ++j) r.col(j) = a.left_mul[j].col(i);
      Matrix diff = a.left_mul[i] - r;
      n.col(i) = vec_of(diff);
    }
    Eigen::JacobiSVD<Matrix> svd(n, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-8 * std::max(1.0, top)) ++rank;
    return svd.matrixV().rightCols(d - rank);
  }

  // Spectral projections of x onto each eigenvalue cluster. The projector
  // chi_t(x) is assembled in the GNS representation, where it is a sum of
  // orthogonal eigenprojections (stable for any cluster count), and pulled
  // back through the unit: rep(chi_t(x)) maps the unit to chi_t(x).
  std::vector<Vector> spectral_parts(const Vector& x, const std::vector<Cluster>& cl,
                                     const Vector& unit) const {
    Matrix m = rep(x);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
    const Eigen::VectorXd& vals = es.eigenvalues();
    const Matrix& vecs = es.eigenvectors();
    const Vector gunit = plain ? unit : Vector(sqrt_g * unit);
    std::vector<Vector> out(cl.size());
    for (std::size_t t = 0; t < cl.size(); ++t) {
      Vector acc = Vector::Zero(a.dim);
      for (int k = 0; k < vals.size(); ++k) {
        std::size_t nearest = 0;
        for (std::size_t l = 1; l < cl.size(); ++l)
          if (std::abs(vals(k) - cl[l].mean) < std::abs(vals(k) - cl[nearest].mean)) nearest = l;
        if (nearest == t) acc += vecs.col(k) * vecs.col(k).dot(gunit);
      }
      out[t] = plain ? acc : Vector(isqrt_g * acc);
    }
    return out;
  }

  // Mutually orthogonal self-adjoint idempotents summing to target_sum.
  bool validate_family(const std::vector<Vector>& q, const Vector& target_sum) {
    double worst = 0.0;
    Vector sum = Vector::Zero(a.dim);
    for (const auto& p : q) {
      const double s = std::max(1.0, p.norm());
      worst = std::max(worst, (a.mul(p, p) - p).norm() / s);
      worst = std::max(worst, (a.conj_star(p) - p).norm() / s);
      sum += p;
    }
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = i + 1; j < q.size(); ++j)
        worst = std::max(worst, a.mul(q[i], q[j]).norm());
    worst = std::max(worst, (sum - target_sum).norm() /
                                std::max(1.0, target_sum.norm()));
    if (worst > 1e-6) return false;
    bump(worst);
    return true;
  }

  std::vector<Vector> central_projections(const Vector& unit) {
    Matrix z = center_basis();
    const int r = static_cast<int>(z.cols());
    if (r <= 1) return {unit};
    double best_gap = -1.0;
    std::vector<Vector> best;
    for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
      Vector h = z * rng.gaussian(r, 1);
      h = 0.5 * (h + a.conj_star(h));
      const double nh = gnorm(h);
      if (nh < 1e-10) continue;
      h /= nh;
      auto cl = split_clusters(spectrum_sa(h), opts.gap);
      if (static_cast<int>(cl.size()) != r) continue;
      const double g = min_gap(cl);
      auto q = spectral_parts(h, cl, unit);
      if (!validate_family(q, unit)) continue;
      if (g > best_gap) {
        best_gap = g;
        best = std::move(q);
      }
      if (best_gap > 0.05) break;
    }
    if (best.empty())
      throw Error("wedderburn: central spectrum would not separate after retries");
    return best;
  }

  // Coordinate basis (plain-orthonormal) of the corner q W q.
  Matrix corner_basis(const Vector& q) const {
    const int d = a.dim;
    Matrix cq = cmat(a, q);
    Matrix cols(d, d);
    for (int i = 0; i < d; ++i) cols.col(i) = cq * (a.left_mul[i] * q);
    Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-8 * std::max(1.0, top)) ++rank;
    return svd.matrixU().leftCols(rank);
  }

  std::vector<Vector> minimal_projections(const Vector& q, const Matrix& basis,
                                          int n, const Vector& unit) {
    if (n == 1) return {q};
    const int expected_zero = a.dim - n * n;
    double best_gap = -1.0;
    std::vector<Vector> best;
    for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
      Vector y = basis * rng.gaussian(static_cast<int>(basis.cols()), 1);
      y = 0.5 * (y + a.conj_star(y));
      const double ny = gnorm(y);
      if (ny < 1e-10) continue;
      y /= ny;
      // Lift the corner spectrum away from the zero of the ambient algebra.
      Eigen::VectorXd raw = spectrum_sa(y);
      const double c = 3.0 * (1.0 + raw.cwiseAbs().maxCoeff());
      Vector ys = y + c * q;
      auto cl = split_clusters(spectrum_sa(ys), opts.gap);
      const int want = n + (expected_zero > 0 ? 1 : 0);
      if (static_cast<int>(cl.size()) != want) continue;
      int zero_idx = -1;
      bool ok = true;
      for (int i = 0; i < static_cast<int>(cl.size()); ++i) {
        if (expected_zero > 0 && std::abs(cl[i].mean) < c / 2) {
          zero_idx = i;
          ok = ok && cl[i].count == expected_zero;
        } else {
          ok = ok && cl[i].count == n;
        }
      }
      if (!ok || (expected_zero > 0) != (zero_idx >= 0)) continue;
      const double g = min_gap(cl);
      auto all = spectral_parts(ys, cl, unit);
      std::vector<Vector> p;
      for (int i = 0; i < static_cast<int>(all.size()); ++i)
        if (i != zero_idx) p.push_back(all[i]);
      if (!validate_family(p, q)) continue;
      if (g > best_gap) {
        best_gap = g;
        best = std::move(p);
      }
      if (best_gap > 0.05) break;
    }
    if (best.empty())
      throw Error("wedderburn: could not split a block into minimal projections");
    return best;
  }

  // v_1 = p_1 and v_t with v_t* v_t = p_1, v_t v_t* = p_t.
  std::vector<Vector> isometries(const std::vector<Vector>& p, const Matrix& basis) {
    std::vector<Vector> v{p[0]};
    for (std::size_t t = 1; t < p.size(); ++t) {
      bool done = false;
      for (int attempt = 0; attempt < opts.max_retries && !done; ++attempt) {
        Vector r = basis * rng.gaussian(static_cast<int>(basis.cols()), 1);
        Vector x = a.mul(p[t], a.mul(r, p[0]));
        Vector w = a.mul(a.conj_star(x), x);
        const double gamma = (p[0].dot(w) / p[0].squaredNorm()).real();
        if (gamma < 1e-12) continue;
        if ((w - gamma * p[0]).norm() > 1e-6 * gamma * std::max(1.0, p[0].norm()))
          continue;
        Vector vt = x / std::sqrt(gamma);
        if ((a.mul(vt, a.conj_star(vt)) - p[t]).norm() >
            1e-6 * std::max(1.0, p[t].norm()))
          continue;
        v.push_back(vt);
        done = true;
      }
      if (!done) throw Error("wedderburn: failed to connect minimal projections");
    }
    return v;
  }
};

}  // namespace

Vector CoordStarAlgebra::mul(const Vector& x, const Vector& y) const {
  Vector out = Vector::Zero(dim);
  for (int i = 0; i < dim; ++i)
    if (std::abs(x(i)) > 1e-300) out.noalias() += x(i) * (left_mul[i] * y);
  return out;
}

CoordDecomposition decompose(const CoordStarAlgebra& a, const WedderburnOptions& opts) {
  if (a.dim == 0) {
    CoordDecomposition dec;
    dec.algebra = FdAlgebra(std::vector<int>{});
    dec.to_abstract = Matrix::Zero(0, 0);
    dec.to_coords = Matrix::Zero(0, 0);
    dec.unit = Vector::Zero(0);
    return dec;
  }
  if (static_cast<int>(a.left_mul.size()) != a.dim)
    throw Error("wedderburn: structure constant tensor has wrong size");
  for (const auto& m : a.left_mul)
    if (m.rows() != a.dim || m.cols() != a.dim)
      throw Error("wedderburn: structure constant tensor has wrong size");
  if (a.star.rows() != a.dim || a.star.cols() != a.dim)
    throw Error("wedderburn: star matrix has wrong size");

  Engine eng(a, opts);
  Vector unit = eng.find_unit();
  auto q = eng.central_projections(unit);

  struct Blk {
    int n = 0;
    std::vector<Vector> v;
  };
  std::vector<Blk> blks;
  int total = 0;
  for (const auto& qj : q) {
    Matrix basis = eng.corner_basis(qj);
    const int dsq = static_cast<int>(basis.cols());
    const int n = static_cast<int>(std::llround(std::sqrt(double(dsq))));
    if (n * n != dsq)
      throw Error("wedderburn: block dimension is not a perfect square");
    auto p = eng.minimal_projections(qj, basis, n, unit);
    blks.push_back({n, eng.isometries(p, basis)});
    total += dsq;
  }
  if (total != a.dim)
    throw Error("wedderburn: block dimensions do not sum to the algebra dimension");

  const int d = a.dim;
  Matrix t(d, d);
  std::vector<int> disc_offset(blks.size());
  {
    int col = 0;
    for (std::size_t j = 0; j < blks.size(); ++j) {
      disc_offset[j] = col;
      const auto& b = blks[j];
      for (int s = 0; s < b.n; ++s)
        for (int r = 0; r < b.n; ++r)
          t.col(col++) = a.mul(b.v[r], a.conj_star(b.v[s]));
    }
  }
  Eigen::PartialPivLU<Matrix> lu(t);
  Matrix tinv = lu.inverse();
  const double inv_res =
      (t * tinv - Matrix::Identity(d, d)).norm() / std::sqrt(double(d));
  if (inv_res > 1e-6)
    throw Error("wedderburn: matrix-unit transfer is ill-conditioned");
  eng.bump(inv_res);

  // Order blocks by size, then by the block trace of the fingerprint element.
  Vector fp_abs = Vector::Zero(d);
  if (a.fingerprint.size() == d) fp_abs = tinv * a.fingerprint;
  std::vector<std::array<long long, 3>> key(blks.size());
  for (std::size_t j = 0; j < blks.size(); ++j) {
    Complex tr = 0;
    for (int s = 0; s < blks[j].n; ++s)
      tr += fp_abs(disc_offset[j] + s * blks[j].n + s);
    key[j] = {blks[j].n, std::llround(tr.real() * 1e8), std::llround(tr.imag() * 1e8)};
  }
  std::vector<int> order(blks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return key[x] < key[y]; });

  std::vector<int> sizes;
  for (int j : order) sizes.push_back(blks[j].n);
  CoordDecomposition dec;
  dec.algebra = FdAlgebra(sizes);
  dec.to_coords = Matrix(d, d);
  dec.to_abstract = Matrix(d, d);
  {
    int pos = 0;
    for (int j : order) {
      const int nn = blks[j].n * blks[j].n;
      dec.to_coords.middleCols(pos, nn) = t.middleCols(disc_offset[j], nn);
      dec.to_abstract.middleRows(pos, nn) = tinv.middleRows(disc_offset[j], nn);
      pos += nn;
    }
  }
  dec.unit = unit;
  dec.residual = eng.residual;

  // Spot-check that the transfer is a *-isomorphism.
  {
    Rng check(opts.seed ^ 0x9e3779b97f4a7c15ULL);
    Element one = dec.abstract_of(unit);
    eng.bump((one - Element::identity(dec.algebra)).hs_norm());
    for (int k = 0; k < 4; ++k) {
      Vector x = check.gaussian(d, 1);
      Vector y = check.gaussian(d, 1);
      Element ex = dec.abstract_of(x);
      Element ey = dec.abstract_of(y);
      double rel = (ex * ey - dec.abstract_of(a.mul(x, y))).hs_norm() /
                   std::max(1.0, ex.hs_norm() * ey.hs_norm());
      eng.bump(rel);
      rel = (ex.adjoint() - dec.abstract_of(a.conj_star(x))).hs_norm() /
            std::max(1.0, ex.hs_norm());
      eng.bump(rel);
    }
    if (eng.residual > 1e-5)
      throw Error("wedderburn: decomposition failed the isomorphism check");
  }
  dec.residual = eng.residual;
  return dec;
}

Wedderburn wedderburn(const std::vector<Matrix>& generators,
                      const WedderburnOptions& opts) {
  if (generators.empty()) throw Error("wedderburn: no generators");
  const int d = static_cast<int>(generators[0].rows());
  for (const auto& g : generators)
    if (g.rows() != d || g.cols() != d)
      throw Error("wedderburn: generators must be square matrices of one size");

  // Orthonormal basis of the generated span under <a,b> = tr(b* a), grown by
  // multiplying with generators on both sides until closed.
  std::vector<Matrix> basis;
  Matrix bmat(d * d, 0);
  auto try_add = [&](const Matrix& raw) -> bool {
    const double n0 = raw.norm();
    if (n0 < 1e-12) return false;
    Vector v = vec_of(raw) / n0;
    if (bmat.cols() > 0) {
      v -= bmat * (bmat.adjoint() * v);
      v -= bmat * (bmat.adjoint() * v);
    }
    const double r = v.norm();
    if (r < 1e-8) return false;
    v /= r;
    bmat.conservativeResize(d * d, bmat.cols() + 1);
    bmat.col(bmat.cols() - 1) = v;
    basis.push_back(Eigen::Map<const Matrix>(v.data(), d, d));
    return true;
  };

  std::vector<Matrix> work;
  for (const auto& g : generators)
    if (try_add(g)) work.push_back(basis.back());
  std::size_t scan = 0;
  while (scan < work.size()) {
    Matrix w = work[scan++];
    for (const auto& g : generators) {
      if (try_add(w * g)) work.push_back(basis.back());
      if (try_add(g * w)) work.push_back(basis.back());
    }
  }
  const int n = static_cast<int>(basis.size());
  if (n == 0) throw Error("wedderburn: generators span the zero algebra");

  for (const auto& b : basis) {
    Matrix ad = b.adjoint();
    Vector v = vec_of(ad);
    Vector res = v - bmat * (bmat.adjoint() * v);
    if (res.norm() > 1e-7)
      throw Error("wedderburn: generated algebra is not self-adjoint");
  }

  CoordStarAlgebra alg;
  alg.dim = n;
  alg.left_mul.assign(n, Matrix(n, n));
  double closure = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix prod = basis[i] * basis[j];
      Vector c = bmat.adjoint() * vec_of(prod);
      closure = std::max(closure, (vec_of(prod) - bmat * c).norm() /
                                      std::max(1.0, prod.norm()));
      alg.left_mul[i].col(j) = c;
    }
  if (closure > 1e-7) throw Error("wedderburn: span closure failed");
  alg.star = Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    Matrix ad = basis[i].adjoint();
    alg.star.col(i) = bmat.adjoint() * vec_of(ad);
  }
  alg.fingerprint = bmat.adjoint() * vec_of(generators[0]);

  Wedderburn w;
  w.ambient = d;
  w.basis = std::move(basis);
  w.basis_mat = std::move(bmat);
  w.dec = decompose(alg, opts);
  w.algebra = w.dec.algebra;
  return w;
}

Vector Wedderburn::coords_of(const Matrix& w, double* residual) const {
  Vector v = vec_of(w);
  Vector c = basis_mat.adjoint() * v;
  if (residual) *residual = (v - basis_mat * c).norm();
  return c;
}

Matrix Wedderburn::matrix_of(const Vector& coords) const {
  Vector v = basis_mat * coords;
  return Eigen::Map<const Matrix>(v.data(), ambient, ambient);
}

Element Wedderburn::to_abstract(const Matrix& w, double span_tol) const {
  double r = 0;
  Vector c = coords_of(w, &r);
  if (r > span_tol * std::max(1.0, w.norm()))
    throw Error("wedderburn: matrix lies outside the decomposed algebra");
  return dec.abstract_of(c);
}

Matrix Wedderburn::to_concrete(const Element& x) const {
  return matrix_of(dec.coords_of(x));
}

std::vector<std::vector<int>> attach_weights(
    CoordDecomposition& dec,
    const std::function<std::vector<std::pair<int, Vector>>(const Vector&)>& split,
    double tol) {
  const FdAlgebra alg = dec.algebra;
  const int d = alg.dim();
  Matrix new_t = dec.to_coords;
  std::vector<std::vector<int>> weights(alg.num_blocks());
  double worst = 0.0;

  for (int j = 0; j < alg.num_blocks(); ++j) {
    const int n = alg.block_size(j);
    const int off = alg.coord_offset(j);
    const int nn = n * n;
    // The grading derivation restricted to this block is ad(h) for some
    // self-adjoint h; solve for h in least squares over all matrix units.
    Matrix lhs = Matrix::Zero(nn * nn, nn);
    Vector rhs = Vector::Zero(nn * nn);
    for (int s = 0; s < n; ++s)
      for (int r = 0; r < n; ++r) {
        const int p = s * n + r;
        for (int a2 = 0; a2 < n; ++a2)
          lhs(p * nn + s * n + a2, r * n + a2) += 1.0;
        for (int b2 = 0; b2 < n; ++b2)
          lhs(p * nn + b2 * n + r, b2 * n + s) -= 1.0;
        Vector col = dec.to_coords.col(off + p);
        Vector dsum = Vector::Zero(d);
        Vector back = Vector::Zero(col.size());
        for (const auto& [g, part] : split(col)) {
          back += part;
          dsum += double(g) * (dec.to_abstract * part);
        }
        worst = std::max(worst, (back - col).norm() / std::max(1.0, col.norm()));
        const double off_block = std::sqrt(std::max(
            0.0, dsum.squaredNorm() - dsum.segment(off, nn).squaredNorm()));
        worst = std::max(worst, off_block);
        rhs.segment(p * nn, nn) = dsum.segment(off, nn);
      }
    Vector hv = lhs.colPivHouseholderQr().solve(rhs);
    worst = std::max(worst, (lhs * hv - rhs).norm() / std::max(1.0, rhs.norm()));
    Matrix h = Eigen::Map<const Matrix>(hv.data(), n, n);
    h = 0.5 * (h + h.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Eigen::VectorXd lam = es.eigenvalues();
    std::vector<int> w(n);
    for (int r = 0; r < n; ++r) {
      const double x = lam(r) - lam(0);
      w[r] = static_cast<int>(std::llround(x));
      if (std::abs(x - w[r]) > 1e-6)
        throw Error("attach_weights: grading weights are not integers");
    }
    weights[j] = w;
    const Matrix qm = es.eigenvectors();
    // Rotate the matrix units into the eigenbasis of h so each unit carries
    // a pure grade: E'_{st} = sum_{a,b} Q(a,s) conj(Q(b,t)) E_{ab}.
    Matrix newcols = Matrix::Zero(d, nn);
    for (int t2 = 0; t2 < n; ++t2)
      for (int s = 0; s < n; ++s) {
        Vector acc = Vector::Zero(d);
        for (int b2 = 0; b2 < n; ++b2)
          for (int a2 = 0; a2 < n; ++a2)
            acc += qm(a2, s) * std::conj(qm(b2, t2)) *
                   dec.to_coords.col(off + b2 * n + a2);
        newcols.col(t2 * n + s) = acc;
      }
    new_t.middleCols(off, nn) = newcols;
  }

  Eigen::PartialPivLU<Matrix> lu(new_t);
  Matrix inv = lu.inverse();
  worst = std::max(worst, (new_t * inv - Matrix::Identity(d, d)).norm() /
                              std::sqrt(double(std::max(1, d))));
  dec.to_coords = new_t;
  dec.to_abstract = inv;

  for (int j = 0; j < alg.num_blocks(); ++j) {
    const int n = alg.block_size(j);
    const int off = alg.coord_offset(j);
    for (int s = 0; s < n; ++s)
      for (int r = 0; r < n; ++r) {
        const int expect = weights[j][r] - weights[j][s];
        Vector col = dec.to_coords.col(off + s * n + r);
        for (const auto& [g, part] : split(col))
          if (g != expect)
            worst = std::max(worst, part.norm() / std::max(1.0, col.norm()));
      }
  }
  if (worst > tol)
    throw Error("attach_weights: grading does not match integer weights");
  return weights;
}

}  // namespace covalg
