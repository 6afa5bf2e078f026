#include "covalg/ktheory.hpp"

#include <algorithm>
#include <cmath>

#include "covalg/l_algebra.hpp"

namespace covalg {

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (cols_ != o.rows_) throw Error("IntMatrix: product shape mismatch");
  IntMatrix out(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const BigInt& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.cols_; ++j) out(i, j) += a * o(k, j);
    }
  return out;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error("IntMatrix: sum shape mismatch");
  IntMatrix out(rows_, cols_);
  for (std::size_t k = 0; k < a_.size(); ++k) out.a_[k] = a_[k] + o.a_[k];
  return out;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error("IntMatrix: difference shape mismatch");
  IntMatrix out(rows_, cols_);
  for (std::size_t k = 0; k < a_.size(); ++k) out.a_[k] = a_[k] - o.a_[k];
  return out;
}

bool IntMatrix::operator==(const IntMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

bool IntMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(),
                     [](const BigInt& x) { return x == 0; });
}

std::string IntMatrix::str() const {
  std::string s = "[";
  for (int i = 0; i < rows_; ++i) {
    s += i ? ", [" : "[";
    for (int j = 0; j < cols_; ++j) {
      if (j) s += ", ";
      s += (*this)(i, j).str();
    }
    s += "]";
  }
  return s + "]";
}

K0Group k0(const FdAlgebra& alg) {
  K0Group g;
  g.rank = alg.num_blocks();
  g.blocks.resize(g.rank);
  for (int b = 0; b < g.rank; ++b) g.blocks[b] = b;
  return g;
}

int k1_rank(const FdAlgebra&) { return 0; }

InducedMap induced_map(const FdAlgebra& from, const FdAlgebra& to,
                       const std::function<Element(const Element&)>& h,
                       double tol) {
  // Evaluate on the matrix-unit basis, then check the homomorphism property
  // through the resulting linear map.
  Matrix hmat(to.dim(), from.dim());
  for (int i = 0; i < from.dim(); ++i) {
    Vector e = Vector::Zero(from.dim());
    e(i) = 1.0;
    hmat.col(i) = h(Element::from_coords(from, e)).coords();
  }
  auto apply = [&](const Element& x) {
    return Element::from_coords(to, hmat * x.coords());
  };
  double worst = 0.0;
  for (int b = 0; b < from.num_blocks(); ++b) {
    int n = from.block_size(b);
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) {
        Element x = Element::matrix_unit(from, b, r, s);
        worst = std::max(worst,
                         (apply(x.adjoint()) - apply(x).adjoint()).max_abs());
        for (int b2 = 0; b2 < from.num_blocks(); ++b2) {
          int n2 = from.block_size(b2);
          for (int r2 = 0; r2 < n2; ++r2)
            for (int s2 = 0; s2 < n2; ++s2) {
              Element y = Element::matrix_unit(from, b2, r2, s2);
              worst = std::max(
                  worst, (apply(x * y) - apply(x) * apply(y)).max_abs());
            }
        }
      }
  }
  if (worst > tol)
    throw Error("induced_map: the map is not a *-homomorphism");

  InducedMap im;
  im.m = IntMatrix(to.num_blocks(), from.num_blocks());
  for (int b = 0; b < from.num_blocks(); ++b) {
    Element p = Element::matrix_unit(from, b, 0, 0);
    Element q = apply(p);
    for (int t = 0; t < to.num_blocks(); ++t) {
      Complex tr = q.block(t).trace();
      long long r = std::llround(tr.real());
      if (std::abs(tr.imag()) > tol ||
          std::abs(tr.real() - static_cast<double>(r)) > tol)
        throw Error("induced_map: projection rank is not an integer");
      im.m(t, b) = r;
    }
  }
  return im;
}

Snf snf(const IntMatrix& m) {
  int R = m.rows(), C = m.cols();
  Snf s;
  s.u = IntMatrix::identity(R);
  s.u_inv = IntMatrix::identity(R);
  s.v = IntMatrix::identity(C);
  s.v_inv = IntMatrix::identity(C);
  s.d = m;
  IntMatrix& a = s.d;

  auto row_swap = [&](int i, int j) {
    if (i == j) return;
    for (int k = 0; k < C; ++k) std::swap(a(i, k), a(j, k));
    for (int k = 0; k < R; ++k) std::swap(s.u(i, k), s.u(j, k));
    for (int k = 0; k < R; ++k) std::swap(s.u_inv(k, i), s.u_inv(k, j));
  };
  auto col_swap = [&](int i, int j) {
    if (i == j) return;
    for (int k = 0; k < R; ++k) std::swap(a(k, i), a(k, j));
    for (int k = 0; k < C; ++k) std::swap(s.v(k, i), s.v(k, j));
    for (int k = 0; k < C; ++k) std::swap(s.v_inv(i, k), s.v_inv(j, k));
  };
  auto row_axpy = [&](int i, int j, const BigInt& q) {  // row i -= q row j
    if (q == 0) return;
    for (int k = 0; k < C; ++k) a(i, k) -= q * a(j, k);
    for (int k = 0; k < R; ++k) s.u(i, k) -= q * s.u(j, k);
    for (int k = 0; k < R; ++k) s.u_inv(k, j) += q * s.u_inv(k, i);
  };
  auto col_axpy = [&](int i, int j, const BigInt& q) {  // col i -= q col j
    if (q == 0) return;
    for (int k = 0; k < R; ++k) a(k, i) -= q * a(k, j);
    for (int k = 0; k < C; ++k) s.v(k, i) -= q * s.v(k, j);
    for (int k = 0; k < C; ++k) s.v_inv(j, k) += q * s.v_inv(i, k);
  };
  auto row_negate = [&](int i) {
    for (int k = 0; k < C; ++k) a(i, k) = -a(i, k);
    for (int k = 0; k < R; ++k) s.u(i, k) = -s.u(i, k);
    for (int k = 0; k < R; ++k) s.u_inv(k, i) = -s.u_inv(k, i);
  };

  int lim = std::min(R, C);
  for (int t = 0; t < lim; ++t) {
    int pi = -1, pj = -1;
    BigInt best = 0;
    for (int i = t; i < R; ++i)
      for (int j = t; j < C; ++j) {
        if (a(i, j) == 0) continue;
        BigInt mag = abs(a(i, j));
        if (pi < 0 || mag < best) {
          best = mag;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;
    row_swap(t, pi);
    col_swap(t, pj);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (int i = t + 1; i < R; ++i) {
        if (a(i, t) == 0) continue;
        row_axpy(i, t, a(i, t) / a(t, t));
        if (a(i, t) != 0) {
          row_swap(t, i);  // Euclid step: the remainder becomes the pivot
          clean = false;
        }
      }
      if (!clean) continue;
      for (int j = t + 1; j < C; ++j) {
        if (a(t, j) == 0) continue;
        col_axpy(j, t, a(t, j) / a(t, t));
        if (a(t, j) != 0) {
          col_swap(t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      // the pivot must divide the whole trailing submatrix for the
      // divisibility chain d_1 | d_2 | ...
      for (int i = t + 1; i < R && clean; ++i)
        for (int j = t + 1; j < C && clean; ++j)
          if (a(i, j) % a(t, t) != 0) {
            row_axpy(t, i, BigInt(-1));
            clean = false;
          }
    }
    if (a(t, t) < 0) row_negate(t);
  }
  return s;
}

bool is_unimodular(const IntMatrix& m) {
  if (m.rows() != m.cols()) return false;
  Snf s = snf(m);
  for (int i = 0; i < m.rows(); ++i)
    if (s.d(i, i) != 1) return false;
  return true;
}

ExactnessCertificate exact_at(const IntMatrix& f, const IntMatrix& g) {
  if (f.rows() != g.cols())
    throw Error("exact_at: the maps do not share the middle group");
  ExactnessCertificate cert;
  cert.composite_zero = (g * f).is_zero();
  if (!cert.composite_zero) return cert;

  Snf sg = snf(g);
  int b = g.cols();
  int rank_g = 0;
  for (int i = 0; i < std::min(g.rows(), b); ++i)
    if (sg.d(i, i) != 0) ++rank_g;
  int r = b - rank_g;
  cert.kernel_rank = r;

  // Kernel coordinates: the trailing rows of v_inv (the kernel lattice is
  // spanned by the trailing columns of v, and is saturated, so the image of f
  // has exact integer coordinates there).
  IntMatrix vf = sg.v_inv * f;
  IntMatrix c(r, f.cols());
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < f.cols(); ++j) c(i, j) = vf(rank_g + i, j);

  Snf sc = snf(c);
  cert.divisors.resize(r);
  int lim = std::min(r, f.cols());
  for (int i = 0; i < r; ++i) {
    cert.divisors[i] = (i < lim) ? sc.d(i, i) : BigInt(0);
    if (cert.divisors[i] != 0) ++cert.image_rank;
  }
  cert.exact = std::all_of(cert.divisors.begin(), cert.divisors.end(),
                           [](const BigInt& d) { return d == 1; });
  return cert;
}

namespace {

// J viewed as an algebra in its own right, embedded back into A.
std::function<Element(const Element&)> embed_ideal(const Ideal& ideal) {
  return [&ideal](const Element& x) {
    Element out(ideal.algebra());
    const auto& blocks = ideal.blocks();
    for (std::size_t k = 0; k < blocks.size(); ++k)
      out.block(blocks[k]) = x.block(static_cast<int>(k));
    return out;
  };
}

}  // namespace

PvReport pv_verify(const System& sys, const RealizeOptions& opts) {
  PvReport rep;
  const FdAlgebra& alg = sys->algebra();
  const Ideal& target = sys->target();
  Realization real = realize_covariance(sys, opts);
  FdAlgebra jalg = target.as_algebra();

  rep.a_blocks = alg.block_sizes();
  rep.b_blocks = real.target.block_sizes();
  rep.j_blocks = jalg.block_sizes();

  auto embed = embed_ideal(target);
  InducedMap incl = induced_map(jalg, alg, embed);
  InducedMap thinv = induced_map(jalg, alg, [&](const Element& x) {
    return paut_apply(sys, embed(x), -1);
  });
  rep.delta = incl.m - thinv.m;

  InducedMap istar = induced_map(alg, real.target, [&](const Element& a) {
    return real.realize(LElement::monomial(sys, a, 0));
  });
  rep.inclusion = istar.m;

  rep.at_source = exact_at(IntMatrix(jalg.num_blocks(), 0), rep.delta);
  rep.at_middle = exact_at(rep.delta, rep.inclusion);
  rep.at_target =
      exact_at(rep.inclusion, IntMatrix(0, real.target.num_blocks()));
  rep.ok = rep.at_source.exact && rep.at_middle.exact && rep.at_target.exact;
  return rep;
}

CornerDiagramReport diagram_72_check(const System& sys,
                                     const WedderburnOptions& opts) {
  CornerDiagramReport rep;
  const FdAlgebra& alg = sys->algebra();
  const Ideal& target = sys->target();
  auto model = std::make_shared<ToeplitzModel>(sys);
  ToeplitzRealization treal = realize_toeplitz(model, opts);
  FdAlgebra jalg = target.as_algebra();
  FdAlgebra lalg = treal.lambda.as_algebra();
  const FdAlgebra& ealg = treal.action.algebra();

  auto embed = embed_ideal(target);
  InducedMap incl = induced_map(jalg, alg, embed);
  InducedMap thinv = induced_map(jalg, alg, [&](const Element& x) {
    return paut_apply(sys, embed(x), -1);
  });
  rep.delta = incl.m - thinv.m;

  InducedMap dstar = induced_map(alg, ealg, [&](const Element& a) {
    return treal.realize(
        ToeplitzElement::from_symbol(LElement::monomial(sys, a, 0)));
  });
  rep.d_star = dstar.m;

  const auto& lblocks = treal.lambda.blocks();
  auto to_lambda = [&](const Element& y) {
    for (int b : y.support(1e-7))
      if (!treal.lambda.contains_block(b))
        throw Error("corner embedding left the correction ideal");
    Element out(lalg);
    for (std::size_t k = 0; k < lblocks.size(); ++k)
      out.block(static_cast<int>(k)) = y.block(lblocks[k]);
    return out;
  };
  InducedMap jstar = induced_map(jalg, lalg, [&](const Element& x) {
    ToeplitzElement t(sys);
    t.set_correction(1, 1, embed(x), 1e-7);
    return to_lambda(treal.realize(t));
  });
  rep.j_star = jstar.m;

  InducedMap linc = induced_map(lalg, ealg, [&](const Element& x) {
    Element out(ealg);
    for (std::size_t k = 0; k < lblocks.size(); ++k)
      out.block(lblocks[k]) = x.block(static_cast<int>(k));
    return out;
  });
  rep.lambda_inclusion = linc.m;

  rep.commutes = (rep.lambda_inclusion * rep.j_star) == (rep.d_star * rep.delta);
  rep.j_unimodular = is_unimodular(rep.j_star);
  rep.d_unimodular = is_unimodular(rep.d_star);
  rep.ok = rep.commutes && rep.j_unimodular && rep.d_unimodular;
  return rep;
}

}  // namespace covalg
