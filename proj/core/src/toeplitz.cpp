#include "covalg/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <set>

#include "covalg/l_algebra.hpp"

namespace covalg {

namespace {

LElement mono(const System& sys, const Element& a, int n) {
  return LElement::monomial(sys, a, n, 1e-6);
}

// Single product coefficient (a delta_n)(b delta_m) at level n + m.
Element coeff_mul(const System& sys, const Element& a, int n, const Element& b,
                  int m) {
  return l_mul(mono(sys, a, n), mono(sys, b, m)).coeff(n + m);
}

}  // namespace

Ideal correction_ideal(const System& sys, int i, int j) {
  if (i < 1 || j < 1) throw Error("correction_ideal: indices must be >= 1");
  Ideal inter = ideal_product(domain_chain(sys, -i), domain_chain(sys, -j));
  std::vector<int> blocks;
  for (int b : inter.blocks()) {
    int cur = b;
    for (int k = 0; k < i; ++k) {
      cur = sys->map_block(cur);
      if (cur < 0) throw Error("correction_ideal: block left the domain chain");
    }
    blocks.push_back(cur);
  }
  std::sort(blocks.begin(), blocks.end());
  return Ideal(sys->algebra(), std::move(blocks));
}

ToeplitzElement::ToeplitzElement(System sys)
    : sys_(std::move(sys)), symbol_(sys_) {}

ToeplitzElement ToeplitzElement::from_symbol(const LElement& s) {
  ToeplitzElement t(s.system());
  t.symbol_ = s;
  return t;
}

Element ToeplitzElement::correction(int i, int j) const {
  auto it = corr_.find({i, j});
  if (it == corr_.end()) return Element::zero(sys_->algebra());
  return it->second;
}

void ToeplitzElement::set_correction(int i, int j, const Element& c, double tol) {
  if (i < 1 || j < 1) throw Error("corrections live at indices i, j >= 1");
  Ideal cij = correction_ideal(sys_, i, j);
  if (!cij.contains(c, tol * std::max(1.0, c.max_abs())))
    throw Error("correction coefficient is not in its ideal");
  Element p = cij.project(c);
  if (p.max_abs() == 0.0)
    corr_.erase({i, j});
  else
    corr_[{i, j}] = std::move(p);
}

void ToeplitzElement::set_symbol_coeff(int n, const Element& a, double tol) {
  symbol_.set_coeff(n, a, tol);
}

bool ToeplitzElement::is_zero(double tol) const {
  if (!symbol_.is_zero(tol)) return false;
  for (const auto& [ij, c] : corr_)
    if (c.max_abs() > tol) return false;
  return true;
}

double ToeplitzElement::hs_norm() const {
  double s = symbol_.hs_norm();
  double total = s * s;
  for (const auto& [ij, c] : corr_) {
    double h = c.hs_norm();
    total += h * h;
  }
  return std::sqrt(total);
}

ToeplitzElement& ToeplitzElement::prune(double tol) {
  symbol_.prune(tol);
  for (auto it = corr_.begin(); it != corr_.end();)
    it = (it->second.max_abs() <= tol) ? corr_.erase(it) : std::next(it);
  return *this;
}

void ToeplitzElement::require_same(const ToeplitzElement& o) const {
  if (sys_ != o.sys_)
    throw Error("Toeplitz elements belong to different systems");
}

ToeplitzElement ToeplitzElement::operator+(const ToeplitzElement& o) const {
  require_same(o);
  ToeplitzElement out(sys_);
  out.symbol_ = symbol_ + o.symbol_;
  out.corr_ = corr_;
  for (const auto& [ij, c] : o.corr_) {
    auto it = out.corr_.find(ij);
    if (it == out.corr_.end())
      out.corr_.emplace(ij, c);
    else
      it->second = it->second + c;
  }
  out.prune(0.0);
  return out;
}

ToeplitzElement ToeplitzElement::operator-(const ToeplitzElement& o) const {
  return *this + (o * Complex(-1.0, 0.0));
}

ToeplitzElement ToeplitzElement::operator-() const {
  return *this * Complex(-1.0, 0.0);
}

ToeplitzElement ToeplitzElement::operator*(const Complex& c) const {
  ToeplitzElement out(sys_);
  out.symbol_ = symbol_ * c;
  for (const auto& [ij, e] : corr_) out.corr_.emplace(ij, e * c);
  out.prune(0.0);
  return out;
}

ToeplitzElement t_mul(const ToeplitzElement& a, const ToeplitzElement& b) {
  a.require_same(b);
  const System& sys = a.sys_;
  if (!chain_bound(sys))
    throw Error("t_mul: the Toeplitz extension requires bounded domain chains");

  std::map<int, Element> sym;
  std::map<std::pair<int, int>, Element> cor;
  auto add_sym = [&](int n, const Element& e) {
    auto it = sym.find(n);
    if (it == sym.end())
      sym.emplace(n, e);
    else
      it->second = it->second + e;
  };
  auto add_cor = [&](int i, int j, const Element& e) {
    auto it = cor.find({i, j});
    if (it == cor.end())
      cor.emplace(std::make_pair(i, j), e);
    else
      it->second = it->second + e;
  };

  // Symbol times symbol: S^n S^m collapses to S^{n+m}, minus matrix-unit
  // spill when a forward power meets a backward one.
  for (const auto& [n, an] : a.symbol_.terms())
    for (const auto& [m, bm] : b.symbol_.terms()) {
      Element zc = coeff_mul(sys, an, n, bm, m);
      if (zc.is_zero(1e-15)) continue;
      add_sym(n + m, zc);
      if (n > 0 && m < 0) {
        int kmax = std::min(n, -m);
        for (int k = 1; k <= kmax; ++k)
          add_cor(k + std::max(n + m, 0), k - std::min(n + m, 0), -zc);
      }
    }

  // Symbol times correction: S^n e_{ij} = e_{i+n, j}, dead when i + n < 1.
  for (const auto& [n, an] : a.symbol_.terms())
    for (const auto& [ij, c] : b.corr_) {
      auto [i, j] = ij;
      if (i + n < 1) continue;
      Element zc = coeff_mul(sys, an, n, c, i - j);
      if (zc.is_zero(1e-15)) continue;
      add_cor(i + n, j, zc);
    }

  // Correction times symbol: e_{ij} S^m = e_{i, j-m}, dead when j - m < 1.
  for (const auto& [ij, c] : a.corr_)
    for (const auto& [m, bm] : b.symbol_.terms()) {
      auto [i, j] = ij;
      if (j - m < 1) continue;
      Element zc = coeff_mul(sys, c, i - j, bm, m);
      if (zc.is_zero(1e-15)) continue;
      add_cor(i, j - m, zc);
    }

  // Correction times correction: e_{ij} e_{kl} = [j = k] e_{il}.
  for (const auto& [ij, c] : a.corr_)
    for (const auto& [kl, d] : b.corr_) {
      auto [i, j] = ij;
      auto [k, l] = kl;
      if (j != k) continue;
      Element zc = coeff_mul(sys, c, i - j, d, k - l);
      if (zc.is_zero(1e-15)) continue;
      add_cor(i, l, zc);
    }

  ToeplitzElement out(sys);
  for (const auto& [n, e] : sym) {
    if (e.is_zero(1e-14 * std::max(1.0, e.max_abs()))) continue;
    out.symbol_.set_coeff(n, e, 1e-6 * std::max(1.0, e.max_abs()));
  }
  for (const auto& [ij, e] : cor) {
    if (e.max_abs() <= 1e-14) continue;
    out.set_correction(ij.first, ij.second, e, 1e-6);
  }
  return out;
}

ToeplitzElement t_adjoint(const ToeplitzElement& a) {
  ToeplitzElement out(a.sys_);
  out.symbol_ = l_star(a.symbol_);
  for (const auto& [ij, c] : a.corr_) {
    auto [i, j] = ij;
    Element cc = l_star(mono(a.sys_, c, i - j)).coeff(j - i);
    out.set_correction(j, i, cc, 1e-6);
  }
  return out;
}

bool lambda_membership(const ToeplitzElement& a, double tol) {
  return a.symbol().is_zero(tol);
}

ToeplitzElement gamma_component(const ToeplitzElement& a, int n) {
  ToeplitzElement out(a.system());
  Element c = a.symbol().coeff(n);
  if (!c.is_zero(0.0)) out.set_symbol_coeff(n, c, 1e-6);
  for (const auto& [ij, e] : a.corrections())
    if (ij.first - ij.second == n) out.set_correction(ij.first, ij.second, e, 1e-6);
  return out;
}

LElement quotient_phi(const ToeplitzElement& a) { return a.symbol(); }

ToeplitzModel::ToeplitzModel(System sys) : sys_(std::move(sys)), rep_(sys_) {
  bound_ = *chain_bound(sys_);  // RegularRep already rejected unbounded chains
  const FdAlgebra& alg = sys_->algebra();

  int off = 0;
  for (int n = -(bound_ - 1); n <= bound_ - 1; ++n) {
    Ideal dn = domain_chain(sys_, n);
    if (dn.dim() == 0) continue;
    segments_.push_back({n, 0, false, dn, off});
    off += dn.dim();
  }
  symbol_dim_ = off;
  for (int i = 1; i <= bound_ - 1; ++i)
    for (int j = 1; j <= bound_ - 1; ++j) {
      Ideal cij = correction_ideal(sys_, i, j);
      if (cij.dim() == 0) continue;
      corr_segment_[{i, j}] = static_cast<int>(segments_.size());
      segments_.push_back({i, j, true, cij, off});
      off += cij.dim();
    }
  dim_ = off;

  for (const Segment& seg : segments_)
    for (int b : seg.ideal.blocks()) {
      int nb = alg.block_size(b);
      for (int s = 0; s < nb; ++s)
        for (int r = 0; r < nb; ++r) {
          ToeplitzElement t(sys_);
          Element e = Element::matrix_unit(alg, b, r, s);
          if (seg.is_correction)
            t.set_correction(seg.level, seg.partner, e);
          else
            t.set_symbol_coeff(seg.level, e);
          basis_.push_back(std::move(t));
        }
    }
}

const Ideal& ToeplitzModel::coefficient_ideal(int i, int j) const {
  auto it = corr_segment_.find({i, j});
  if (it == corr_segment_.end())
    throw Error("coefficient_ideal: the (i, j) correction space is zero");
  return segments_[it->second].ideal;
}

Vector ToeplitzModel::coords(const ToeplitzElement& x) const {
  if (x.system() != sys_)
    throw Error("ToeplitzModel: element belongs to a different system");
  Vector v = Vector::Zero(dim_);
  for (const Segment& seg : segments_) {
    Element c = seg.is_correction ? x.correction(seg.level, seg.partner)
                                  : x.symbol().coeff(seg.level);
    int pos = seg.offset;
    for (int b : seg.ideal.blocks()) {
      const Matrix& blk = c.block(b);
      int nb = static_cast<int>(blk.rows());
      for (int s = 0; s < nb; ++s)
        for (int r = 0; r < nb; ++r) v(pos++) = blk(r, s);
    }
  }
  return v;
}

ToeplitzElement ToeplitzModel::from_coords(const Vector& v) const {
  if (v.size() != dim_) throw Error("ToeplitzModel: coordinate size mismatch");
  const FdAlgebra& alg = sys_->algebra();
  ToeplitzElement out(sys_);
  for (const Segment& seg : segments_) {
    Element c(alg);
    int pos = seg.offset;
    bool nonzero = false;
    for (int b : seg.ideal.blocks()) {
      int nb = alg.block_size(b);
      Matrix& blk = c.block(b);
      for (int s = 0; s < nb; ++s)
        for (int r = 0; r < nb; ++r) {
          blk(r, s) = v(pos++);
          nonzero |= blk(r, s) != Complex(0.0, 0.0);
        }
    }
    if (!nonzero) continue;
    if (seg.is_correction)
      out.set_correction(seg.level, seg.partner, c, 1e-9);
    else
      out.set_symbol_coeff(seg.level, c, 1e-9);
  }
  return out;
}

int ToeplitzModel::coord_grade(int k) const {
  for (const Segment& seg : segments_) {
    if (k < seg.offset || k >= seg.offset + seg.ideal.dim()) continue;
    return seg.is_correction ? seg.level - seg.partner : seg.level;
  }
  throw Error("ToeplitzModel: coordinate index out of range");
}

Matrix ToeplitzModel::truncated(const ToeplitzElement& x, int M) const {
  if (M < 1) throw Error("truncated: the window must contain at least one cell");
  int H = rep_.dim();
  Matrix out = Matrix::Zero(M * H, M * H);
  for (int n : x.symbol().support()) {
    Matrix P = rep_.represent(mono(sys_, x.symbol().coeff(n), n));
    for (int l = 1; l <= M; ++l) {
      int k = l + n;
      if (k < 1 || k > M) continue;
      out.block((k - 1) * H, (l - 1) * H, H, H) += P;
    }
  }
  for (const auto& [ij, c] : x.corrections()) {
    auto [i, j] = ij;
    if (i > M || j > M) continue;
    out.block((i - 1) * H, (j - 1) * H, H, H) +=
        rep_.represent(mono(sys_, c, i - j));
  }
  return out;
}

Complex ToeplitzModel::tau(const ToeplitzElement& x) const {
  int window = 2 * bound_ + 2;
  Complex t = static_cast<double>(window) *
              rep_.represent(mono(sys_, x.symbol().coeff(0), 0)).trace();
  for (const auto& [ij, c] : x.corrections())
    if (ij.first == ij.second) t += rep_.represent(mono(sys_, c, 0)).trace();
  return t;
}

double ToeplitzModel::oracle_residual(const ToeplitzElement& x,
                                      const ToeplitzElement& y, int M) const {
  // Factors truncated on the padded window act like the infinite operators on
  // the first M cells, so the compressed product is exact.
  int W = bound_ + 1;
  Matrix xd = truncated(x, M + W);
  Matrix yd = truncated(y, M + W);
  Matrix prod = xd * yd;
  Matrix model = truncated(t_mul(x, y), M);
  int HM = rep_.dim() * M;
  double scale = std::max(1.0, model.cwiseAbs().maxCoeff());
  return (prod.topLeftCorner(HM, HM) - model).cwiseAbs().maxCoeff() / scale;
}

ToeplitzElement toeplitz_theta(const ToeplitzModel& m, const ToeplitzElement& x,
                               double tol) {
  // Domain: the span of (grade 1)* (grade 1).
  std::vector<Vector> cols;
  const auto& bas = m.basis();
  std::vector<int> grade_one;
  for (int k = 0; k < m.dim(); ++k)
    if (m.coord_grade(k) == 1) grade_one.push_back(k);
  for (int p : grade_one) {
    ToeplitzElement ep = t_adjoint(bas[p]);
    for (int q : grade_one) cols.push_back(m.coords(t_mul(ep, bas[q])));
  }
  Vector cx = m.coords(x);
  double scale = std::max(1.0, cx.norm());
  if (cols.empty()) {
    if (cx.norm() > tol * scale)
      throw Error("toeplitz_theta: element is outside the domain span");
    return ToeplitzElement(m.system());
  }
  Matrix span(m.dim(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) span.col(c) = cols[c];
  Eigen::JacobiSVD<Matrix> svd(span, Eigen::ComputeThinU);
  int rank = 0;
  for (int k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) > 1e-10 * svd.singularValues()(0)) ++rank;
  Matrix u = svd.matrixU().leftCols(rank);
  double outside = (cx - u * (u.adjoint() * cx)).norm();
  if (outside > tol * scale)
    throw Error("toeplitz_theta: element is outside the domain span");

  ToeplitzElement ut = ToeplitzElement::from_symbol(u_element(m.system()));
  return t_mul(t_mul(ut, x), t_adjoint(ut));
}

Element ToeplitzRealization::realize(const ToeplitzElement& x) const {
  return dec.abstract_of(model->coords(x));
}

ToeplitzElement ToeplitzRealization::unrealize(const Element& y) const {
  return model->from_coords(dec.to_coords * y.coords());
}

ToeplitzRealization realize_toeplitz(std::shared_ptr<const ToeplitzModel> model,
                                     const WedderburnOptions& opts) {
  const ToeplitzModel& m = *model;
  int D = m.dim();
  const auto& bas = m.basis();

  CoordStarAlgebra ca;
  ca.dim = D;
  ca.left_mul.assign(D, Matrix::Zero(D, D));
  ca.star.resize(D, D);
  ca.gram.resize(D, D);
  std::vector<ToeplitzElement> adj;
  adj.reserve(D);
  for (int i = 0; i < D; ++i) adj.push_back(t_adjoint(bas[i]));
  for (int i = 0; i < D; ++i) {
    ca.star.col(i) = m.coords(adj[i]);
    for (int j = 0; j < D; ++j) {
      ToeplitzElement p = t_mul(bas[i], bas[j]);
      ca.left_mul[i].col(j) = m.coords(p);
    }
  }
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i) ca.gram(j, i) = m.tau(t_mul(adj[j], bas[i]));
  ca.fingerprint.resize(D);
  for (int i = 0; i < D; ++i) ca.fingerprint(i) = 1.0 / (i + 2);

  CoordDecomposition dec = decompose(ca, opts);

  auto split = [&m](const Vector& v) {
    std::map<int, Vector> parts;
    for (int k = 0; k < v.size(); ++k) {
      if (v(k) == Complex(0.0, 0.0)) continue;
      parts.try_emplace(m.coord_grade(k), Vector::Zero(v.size()))
          .first->second(k) = v(k);
    }
    return std::vector<std::pair<int, Vector>>(parts.begin(), parts.end());
  };
  std::vector<std::vector<int>> weights = attach_weights(dec, split);
  CircleAction action(dec.algebra, std::move(weights));

  // The corrections form a two-sided ideal, so their image must fill whole
  // blocks of the decomposition.
  std::set<int> lblocks;
  for (int k = m.symbol_dim(); k < D; ++k) {
    Vector e = Vector::Zero(D);
    e(k) = 1.0;
    Element y = dec.abstract_of(e);
    for (int b : y.support(1e-7)) lblocks.insert(b);
  }
  Ideal lam(dec.algebra, std::vector<int>(lblocks.begin(), lblocks.end()));
  if (lam.dim() != m.lambda_dim())
    throw Error("the correction ideal does not realize onto whole blocks");

  return ToeplitzRealization{std::move(model), std::move(dec), std::move(action),
                             std::move(lam)};
}

Matrix toeplitz_rep(const AlgebraRep& pi, const Matrix& v,
                    const ToeplitzElement& x, double tol) {
  const System& sys = x.system();
  const PartialAutomorphism& theta = *sys;
  if (!(pi.domain() == theta.algebra()))
    throw Error("toeplitz_rep: representation domain does not match the system");
  int d = pi.carrier();
  if (v.rows() != d || v.cols() != d)
    throw Error("toeplitz_rep: isometry size does not match the carrier");

  for (int b : theta.source().blocks()) {
    int n = theta.algebra().block_size(b);
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) {
        Element e = Element::matrix_unit(theta.algebra(), b, r, s);
        Matrix pe = pi.apply(e);
        double inter = (v * pe - pi.apply(paut_apply(sys, e, 1)) * v)
                           .cwiseAbs()
                           .maxCoeff();
        if (inter > tol)
          throw Error("toeplitz_rep: v does not intertwine theta on the source ideal");
        double fix = (v.adjoint() * v * pe - pe).cwiseAbs().maxCoeff();
        if (fix > tol)
          throw Error(
              "toeplitz_rep: v*v does not act as the identity on the represented "
              "source ideal");
      }
  }

  // diag_n(e_{D_n}) = v^{n-1} pi(theta^{-(n-1)}(e)) v^{(n-1)*}
  //                 - v^n pi(theta^{-n}(e)) v^{n*}.
  auto diag = [&](int n) {
    Element e = domain_chain(sys, n).unit();
    Matrix lo = pisometry_pow(v, n - 1);
    Matrix hi = pisometry_pow(v, n);
    return Matrix(lo * pi.apply(paut_apply(sys, e, -(n - 1))) * lo.adjoint() -
                  hi * pi.apply(paut_apply(sys, e, -n)) * hi.adjoint());
  };

  Matrix out = Matrix::Zero(d, d);
  for (int n : x.symbol().support())
    out += pi.apply(x.symbol().coeff(n)) * pisometry_pow(v, n);
  for (const auto& [ij, c] : x.corrections()) {
    auto [i, j] = ij;
    out += pi.apply(c) * pisometry_pow(v, i - j) * diag(j);
  }
  return out;
}

}  // namespace covalg
