#include "covalg/l_algebra.hpp"

#include <algorithm>
#include <cmath>

namespace covalg {

LElement::LElement(System sys) : sys_(std::move(sys)) {
  if (!sys_) throw Error("LElement: null system");
}

LElement LElement::monomial(System sys, const Element& a, int n, double tol) {
  LElement out(std::move(sys));
  out.set_coeff(n, a, tol);
  return out;
}

Element LElement::coeff(int n) const {
  auto it = terms_.find(n);
  if (it != terms_.end()) return it->second;
  return Element::zero(sys_->algebra());
}

void LElement::set_coeff(int n, const Element& a, double tol) {
  if (!(a.algebra() == sys_->algebra()))
    throw Error("LElement: coefficient lives in a different algebra");
  Ideal dom = domain_chain(sys_, n);
  if (!dom.contains(a, tol))
    throw Error("LElement: coefficient at level " + std::to_string(n) +
                " is not in the domain ideal");
  if (a.max_abs() == 0.0)
    terms_.erase(n);
  else
    terms_[n] = dom.project(a);
}

std::vector<int> LElement::support() const {
  std::vector<int> out;
  for (const auto& [n, a] : terms_) out.push_back(n);
  return out;
}

bool LElement::is_zero(double tol) const {
  for (const auto& [n, a] : terms_)
    if (a.max_abs() > tol) return false;
  return true;
}

double LElement::hs_norm() const {
  double s = 0;
  for (const auto& [n, a] : terms_) {
    double f = a.hs_norm();
    s += f * f;
  }
  return std::sqrt(s);
}

double LElement::sup_norm() const {
  double s = 0;
  for (const auto& [n, a] : terms_) s = std::max(s, a.norm());
  return s;
}

double LElement::l1_norm() const {
  double s = 0;
  for (const auto& [n, a] : terms_) s += a.norm();
  return s;
}

LElement& LElement::prune(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.max_abs() <= tol)
      it = terms_.erase(it);
    else
      ++it;
  }
  return *this;
}

void LElement::require_same(const LElement& o) const {
  if (sys_ != o.sys_) throw Error("LElement: operands live over different systems");
}

LElement LElement::operator+(const LElement& o) const {
  require_same(o);
  LElement out = *this;
  for (const auto& [n, a] : o.terms_) {
    auto it = out.terms_.find(n);
    if (it == out.terms_.end())
      out.terms_[n] = a;
    else
      it->second = it->second + a;
  }
  return out.prune();
}

LElement LElement::operator-(const LElement& o) const { return *this + (-o); }

LElement LElement::operator-() const {
  LElement out(sys_);
  for (const auto& [n, a] : terms_) out.terms_[n] = -a;
  return out;
}

LElement LElement::operator*(const Complex& c) const {
  LElement out(sys_);
  if (c == Complex(0, 0)) return out;
  for (const auto& [n, a] : terms_) out.terms_[n] = a * c;
  return out;
}

LElement l_mul(const LElement& a, const LElement& b) {
  if (a.system() != b.system())
    throw Error("l_mul: operands live over different systems");
  const System& sys = a.system();
  LElement out(sys);
  std::map<int, Element> acc;
  for (const auto& [k, ak] : a.terms()) {
    Element pulled = paut_apply(sys, ak, -k);
    for (const auto& [m, bm] : b.terms()) {
      Element term = paut_apply(sys, pulled * bm, k);
      auto it = acc.find(k + m);
      if (it == acc.end())
        acc.emplace(k + m, term);
      else
        it->second = it->second + term;
    }
  }
  for (const auto& [n, v] : acc)
    if (v.max_abs() > 1e-14) out.set_coeff(n, v, 1e-7);
  return out;
}

LElement l_star(const LElement& a) {
  LElement out(a.system());
  for (const auto& [n, an] : a.terms()) {
    // contributes theta^{-n}(a(n)*) at level -n
    Element v = paut_apply(a.system(), an.adjoint(), -n);
    if (v.max_abs() > 1e-14) out.set_coeff(-n, v, 1e-7);
  }
  return out;
}

LElement cond_expect(const LElement& a) {
  LElement out(a.system());
  Element a0 = a.coeff(0);
  if (a0.max_abs() > 0) out.set_coeff(0, a0);
  return out;
}

LElement dual_act(const Complex& z, const LElement& a, double tol) {
  if (std::abs(std::abs(z) - 1.0) > tol)
    throw Error("dual_act: the scalar must lie on the unit circle");
  LElement out(a.system());
  for (const auto& [n, an] : a.terms())
    out.set_coeff(n, an * std::pow(z, n));
  return out;
}

Element spectral_component(const LElement& a, int n) { return a.coeff(n); }

LElement l_unit(System sys) {
  Element one = Element::identity(sys->algebra());
  return LElement::monomial(std::move(sys), one, 0);
}

LElement u_element(System sys) {
  Element e_i = sys->source().unit();
  Element u = paut_apply(sys, e_i, 1);
  return LElement::monomial(std::move(sys), u, 1);
}

LElement random_l(System sys, Rng& rng, int max_level) {
  LElement out(sys);
  for (int n = -max_level; n <= max_level; ++n) {
    Ideal dom = domain_chain(sys, n);
    if (dom.blocks().empty()) continue;
    out.set_coeff(n, rng.element_in(dom));
  }
  return out;
}

double l_axiom_residual(const LElement& a, const LElement& b, const LElement& c) {
  const double sa = std::max(1.0, a.hs_norm());
  const double sb = std::max(1.0, b.hs_norm());
  const double sc = std::max(1.0, c.hs_norm());
  double worst = 0.0;
  LElement ab = l_mul(a, b);
  LElement bc = l_mul(b, c);
  worst = std::max(worst,
                   (l_mul(ab, c) - l_mul(a, bc)).hs_norm() / (sa * sb * sc));
  worst = std::max(worst, (l_star(l_star(a)) - a).hs_norm() / sa);
  worst = std::max(worst,
                   (l_star(ab) - l_mul(l_star(b), l_star(a))).hs_norm() / (sa * sb));
  worst = std::max(
      worst, (l_mul(a + b, c) - (l_mul(a, c) + l_mul(b, c))).hs_norm() / ((sa + sb) * sc));
  LElement unit = l_unit(a.system());
  worst = std::max(worst, (l_mul(unit, a) - a).hs_norm() / sa);
  worst = std::max(worst, (l_mul(a, unit) - a).hs_norm() / sa);
  return worst;
}

}  // namespace covalg
