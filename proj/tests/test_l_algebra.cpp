#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "covalg/l_algebra.hpp"
#include "helpers.hpp"

using namespace covalg;
using covalg::testing::gallery_system;
using covalg::testing::shift_system;

namespace {

Element pair2(System sys, double x, double y) {
  Element e(sys->algebra());
  e.block(0)(0, 0) = x;
  e.block(1)(0, 0) = y;
  return e;
}

double min_block_eig(const Element& x) {
  double lo = 0.0;
  for (int b = 0; b < x.algebra().num_blocks(); ++b) {
    const Matrix& m = x.block(b);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

}  // namespace

TEST_CASE("monomials respect the domain chain") {
  System sys = shift_system(2);
  CHECK_NOTHROW(LElement::monomial(sys, pair2(sys, 0.0, 5.0), 1));
  CHECK_THROWS_AS(LElement::monomial(sys, pair2(sys, 5.0, 0.0), 1), Error);
  CHECK_THROWS_AS(LElement::monomial(sys, pair2(sys, 0.0, 5.0), -1), Error);
  CHECK_THROWS_AS(LElement::monomial(sys, pair2(sys, 1.0, 1.0), 2), Error);
  LElement a = LElement::monomial(sys, pair2(sys, 1.0, 2.0), 0);
  CHECK(a.support() == std::vector<int>{0});
  CHECK((a.coeff(0) - pair2(sys, 1.0, 2.0)).is_zero());
  CHECK(a.coeff(5).is_zero());
}

TEST_CASE("convolution on the two point shift") {
  System sys = shift_system(2);
  LElement up = LElement::monomial(sys, pair2(sys, 0.0, 5.0), 1);
  LElement down = LElement::monomial(sys, pair2(sys, 3.0, 0.0), -1);

  LElement p = l_mul(up, down);
  CHECK(p.support() == std::vector<int>{0});
  CHECK((p.coeff(0) - pair2(sys, 0.0, 15.0)).is_zero());

  LElement q = l_mul(down, up);
  CHECK(q.support() == std::vector<int>{0});
  CHECK((q.coeff(0) - pair2(sys, 15.0, 0.0)).is_zero());

  // graded monomials multiply through theta
  Rng rng(2);
  System glue = gallery_system("glue-m2");
  for (int n = -1; n <= 1; ++n) {
    for (int m = -1; m <= 1; ++m) {
      Ideal dn = domain_chain(glue, n);
      Ideal dm = domain_chain(glue, m);
      if (dn.empty() || dm.empty()) continue;
      Element a = rng.element_in(dn);
      Element b = rng.element_in(dm);
      LElement lhs = l_mul(LElement::monomial(glue, a, n), LElement::monomial(glue, b, m));
      Element rhs = paut_apply(glue, paut_apply(glue, a, -n) * b, n);
      CHECK((lhs.coeff(n + m) - rhs).max_abs() < 1e-10 * (1.0 + rhs.max_abs()));
      if (!rhs.is_zero(1e-13)) CHECK(lhs.support() == std::vector<int>{n + m});
    }
  }
}

TEST_CASE("involution") {
  System sys = shift_system(2);
  LElement up = LElement::monomial(sys, pair2(sys, 0.0, 5.0), 1);
  LElement s = l_star(up);
  CHECK(s.support() == std::vector<int>{-1});
  CHECK((s.coeff(-1) - pair2(sys, 5.0, 0.0)).is_zero());

  Rng rng(4);
  for (const char* name : {"shift-c3", "glue-m2", "flip-c2"}) {
    System g = gallery_system(name);
    for (int t = 0; t < 10; ++t) {
      LElement a = random_l(g, rng, 2);
      LElement b = random_l(g, rng, 2);
      CHECK((l_star(l_star(a)) - a).hs_norm() < 1e-10 * (1.0 + a.hs_norm()));
      LElement lhs = l_star(l_mul(a, b));
      LElement rhs = l_mul(l_star(b), l_star(a));
      CHECK((lhs - rhs).hs_norm() < 1e-9 * (1.0 + rhs.hs_norm()));
      CHECK(l_star(a).l1_norm() == doctest::Approx(a.l1_norm()).epsilon(1e-10));
    }
  }
}

TEST_CASE("axioms hold on random triples") {
  Rng rng(7);
  for (const std::string& name : gallery_names()) {
    System g = gallery_system(name);
    for (int t = 0; t < 12; ++t) {
      LElement a = random_l(g, rng, 3);
      LElement b = random_l(g, rng, 3);
      LElement c = random_l(g, rng, 3);
      CHECK(l_axiom_residual(a, b, c) < 1e-9);
      // l1 submultiplicativity
      CHECK(l_mul(a, b).l1_norm() <= a.l1_norm() * b.l1_norm() * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("the unit is a two sided identity") {
  Rng rng(9);
  for (const char* name : {"shift-c4", "glue-m2", "zero-ideal"}) {
    System g = gallery_system(name);
    LElement one = l_unit(g);
    LElement a = random_l(g, rng, 2);
    CHECK((l_mul(one, a) - a).hs_norm() < 1e-12 * (1.0 + a.hs_norm()));
    CHECK((l_mul(a, one) - a).hs_norm() < 1e-12 * (1.0 + a.hs_norm()));
  }
}

TEST_CASE("conditional expectation") {
  Rng rng(13);
  System g = gallery_system("glue-m2");
  for (int t = 0; t < 25; ++t) {
    LElement a = random_l(g, rng, 2);
    // E(a a*)(0) is the sum of the coefficient squares
    Element direct(g->algebra());
    for (int n : a.support()) direct = direct + a.coeff(n) * a.coeff(n).adjoint();
    CHECK((cond_expect(l_mul(a, l_star(a))).coeff(0) - direct).max_abs() <
          1e-10 * (1.0 + direct.max_abs()));
    // positivity
    CHECK(min_block_eig(cond_expect(l_mul(l_star(a), a)).coeff(0)) >= -1e-9);
    // E is an idempotent star map that is contractive for the sup norm
    LElement e = cond_expect(a);
    CHECK((cond_expect(e) - e).is_zero(1e-14));
    CHECK((cond_expect(l_star(a)) - l_star(e)).is_zero(1e-14));
    CHECK(e.sup_norm() <= a.sup_norm() + 1e-12);
    // module property over the zero level
    LElement x = LElement::monomial(g, rng.element(g->algebra()), 0);
    LElement y = LElement::monomial(g, rng.element(g->algebra()), 0);
    LElement lhs = cond_expect(l_mul(l_mul(x, a), y));
    LElement rhs = l_mul(l_mul(x, e), y);
    CHECK((lhs - rhs).hs_norm() < 1e-9 * (1.0 + rhs.hs_norm()));
  }
  LElement off = LElement::monomial(g, domain_chain(g, 1).unit(), 1);
  CHECK(cond_expect(off).is_zero());
}

TEST_CASE("dual action") {
  Rng rng(17);
  System g = gallery_system("shift-c3");
  Complex z = std::polar(1.0, 1.234);
  LElement a = random_l(g, rng, 2);
  LElement b = random_l(g, rng, 2);
  CHECK((dual_act(Complex(1.0, 0.0), a) - a).is_zero(1e-15));
  CHECK_THROWS_AS(dual_act(Complex(2.0, 0.0), a), Error);

  LElement za = dual_act(z, a);
  for (int n : a.support())
    CHECK((za.coeff(n) - a.coeff(n) * std::pow(z, n)).max_abs() < 1e-12);
  CHECK((dual_act(z, l_mul(a, b)) - l_mul(za, dual_act(z, b))).hs_norm() <
        1e-9 * (1.0 + a.hs_norm() * b.hs_norm()));
  CHECK((dual_act(z, l_star(a)) - l_star(za)).hs_norm() < 1e-10 * (1.0 + a.hs_norm()));

  // spectral components select levels and sum back to the element
  LElement sum(g);
  for (int n = -3; n <= 3; ++n) {
    Element cn = spectral_component(a, n);
    CHECK((cn - a.coeff(n)).is_zero(1e-15));
    if (!cn.is_zero()) sum = sum + LElement::monomial(g, cn, n);
  }
  CHECK((sum - a).is_zero(1e-13));
  CHECK((spectral_component(a, 0) - cond_expect(a).coeff(0)).is_zero(1e-15));
}

TEST_CASE("the distinguished partial isometry") {
  Rng rng(19);
  for (const char* name : {"shift-c3", "glue-m2", "flip-c2"}) {
    System g = gallery_system(name);
    LElement u = u_element(g);
    LElement ei = LElement::monomial(g, g->source().unit(), 0);
    LElement ej = LElement::monomial(g, g->target().unit(), 0);
    CHECK((l_mul(l_star(u), u) - ei).is_zero(1e-12));
    CHECK((l_mul(u, l_star(u)) - ej).is_zero(1e-12));
    for (int t = 0; t < 10; ++t) {
      Element x = rng.element_in(g->source());
      LElement lx = LElement::monomial(g, x, 0);
      LElement conj = l_mul(l_mul(u, lx), l_star(u));
      CHECK((conj.coeff(0) - paut_apply(g, x, 1)).max_abs() < 1e-10 * (1.0 + x.max_abs()));
      CHECK((l_mul(lx, l_mul(l_star(u), u)) - lx).is_zero(1e-12));
      Element y = rng.element_in(g->target());
      LElement ly = LElement::monomial(g, y, 0);
      CHECK((l_mul(ly, l_mul(u, l_star(u))) - ly).is_zero(1e-12));
    }
  }
  CHECK(u_element(gallery_system("zero-ideal")).is_zero());
}
