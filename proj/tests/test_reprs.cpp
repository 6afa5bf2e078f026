#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "covalg/covariant_rep.hpp"
#include "helpers.hpp"

using namespace covalg;
using covalg::testing::gallery_system;
using covalg::testing::shift_system;

TEST_CASE("regular representation carrier layout") {
  System sys = shift_system(2);
  RegularRep rep(sys);
  CHECK(rep.max_level() == 2);
  CHECK(rep.level_dim(-1) == 1);
  CHECK(rep.level_dim(0) == 2);
  CHECK(rep.level_dim(1) == 1);
  CHECK(rep.level_dim(2) == 0);
  CHECK(rep.dim() == 4);
  CHECK(rep.level_ideal(1).blocks() == std::vector<int>{0});
  Matrix p = rep.level_projection(0);
  CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(p.trace().real() - 2.0) < 1e-14);

  CHECK_THROWS_AS(RegularRep(sys, 1), Error);
  CHECK_THROWS_AS(RegularRep(gallery_system("flip-c2")), Error);
}

TEST_CASE("representing is a star homomorphism") {
  Rng rng(23);
  for (const char* name : {"shift-c3", "glue-m2", "zero-ideal"}) {
    System g = gallery_system(name);
    RegularRep rep(g);
    for (int t = 0; t < 10; ++t) {
      LElement a = random_l(g, rng, 2);
      LElement b = random_l(g, rng, 2);
      Matrix prod = rep.represent(l_mul(a, b)) - rep.represent(a) * rep.represent(b);
      CHECK(prod.cwiseAbs().maxCoeff() < 1e-10 * (1.0 + a.hs_norm() * b.hs_norm()));
      Matrix star = rep.represent(l_star(a)) - rep.represent(a).adjoint();
      CHECK(star.cwiseAbs().maxCoeff() < 1e-11 * (1.0 + a.hs_norm()));
    }
    CHECK(rep.min_singular_value() > 1e-8);
    CHECK(static_cast<int>(rep.spanning().size()) >= g->algebra().dim());
  }
}

TEST_CASE("realized covariance algebras of the gallery") {
  Realization r3 = realize_covariance(shift_system(3));
  CHECK(r3.target.block_sizes() == std::vector<int>{3});
  CHECK(r3.target.dim() == 9);

  Realization rz = realize_covariance(gallery_system("zero-ideal"));
  CHECK(rz.target.block_sizes() == std::vector<int>{1, 2});

  CHECK_THROWS_AS(realize_covariance(gallery_system("flip-c2")), Error);
}

TEST_CASE("the realized isometry is a shift unit") {
  System sys = shift_system(2);
  Realization real = realize_covariance(sys);
  Element v = real.realize(u_element(sys));
  Element p = real.realize(LElement::monomial(sys, sys->source().unit(), 0));
  Element q = real.realize(LElement::monomial(sys, sys->target().unit(), 0));
  CHECK((v.adjoint() * v - p).max_abs() < 1e-10);
  CHECK((v * v.adjoint() - q).max_abs() < 1e-10);
  // in M_2 this makes v a matrix unit joining two orthogonal rank one projections
  CHECK((p + q - Element::identity(real.target)).max_abs() < 1e-10);
  CHECK((v * v).max_abs() < 1e-10);
  CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("embedding and graded isometry") {
  Rng rng(29);
  for (const char* name : {"shift-c3", "glue-m2", "zero-ideal"}) {
    System g = gallery_system(name);
    Realization real = realize_covariance(g);
    int bound = *chain_bound(g);
    for (int t = 0; t < 10; ++t) {
      Element a = rng.element(g->algebra());
      CHECK(real.realize(LElement::monomial(g, a, 0)).norm() ==
            doctest::Approx(a.norm()).epsilon(1e-8));
      for (int n = 1; n < bound; ++n) {
        Ideal dn = domain_chain(g, n);
        if (dn.empty()) continue;
        Element an = rng.element_in(dn);
        CHECK(real.realize(LElement::monomial(g, an, n)).norm() ==
              doctest::Approx(an.norm()).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("realization round trip and dual action transport") {
  Rng rng(31);
  System g = gallery_system("glue-m2");
  Realization real = realize_covariance(g);
  CHECK(static_cast<int>(real.weights.size()) == real.target.num_blocks());
  for (int t = 0; t < 10; ++t) {
    LElement a = random_l(g, rng, 2);
    LElement b = random_l(g, rng, 2);
    Element x = real.realize(a);
    CHECK((real.realize(l_mul(a, b)) - x * real.realize(b)).max_abs() <
          1e-8 * (1.0 + x.norm()));
    CHECK((a - real.unrealize(x)).hs_norm() < 1e-8 * (1.0 + a.hs_norm()));
    Complex z = std::polar(1.0, 0.3 + 0.2 * t);
    CHECK((real.act(z, x) - real.realize(dual_act(z, a))).max_abs() <
          1e-9 * (1.0 + x.norm()));
  }
}

TEST_CASE("partial isometry powers") {
  Matrix s = Matrix::Zero(3, 3);
  s(1, 0) = 1.0;
  s(2, 1) = 1.0;
  CHECK((pisometry_pow(s, 0) - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((pisometry_pow(s, -1) - s.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  Matrix s2 = pisometry_pow(s, 2);
  CHECK(s2(2, 0) == Complex(1.0, 0.0));
  CHECK(s2.cwiseAbs().sum() == doctest::Approx(1.0));
}

TEST_CASE("covariant pairs from the regular representation") {
  for (const char* name : {"shift-c2", "glue-m2", "zero-ideal"}) {
    System g = gallery_system(name);
    Realization real = realize_covariance(g);
    AlgebraRep sigma = AlgebraRep::identity(real.target);
    CovariantRep pair = extract_covrep(real, sigma);
    CovrepReport rep = covrep_validate(pair);
    CHECK(rep.ok);
    CHECK(rep.worst() < 1e-10);

    Rng rng(41);
    for (int t = 0; t < 8; ++t) {
      LElement a = random_l(g, rng, 2);
      Matrix lhs = pi_cross_u(pair, a);
      Matrix rhs = sigma.apply(real.realize(a));
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + rhs.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("covariant pairs from scrambled representations") {
  Rng rng(43);
  System g = shift_system(3);
  Realization real = realize_covariance(g);
  for (int t = 0; t < 10; ++t) {
    AlgebraRep sigma = random_rep(real.target, rng);
    CovariantRep pair = extract_covrep(real, sigma);
    CHECK(covrep_validate(pair).ok);
    for (const LElement& y : real.basis) {
      Matrix lhs = pi_cross_u(pair, y);
      Matrix rhs = sigma.apply(real.realize(y));
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("covariance violations are flagged") {
  System g = shift_system(2);
  AlgebraRep pi = AlgebraRep::identity(g->algebra());
  CovariantRep bad{g, pi, Matrix::Identity(2, 2)};
  CovrepReport rep = covrep_validate(bad);
  CHECK_FALSE(rep.ok);
  CHECK(rep.worst() > 1e-3);
}

TEST_CASE("key exchange identities of the integrated form") {
  Rng rng(47);
  System g = shift_system(3);
  Realization real = realize_covariance(g);
  CovariantRep pair = extract_covrep(real, AlgebraRep::identity(real.target));
  for (int n = 1; n < 3; ++n) {
    Ideal dn = domain_chain(g, n);
    if (dn.empty()) continue;
    for (int t = 0; t < 5; ++t) {
      Element an = rng.element_in(dn);
      Matrix un = pisometry_pow(pair.u, n);
      Matrix lhs = un * pair.pi.apply(paut_apply(g, an, -n));
      Matrix rhs = pair.pi.apply(an) * un;
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10 * (1.0 + an.max_abs()));
      for (int m : {-2, -1, 1}) {
        Matrix a = rhs * pisometry_pow(pair.u, m);
        Matrix b = pair.pi.apply(an) * pisometry_pow(pair.u, n + m);
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10 * (1.0 + an.max_abs()));
      }
    }
  }
}

TEST_CASE("trivial dynamics extract a zero isometry") {
  System g = gallery_system("zero-ideal");
  Realization real = realize_covariance(g);
  CovariantRep pair = extract_covrep(real, AlgebraRep::identity(real.target));
  CHECK(pair.u.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(covrep_validate(pair).ok);
}
