#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "covalg/structure_theorem.hpp"
#include "covalg/toeplitz.hpp"
#include "helpers.hpp"

using namespace covalg;
using covalg::testing::gallery_system;
using covalg::testing::shift_system;

namespace {

ToeplitzElement random_t(const ToeplitzModel& m, Rng& rng) {
  Vector v(m.dim());
  for (int i = 0; i < m.dim(); ++i) v(i) = rng.cgauss();
  return m.from_coords(v);
}

}  // namespace

TEST_CASE("correction coefficient ideals") {
  System sys = shift_system(3);
  CHECK(correction_ideal(sys, 1, 1).blocks() == std::vector<int>{1, 2});
  CHECK(correction_ideal(sys, 1, 2).blocks() == std::vector<int>{1});
  CHECK(correction_ideal(sys, 2, 1).blocks() == std::vector<int>{2});
  CHECK(correction_ideal(sys, 2, 2).blocks() == std::vector<int>{2});
  CHECK(correction_ideal(sys, 3, 3).empty());
  CHECK(correction_ideal(sys, 1, 7).empty());
  CHECK_THROWS_AS(correction_ideal(sys, 0, 1), Error);
}

TEST_CASE("normal form enforces coefficient membership") {
  System sys = shift_system(2);
  ToeplitzElement x(sys);
  Element ej(sys->algebra());
  ej.block(1)(0, 0) = 1.0;
  CHECK_NOTHROW(x.set_correction(1, 1, ej));
  Element ei(sys->algebra());
  ei.block(0)(0, 0) = 1.0;
  CHECK_THROWS_AS(x.set_correction(1, 1, ei), Error);
  CHECK_THROWS_AS(x.set_symbol_coeff(1, ei), Error);
  CHECK((x.correction(1, 1) - ej).is_zero());
  CHECK(x.correction(2, 1).is_zero());
}

TEST_CASE("shift unit times its adjoint spills one matrix unit") {
  System sys = shift_system(2);
  ToeplitzElement v = ToeplitzElement::from_symbol(u_element(sys));
  ToeplitzElement p = t_mul(v, t_adjoint(v));
  Element ej = sys->target().unit();
  CHECK((p.symbol().coeff(0) - ej).is_zero(1e-14));
  CHECK(p.symbol().support() == std::vector<int>{0});
  CHECK((p.correction(1, 1) + ej).is_zero(1e-14));
  CHECK(p.corrections().size() == 1);

  // v* v has no correction: S* S = 1 exactly
  ToeplitzElement q = t_mul(t_adjoint(v), v);
  CHECK(q.corrections().empty());
  CHECK((q.symbol().coeff(0) - sys->source().unit()).is_zero(1e-14));
}

TEST_CASE("graded products cancel down to a single correction cell") {
  System sys = shift_system(4);
  Rng rng(3);
  LElement s1 = LElement::monomial(sys, rng.element_in(domain_chain(sys, 1)), 1);
  LElement s2 = LElement::monomial(sys, rng.element_in(domain_chain(sys, 2)), 2);
  auto T = [](const LElement& s) { return ToeplitzElement::from_symbol(s); };

  ToeplitzElement lhs = t_mul(T(s1), t_adjoint(T(l_mul(s2, l_star(s1))))) -
                        t_mul(T(l_mul(s1, s1)), t_adjoint(T(s2)));
  Element expect = l_mul(l_mul(s1, s1), l_star(s2)).coeff(0);
  CHECK(lhs.symbol().is_zero(1e-12));
  CHECK((lhs.correction(2, 2) - expect).max_abs() < 1e-12 * (1.0 + expect.max_abs()));
  for (const auto& [ij, c] : lhs.corrections())
    if (ij != std::pair<int, int>{2, 2}) CHECK(c.max_abs() < 1e-12);
}

TEST_CASE("adjoint in normal form") {
  System sys = shift_system(3);
  ToeplitzModel model(sys);
  Rng rng(5);
  for (int t = 0; t < 15; ++t) {
    ToeplitzElement x = random_t(model, rng);
    ToeplitzElement y = random_t(model, rng);
    CHECK((t_adjoint(t_adjoint(x)) - x).hs_norm() < 1e-12 * (1.0 + x.hs_norm()));
    ToeplitzElement lhs = t_adjoint(t_mul(x, y));
    ToeplitzElement rhs = t_mul(t_adjoint(y), t_adjoint(x));
    CHECK((lhs - rhs).hs_norm() < 1e-10 * (1.0 + rhs.hs_norm()));
  }
  // the (i, j) coefficient moves to (j, i) through theta
  ToeplitzElement x(sys);
  Element c = rng.element_in(correction_ideal(sys, 2, 1));
  x.set_correction(2, 1, c);
  ToeplitzElement s = t_adjoint(x);
  CHECK((s.correction(1, 2) - paut_apply(sys, c.adjoint(), -1)).max_abs() < 1e-12);
}

TEST_CASE("corrections form a two sided ideal") {
  System sys = shift_system(3);
  ToeplitzModel model(sys);
  Rng rng(7);
  for (int t = 0; t < 15; ++t) {
    ToeplitzElement k = random_t(model, rng);
    k = k - ToeplitzElement::from_symbol(k.symbol());
    CHECK(lambda_membership(k));
    ToeplitzElement g = random_t(model, rng);
    CHECK_FALSE(lambda_membership(g));
    CHECK(lambda_membership(t_mul(k, g), 1e-10));
    CHECK(lambda_membership(t_mul(g, k), 1e-10));
  }
}

TEST_CASE("gauge grading") {
  System sys = gallery_system("glue-m2");
  ToeplitzModel model(sys);
  Rng rng(9);
  ToeplitzElement x = random_t(model, rng);
  ToeplitzElement y = random_t(model, rng);

  ToeplitzElement sum(sys);
  for (int n = -model.bound() - 1; n <= model.bound() + 1; ++n)
    sum = sum + gamma_component(x, n);
  CHECK((sum - x).hs_norm() < 1e-13);
  CHECK(gamma_component(x, model.bound() + 5).is_zero());

  ToeplitzElement prod = t_mul(x, y);
  for (int n = -2; n <= 2; ++n) {
    ToeplitzElement expect(sys);
    for (int p = -2; p <= 2; ++p)
      expect = expect + t_mul(gamma_component(x, p), gamma_component(y, n - p));
    CHECK((gamma_component(prod, n) - expect).hs_norm() <
          1e-10 * (1.0 + expect.hs_norm()));
  }
}

TEST_CASE("extension dimensions of the two point shift") {
  ToeplitzModel model(shift_system(2));
  CHECK(model.dim() == 5);
  CHECK(model.symbol_dim() == 4);
  CHECK(model.lambda_dim() == 1);
  CHECK(static_cast<int>(model.basis().size()) == 5);
  int grade0 = 0, grade1 = 0, gradem1 = 0;
  for (int k = 0; k < model.dim(); ++k) {
    if (model.coord_grade(k) == 0) ++grade0;
    if (model.coord_grade(k) == 1) ++grade1;
    if (model.coord_grade(k) == -1) ++gradem1;
  }
  CHECK(grade0 == 3);
  CHECK(grade1 == 1);
  CHECK(gradem1 == 1);

  CHECK(ToeplitzModel(shift_system(3)).dim() == 14);
  CHECK(ToeplitzModel(shift_system(4)).dim() == 30);
  CHECK_THROWS_AS(ToeplitzModel(gallery_system("flip-c2")), Error);
}

TEST_CASE("coordinates round trip") {
  ToeplitzModel model(shift_system(3));
  Rng rng(11);
  ToeplitzElement x = random_t(model, rng);
  CHECK((model.from_coords(model.coords(x)) - x).hs_norm() < 1e-13);
  Vector v = model.coords(x);
  CHECK((model.coords(model.from_coords(v)) - v).norm() < 1e-13);
}

TEST_CASE("the trace functional is positive and faithful") {
  ToeplitzModel model(shift_system(3));
  Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    ToeplitzElement x = random_t(model, rng);
    Complex val = model.tau(t_mul(t_adjoint(x), x));
    CHECK(std::abs(val.imag()) < 1e-10 * (1.0 + std::abs(val)));
    CHECK(val.real() > 1e-10);
    CHECK(std::abs(model.tau(t_adjoint(x)) - std::conj(model.tau(x))) < 1e-10);
  }
  CHECK(std::abs(model.tau(ToeplitzElement(model.system()))) == 0.0);
}

TEST_CASE("products match truncated operator matrices") {
  Rng rng(17);
  for (const char* name : {"shift-c3", "glue-m2", "toeplitz-on-c2"}) {
    System sys = gallery_system(name);
    ToeplitzModel model(sys);
    int M = model.bound() + 3;
    for (int t = 0; t < 12; ++t) {
      ToeplitzElement x = random_t(model, rng);
      ToeplitzElement y = random_t(model, rng);
      CHECK(model.oracle_residual(x, y, M) < 1e-10);
    }
  }
}

TEST_CASE("quotient onto the covariance algebra") {
  System sys = shift_system(2);
  ToeplitzModel model(sys);
  Rng rng(19);
  for (int t = 0; t < 15; ++t) {
    ToeplitzElement x = random_t(model, rng);
    ToeplitzElement y = random_t(model, rng);
    LElement lhs = quotient_phi(t_mul(x, y));
    LElement rhs = l_mul(quotient_phi(x), quotient_phi(y));
    CHECK((lhs - rhs).hs_norm() < 1e-10 * (1.0 + rhs.hs_norm()));
    CHECK((quotient_phi(t_adjoint(x)) - l_star(quotient_phi(x))).hs_norm() < 1e-12);
  }
  // phi restores symbols and kills exactly the corrections
  LElement s = random_l(sys, rng, 2);
  CHECK((quotient_phi(ToeplitzElement::from_symbol(s)) - s).hs_norm() < 1e-13);
  ToeplitzElement k(sys);
  k.set_correction(1, 1, sys->target().unit());
  CHECK(quotient_phi(k).is_zero());
  // dimension split: dim E = dim Lambda + dim B
  Realization real = realize_covariance(sys);
  CHECK(model.dim() == model.lambda_dim() + real.target.dim());
}

TEST_CASE("conjugation by the shifted unit") {
  System sys = shift_system(2);
  ToeplitzModel model(sys);
  ToeplitzElement v = ToeplitzElement::from_symbol(u_element(sys));
  ToeplitzElement vsv = t_mul(t_adjoint(v), v);
  ToeplitzElement img = toeplitz_theta(model, vsv);
  CHECK((img - t_mul(v, t_adjoint(v))).hs_norm() < 1e-10);
  // grade is preserved
  Rng rng(23);
  ToeplitzElement x = random_t(model, rng);
  ToeplitzElement dom = t_mul(t_mul(vsv, x), vsv);
  dom = gamma_component(dom, 0);
  ToeplitzElement out = toeplitz_theta(model, dom);
  CHECK((gamma_component(out, 0) - out).hs_norm() < 1e-10);
  CHECK((out - t_mul(t_mul(v, dom), t_adjoint(v))).hs_norm() < 1e-9);
  // elements outside the domain ideal are rejected
  CHECK_THROWS_AS(toeplitz_theta(model, ToeplitzElement::from_symbol(l_unit(sys))), Error);
}

TEST_CASE("realized extension of the two point shift") {
  auto model = std::make_shared<const ToeplitzModel>(shift_system(2));
  ToeplitzRealization treal = realize_toeplitz(model);
  CHECK(treal.dec.algebra.block_sizes() == std::vector<int>{1, 2});
  CHECK(treal.lambda.dim() == model->lambda_dim());
  CHECK(treal.dec.residual < 1e-9);

  Rng rng(29);
  for (int t = 0; t < 10; ++t) {
    ToeplitzElement x = random_t(*model, rng);
    ToeplitzElement y = random_t(*model, rng);
    Element rx = treal.realize(x);
    CHECK((treal.realize(t_mul(x, y)) - rx * treal.realize(y)).max_abs() <
          1e-8 * (1.0 + rx.norm()));
    CHECK((treal.realize(t_adjoint(x)) - rx.adjoint()).max_abs() < 1e-8);
    CHECK((treal.unrealize(rx) - x).hs_norm() < 1e-8 * (1.0 + x.hs_norm()));
  }

  // the gauge grading realizes the extension as its own covariance algebra
  StructureReport r = verify_structure_theorem(treal.action);
  CHECK(r.ok);
  REQUIRE(r.realization);
  CHECK(r.realization->target.block_sizes() == treal.dec.algebra.block_sizes());
}

TEST_CASE("the extension is generated by grades zero and one") {
  auto model = std::make_shared<const ToeplitzModel>(shift_system(3));
  ToeplitzRealization treal = realize_toeplitz(model);
  std::vector<Element> gens;
  for (const ToeplitzElement& b : model->basis()) {
    ToeplitzElement g0 = gamma_component(b, 0);
    ToeplitzElement g1 = gamma_component(b, 1);
    if (!g0.is_zero(1e-13)) gens.push_back(treal.realize(g0));
    if (!g1.is_zero(1e-13)) {
      gens.push_back(treal.realize(g1));
      gens.push_back(treal.realize(g1).adjoint());
    }
  }
  std::vector<Element> span = orthonormal_span(gens);
  std::size_t before = 0;
  while (span.size() != before) {
    before = span.size();
    std::vector<Element> next = product_span(span, span);
    for (const Element& g : gens) next.push_back(g);
    span = orthonormal_span(next);
  }
  CHECK(static_cast<int>(span.size()) == model->dim());
}

TEST_CASE("representations that keep the corrections alive") {
  System sys = shift_system(2);
  ToeplitzModel model(sys);
  FdAlgebra a = sys->algebra();

  // pi doubles the target block; V half-shifts onto both copies, so VV* is a
  // proper subprojection of pi(e_J) and the quotient relations fail on purpose
  Matrix images(9, 2);
  Matrix m0 = Matrix::Zero(3, 3);
  m0(0, 0) = 1.0;
  Matrix m1 = Matrix::Zero(3, 3);
  m1(1, 1) = 1.0;
  m1(2, 2) = 1.0;
  images.col(0) = Eigen::Map<Vector>(m0.data(), 9);
  images.col(1) = Eigen::Map<Vector>(m1.data(), 9);
  AlgebraRep pi(a, 3, images);

  Matrix v = Matrix::Zero(3, 3);
  v(1, 0) = 1.0 / std::sqrt(2.0);
  v(2, 0) = 1.0 / std::sqrt(2.0);

  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    ToeplitzElement x = random_t(model, rng);
    ToeplitzElement y = random_t(model, rng);
    Matrix rx = toeplitz_rep(pi, v, x);
    Matrix ry = toeplitz_rep(pi, v, y);
    CHECK((toeplitz_rep(pi, v, t_mul(x, y)) - rx * ry).cwiseAbs().maxCoeff() <
          1e-9 * (1.0 + rx.cwiseAbs().maxCoeff() * ry.cwiseAbs().maxCoeff()));
    CHECK((toeplitz_rep(pi, v, t_adjoint(x)) - rx.adjoint()).cwiseAbs().maxCoeff() <
          1e-10 * (1.0 + rx.cwiseAbs().maxCoeff()));
  }

  // a pure correction survives: this representation does not factor through B
  ToeplitzElement k(sys);
  k.set_correction(1, 1, sys->target().unit());
  CHECK(toeplitz_rep(pi, v, k).cwiseAbs().maxCoeff() > 0.4);

  // the defining conditions are validated
  CHECK_THROWS_AS(toeplitz_rep(pi, Matrix::Identity(3, 3), k), Error);
}
