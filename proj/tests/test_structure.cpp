#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "covalg/structure_theorem.hpp"
#include "helpers.hpp"

using namespace covalg;
using covalg::testing::gallery_action;
using covalg::testing::gallery_system;
using covalg::testing::shift_system;

namespace {

CircleAction m2_action() { return gallery_action("m2-weights"); }

Element e21(const FdAlgebra& a) { return Element::matrix_unit(a, 0, 1, 0); }

Element random_in_span(const std::vector<Element>& basis, Rng& rng) {
  Element x(basis.empty() ? FdAlgebra({1}) : basis.front().algebra());
  for (const Element& b : basis) x = x + rng.cgauss() * b;
  return x;
}

bool has_check(const StructureReport& r, const std::string& name, bool pass) {
  for (const auto& c : r.checks)
    if (c.name == name) return c.pass == pass;
  return false;
}

}  // namespace

TEST_CASE("grades and spectral subspaces") {
  CircleAction act = m2_action();
  CHECK(act.grade(0, 1, 0) == 1);
  CHECK(act.max_spread() == 1);

  GradedSubspace b0 = spectral_subspace(act, 0);
  GradedSubspace b1 = spectral_subspace(act, 1);
  CHECK(b0.dim() == 2);
  CHECK(b1.dim() == 1);
  CHECK(spectral_subspace(act, 2).dim() == 0);
  CHECK((b1.basis[0] - e21(act.algebra()) * b1.basis[0].block(0)(1, 0)).max_abs() < 1e-14);

  // act scales pure grades and project_grade inverts the grading
  Complex z = std::polar(1.0, 0.7);
  Element x = e21(act.algebra());
  CHECK((act.act(z, x) - z * x).max_abs() < 1e-14);
  CHECK((act.project_grade(x, 1) - x).is_zero());
  CHECK(act.project_grade(x, 0).is_zero());

  Rng rng(3);
  Element y = rng.element(act.algebra());
  Element sum(act.algebra());
  for (int n = -1; n <= 1; ++n) sum = sum + act.project_grade(y, n);
  CHECK((sum - y).is_zero(1e-14));
}

TEST_CASE("semi-saturation certificates") {
  CHECK(is_semisaturated(m2_action()).semisaturated);

  CircleAction gap(FdAlgebra({2}), {{0, 2}});
  SaturationCertificate cert = is_semisaturated(gap);
  CHECK_FALSE(cert.semisaturated);
  CHECK(cert.first_failure == 2);
  // B_1 = 0 while B_2 = span{e_21}
  CHECK(cert.graded_dims[0] == 0);
  CHECK(cert.graded_dims[1] == 1);
  CHECK(cert.power_dims[1] == 0);

  CircleAction flat(FdAlgebra({2, 1}), {{0, 0}, {0}});
  CHECK(is_semisaturated(flat).semisaturated);

  CHECK(is_semisaturated(gallery_action("dual-shift-c3")).semisaturated);
}

TEST_CASE("span utilities") {
  FdAlgebra a({2});
  std::vector<Element> v = {e21(a), e21(a) * Complex(2.0, 1.0)};
  CHECK(orthonormal_span(v).size() == 1);
  std::vector<Element> prod = product_span({e21(a)}, {e21(a).adjoint()});
  REQUIRE(prod.size() == 1);
  // e_21 e_12 spans e_22
  CHECK((span_unit(prod) - Element::matrix_unit(a, 0, 1, 1)).max_abs() < 1e-10);
  CHECK_THROWS_AS(span_unit({}), Error);
  CHECK_THROWS_AS(span_unit({e21(a)}), Error);
}

TEST_CASE("witness for the rank one grading on M_2") {
  WitnessSearch ws = regularity_witness(m2_action());
  REQUIRE(ws.found);
  const Element& v = ws.witness->v;
  FdAlgebra a = m2_action().algebra();
  // v = e_21 up to phase
  CHECK(std::abs(std::abs(v.block(0)(1, 0)) - 1.0) < 1e-10);
  CHECK((v - e21(a) * v.block(0)(1, 0)).max_abs() < 1e-10);
  CHECK((v.adjoint() * v - Element::matrix_unit(a, 0, 0, 0)).max_abs() < 1e-10);
  CHECK((v * v.adjoint() - Element::matrix_unit(a, 0, 1, 1)).max_abs() < 1e-10);

  // a trivial grading admits the zero witness
  CircleAction flat(FdAlgebra({1}), {{0}});
  WitnessSearch zero = regularity_witness(flat);
  REQUIRE(zero.found);
  CHECK(zero.witness->v.max_abs() < 1e-15);
}

TEST_CASE("witness obstructions are reported") {
  // weights (0,1,1) on M_3: B_1 is the 2 x 1 corner, ranks cannot match
  CircleAction act(FdAlgebra({3}), {{0, 1, 1}});
  WitnessSearch ws = regularity_witness(act);
  CHECK_FALSE(ws.found);
  CHECK(ws.provable_obstruction);
  CHECK_FALSE(ws.detail.empty());
}

TEST_CASE("transfer maps of the witness") {
  CircleAction act = m2_action();
  FdAlgebra a = act.algebra();
  RegularityWitness w = *regularity_witness(act).witness;
  Complex phase = w.v.block(0)(1, 0);

  // the stored identities on the M_2 example
  CHECK((rho_dagger(w, e21(a)) - Element::matrix_unit(a, 0, 1, 1) * std::conj(phase))
            .max_abs() < 1e-10);
  CHECK((i_map(w, 1, e21(a)) - rho_dagger(w, e21(a))).max_abs() < 1e-12);
  // grade zero: the identity map
  Element d0 = Element::matrix_unit(a, 0, 1, 1);
  CHECK((i_map(w, 0, d0) - d0).max_abs() == 0.0);
  CHECK_THROWS_AS(i_map(w, 0, e21(a)), Error);

  Rng rng(7);
  GradedSubspace b1 = spectral_subspace(act, 1);
  for (int t = 0; t < 10; ++t) {
    Element x = random_in_span(b1.basis, rng);
    Element y = random_in_span(b1.basis, rng);
    // lambda(x*)* lambda(y*) reproduces x y*
    Element lx = lambda_map(w, x.adjoint());
    Element ly = lambda_map(w, y.adjoint());
    CHECK((lx.adjoint() * ly - x * y.adjoint()).max_abs() < 1e-10);
    // the daggers invert the transfers
    Element t1 = x.adjoint() * rng.element(a);
    CHECK((lambda_dagger(w, lambda_map(w, t1)) - t1).max_abs() < 1e-10);
    Element t2 = rng.element(a) * x.adjoint();
    CHECK((rho_dagger(w, rho_map(w, t2)) - t2).max_abs() < 1e-10);
    // rho(s) t = s lambda(t)
    Element s = rng.element(a) * x.adjoint();
    Element t3 = y.adjoint() * rng.element(a);
    CHECK((rho_map(w, s) * t3 - s * lambda_map(w, t3)).max_abs() < 1e-10);
  }
}

TEST_CASE("graded isometries into the fixed algebra") {
  CircleAction act = gallery_action("dual-shift-c3");
  RegularityWitness w = *regularity_witness(act).witness;
  InducedSystem ind = build_theta_lambda(w);
  Rng rng(11);
  for (int n = 1; n <= 2; ++n) {
    GradedSubspace bn = spectral_subspace(act, n);
    REQUIRE(bn.dim() > 0);
    for (int t = 0; t < 6; ++t) {
      Element x = random_in_span(bn.basis, rng);
      Element a0 = i_map(w, n, x);
      // lands in grade zero and inverts
      CHECK((act.project_grade(a0, 0) - a0).max_abs() < 1e-12);
      CHECK((i_map_inverse(w, n, a0) - x).max_abs() < 1e-10);
      // multiplicative against lower grades
      for (int m = 1; m + n <= 2; ++m) {
        Element y = random_in_span(spectral_subspace(act, m).basis, rng);
        Element lhs = i_map(w, n + m, x * y);
        Element rhs = i_map(w, n, x * i_map(w, m, y));
        CHECK((lhs - rhs).max_abs() < 1e-10 * (1.0 + rhs.max_abs()));
      }
      // adjoint symmetry: theta^{-n}(i_n(x)) = i_{-n}(x*)*
      Element neg = i_map(w, -n, x.adjoint());
      Element wed_in = ind.b0.to_abstract(a0.full());
      Element back = ind.b0.to_abstract(neg.adjoint().full());
      CHECK((paut_apply(ind.theta, wed_in, -n) - back).max_abs() <
            1e-9 * (1.0 + back.max_abs()));
    }
  }
}

TEST_CASE("induced system of the M_2 grading") {
  RegularityWitness w = *regularity_witness(m2_action()).witness;
  InducedSystem ind = build_theta_lambda(w);
  CHECK(ind.residual < 1e-9);
  CHECK(ind.b0.algebra.block_sizes() == std::vector<int>{1, 1});
  CHECK(ind.theta->source().num_blocks() == 1);
  CHECK(ind.theta->target().num_blocks() == 1);
  CHECK(ind.theta->source() != ind.theta->target());

  // theta moves diag(x, 0) to diag(0, x)
  FdAlgebra a = m2_action().algebra();
  Element d(a);
  d.block(0)(0, 0) = 2.5;
  Matrix img = ind.b0.to_concrete(paut_apply(ind.theta, ind.b0.to_abstract(d.full()), 1));
  Element expect(a);
  expect.block(0)(1, 1) = 2.5;
  CHECK((Element::from_full(a, img) - expect).max_abs() < 1e-9);
}

TEST_CASE("domain chains match graded product ideals") {
  CircleAction act = gallery_action("dual-shift-c3");
  RegularityWitness w = *regularity_witness(act).witness;
  InducedSystem ind = build_theta_lambda(w);
  for (int n = 1; n <= 2; ++n) {
    GradedSubspace bn = spectral_subspace(act, n);
    std::vector<Element> adj;
    for (const Element& b : bn.basis) adj.push_back(b.adjoint());
    Element unit = span_unit(product_span(adj, bn.basis));
    Matrix chain = ind.b0.to_concrete(domain_chain(ind.theta, -n).unit());
    CHECK((unit - Element::from_full(act.algebra(), chain)).max_abs() < 1e-9);
  }
}

TEST_CASE("structure theorem end to end") {
  StructureReport r = verify_structure_theorem(m2_action());
  CHECK(r.ok);
  REQUIRE(r.realization);
  CHECK(r.realization->target.block_sizes() == std::vector<int>{2});
  CHECK(r.realization->target.dim() == 4);
  for (const auto& c : r.checks) CHECK(c.residual < 1e-9);

  StructureReport r3 = verify_structure_theorem(gallery_action("dual-shift-c3"));
  CHECK(r3.ok);

  // trivial grading realizes the algebra itself
  StructureReport rt = verify_structure_theorem(CircleAction(FdAlgebra({1}), {{0}}));
  CHECK(rt.ok);
  CHECK(rt.realization->target.block_sizes() == std::vector<int>{1});
}

TEST_CASE("non semi-saturated gradings fail with a named check") {
  CircleAction gap(FdAlgebra({2}), {{0, 2}});
  StructureReport r = verify_structure_theorem(gap);
  CHECK_FALSE(r.ok);
  CHECK(has_check(r, "semisaturated", false));
}

TEST_CASE("realized covariance algebras round trip") {
  for (const char* name : {"shift-c2", "shift-c3", "glue-m2"}) {
    Realization real = realize_covariance(gallery_system(name));
    CircleAction dual(real.target, real.weights);
    StructureReport r = verify_structure_theorem(dual);
    CHECK(r.ok);
    REQUIRE(r.realization);
    std::vector<int> got = r.realization->target.block_sizes();
    std::vector<int> expect = real.target.block_sizes();
    std::sort(got.begin(), got.end());
    std::sort(expect.begin(), expect.end());
    CHECK(got == expect);
  }
}
