#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "covalg/ktheory.hpp"
#include "helpers.hpp"

using namespace covalg;
using covalg::testing::gallery_system;
using covalg::testing::shift_system;

namespace {

IntMatrix from_rows(const std::vector<std::vector<long>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  IntMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
  return m;
}

void check_snf_contract(const IntMatrix& m) {
  Snf s = snf(m);
  CHECK(s.u * m * s.v == s.d);
  CHECK(is_unimodular(s.u));
  CHECK(is_unimodular(s.v));
  CHECK(s.u_inv * s.u == IntMatrix::identity(m.rows()));
  CHECK(s.v * s.v_inv == IntMatrix::identity(m.cols()));
  CHECK(s.u_inv * s.d * s.v_inv == m);
  int n = std::min(m.rows(), m.cols());
  for (int i = 0; i < n; ++i) {
    CHECK(s.d(i, i) >= 0);
    if (i + 1 < n && s.d(i + 1, i + 1) != 0) {
      if (s.d(i, i) != 0) CHECK(s.d(i + 1, i + 1) % s.d(i, i) == 0);
      else CHECK(s.d(i, i) == 0);  // zeros only at the tail
    }
  }
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (i != j) CHECK(s.d(i, j) == 0);
}

}  // namespace

TEST_CASE("integer matrices") {
  IntMatrix a = from_rows({{1, 2}, {3, 4}});
  IntMatrix b = from_rows({{0, 1}, {1, 0}});
  CHECK(a * b == from_rows({{2, 1}, {4, 3}}));
  CHECK(a + b - b == a);
  CHECK((a - a).is_zero());
  CHECK(IntMatrix::identity(2) * a == a);
  CHECK(a.str() == "[[1, 2], [3, 4]]");
  CHECK_FALSE(is_unimodular(a));  // det -2
  CHECK(is_unimodular(b));
  CHECK(is_unimodular(from_rows({{1, 5}, {0, 1}})));
  CHECK_FALSE(is_unimodular(IntMatrix(2, 3)));
}

TEST_CASE("smith normal form") {
  Snf id = snf(IntMatrix::identity(3));
  CHECK(id.d == IntMatrix::identity(3));

  IntMatrix two_three = from_rows({{2, 0}, {0, 3}});
  Snf s = snf(two_three);
  CHECK(s.d(0, 0) == 1);
  CHECK(s.d(1, 1) == 6);
  check_snf_contract(two_three);

  check_snf_contract(IntMatrix(2, 2));
  check_snf_contract(IntMatrix(0, 3));
  check_snf_contract(from_rows({{4, 6, 10}, {6, 12, 18}}));

  std::mt19937_64 gen(99);
  std::uniform_int_distribution<int> d(-9, 9);
  for (int t = 0; t < 25; ++t) {
    int r = 1 + static_cast<int>(gen() % 5);
    int c = 1 + static_cast<int>(gen() % 5);
    IntMatrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = d(gen);
    check_snf_contract(m);
  }
}

TEST_CASE("k groups of block algebras") {
  CHECK(k0(FdAlgebra({1, 1, 1})).rank == 3);
  CHECK(k0(FdAlgebra({4})).rank == 1);
  CHECK(k1_rank(FdAlgebra({3, 2})) == 0);
}

TEST_CASE("induced multiplicity matrices") {
  FdAlgebra c2({1, 1});
  FdAlgebra m2({2});
  // doubled embedding of C into M_2
  InducedMap dbl = induced_map(FdAlgebra({1}), m2, [&](const Element& x) {
    Element y(m2);
    y.block(0)(0, 0) = x.block(0)(0, 0);
    y.block(0)(1, 1) = x.block(0)(0, 0);
    return y;
  });
  CHECK(dbl.m == from_rows({{2}}));

  InducedMap ident = induced_map(c2, c2, [](const Element& x) { return x; });
  CHECK(ident.m == IntMatrix::identity(2));

  // the diagonal inclusion of the coefficients into the realized algebra
  System sys = shift_system(3);
  Realization real = realize_covariance(sys);
  InducedMap inc = induced_map(sys->algebra(), real.target, [&](const Element& x) {
    return real.realize(LElement::monomial(sys, x, 0));
  });
  CHECK(inc.m == from_rows({{1, 1, 1}}));

  // theta^{-1} as a map from J into A hits the predecessor blocks
  FdAlgebra j_alg = sys->target().as_algebra();
  InducedMap back = induced_map(j_alg, sys->algebra(), [&](const Element& x) {
    Element amb(sys->algebra());
    for (int b = 0; b < j_alg.num_blocks(); ++b)
      amb.block(sys->target().blocks()[b]) = x.block(b);
    return paut_apply(sys, amb, -1);
  });
  CHECK(back.m == from_rows({{1, 0}, {0, 1}, {0, 0}}));

  // a non-homomorphism is rejected
  CHECK_THROWS_AS(
      induced_map(c2, c2,
                  [](const Element& x) {
                    Element y = x;
                    y.block(0)(0, 0) += 1.0;
                    return y;
                  }),
      Error);
}

TEST_CASE("induced maps compose") {
  FdAlgebra c2({1, 1});
  FdAlgebra mid({2, 1});
  FdAlgebra m3({3});
  auto f = [&](const Element& x) {
    Element y(mid);
    y.block(0)(0, 0) = x.block(0)(0, 0);
    y.block(0)(1, 1) = x.block(1)(0, 0);
    y.block(1)(0, 0) = x.block(1)(0, 0);
    return y;
  };
  auto g = [&](const Element& x) {
    Element y(m3);
    y.block(0).topLeftCorner(2, 2) = x.block(0);
    y.block(0)(2, 2) = x.block(1)(0, 0);
    return y;
  };
  InducedMap mf = induced_map(c2, mid, f);
  InducedMap mg = induced_map(mid, m3, g);
  InducedMap mgf = induced_map(c2, m3, [&](const Element& x) { return g(f(x)); });
  CHECK(mf.m == from_rows({{1, 1}, {0, 1}}));
  CHECK(mg.m == from_rows({{1, 1}}));
  CHECK(mgf.m == mg.m * mf.m);
}

TEST_CASE("exactness certificates") {
  // Z --2--> Z --0--> 0 leaves a Z/2 quotient
  ExactnessCertificate bad = exact_at(from_rows({{2}}), IntMatrix(0, 1));
  CHECK_FALSE(bad.exact);
  CHECK(bad.composite_zero);
  REQUIRE(bad.divisors.size() == 1);
  CHECK(bad.divisors[0] == 2);

  // 0 --> Z --id--> Z is exact at the middle
  ExactnessCertificate inj = exact_at(IntMatrix(1, 0), from_rows({{1}}));
  CHECK(inj.exact);
  CHECK(inj.kernel_rank == 0);

  // a missed free generator shows up as a zero divisor
  ExactnessCertificate gap = exact_at(IntMatrix(2, 0), IntMatrix(0, 2));
  CHECK_FALSE(gap.exact);
  CHECK(gap.kernel_rank == 2);

  // the hand-built three block shift sequence
  IntMatrix f = from_rows({{-1, 0}, {1, -1}, {0, 1}});
  IntMatrix g = from_rows({{1, 1, 1}});
  ExactnessCertificate mid = exact_at(f, g);
  CHECK(mid.exact);
  CHECK(mid.kernel_rank == 2);
  CHECK(mid.image_rank == 2);

  // nonzero composite fails fast
  ExactnessCertificate comp = exact_at(from_rows({{1}}), from_rows({{1}}));
  CHECK_FALSE(comp.exact);
  CHECK_FALSE(comp.composite_zero);
}

TEST_CASE("the k group sequence of shift systems") {
  for (int m = 2; m <= 4; ++m) {
    PvReport r = pv_verify(shift_system(m));
    CHECK(r.ok);
    CHECK(static_cast<int>(r.j_blocks.size()) == m - 1);
    CHECK(static_cast<int>(r.a_blocks.size()) == m);
    CHECK(static_cast<int>(r.b_blocks.size()) == 1);
    CHECK(r.at_source.exact);
    CHECK(r.at_middle.exact);
    CHECK(r.at_target.exact);
    CHECK((r.inclusion * r.delta).is_zero());
  }
  PvReport r2 = pv_verify(shift_system(2));
  CHECK(r2.delta == from_rows({{-1}, {1}}));
  CHECK(r2.inclusion == from_rows({{1, 1}}));
  PvReport r3 = pv_verify(shift_system(3));
  CHECK(r3.delta == from_rows({{-1, 0}, {1, -1}, {0, 1}}));
  CHECK(r3.inclusion == from_rows({{1, 1, 1}}));
}

TEST_CASE("the sequence for still and glued systems") {
  PvReport rz = pv_verify(gallery_system("zero-ideal"));
  CHECK(rz.ok);
  CHECK(rz.j_blocks.empty());
  CHECK(is_unimodular(rz.inclusion));  // nothing collapses without dynamics

  PvReport rg = pv_verify(gallery_system("glue-m2"));
  CHECK(rg.ok);
  CHECK((rg.inclusion * rg.delta).is_zero());

  CHECK_THROWS_AS(pv_verify(gallery_system("flip-c2")), Error);
}

TEST_CASE("the corner square commutes over the extension") {
  for (const char* name : {"shift-c2", "shift-c3", "glue-m2", "zero-ideal"}) {
    CornerDiagramReport r = diagram_72_check(gallery_system(name));
    CHECK(r.ok);
    CHECK(r.commutes);
    CHECK(r.j_unimodular);
    CHECK(r.d_unimodular);
    CHECK(r.lambda_inclusion * r.j_star == r.d_star * r.delta);
  }
}
