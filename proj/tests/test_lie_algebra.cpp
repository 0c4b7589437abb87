#include "support.hpp"

#include "finslab/linalg.hpp"

#include <doctest.h>

#include <numbers>

using namespace finslab;
using testing_support::Rng;
using testing_support::max_abs;

namespace {

LieAlgebra abelian(int n) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("a" + std::to_string(i + 1));
  return LieAlgebra::from_upper("abelian", labels, {});
}

Matrix cols(int n, std::initializer_list<int> idx) {
  Matrix out = Matrix::Zero(n, static_cast<Eigen::Index>(idx.size()));
  int c = 0;
  for (int i : idx) out(i, c++) = 1.0;
  return out;
}

}  // namespace

TEST_CASE("su2 brackets follow the cyclic table") {
  const auto su2 = load_catalog("su2").model.algebra();
  CHECK(max_abs(bracket(su2, su2.basis_vector(0), su2.basis_vector(1)) - su2.basis_vector(2)) == 0.0);
  CHECK(max_abs(bracket(su2, su2.basis_vector(1), su2.basis_vector(2)) - su2.basis_vector(0)) == 0.0);
  CHECK(max_abs(bracket(su2, su2.basis_vector(2), su2.basis_vector(0)) - su2.basis_vector(1)) == 0.0);
  Rng rng(1);
  const LieVector x = rng.vector(3);
  CHECK(max_abs(bracket(su2, x, x)) == 0.0);
}

TEST_CASE("central summand of su2_plus_r2 brackets to zero") {
  const auto a = load_catalog("su2_plus_r2").model.algebra();
  CHECK(max_abs(bracket(a, a.basis_vector(0), a.basis_vector(3))) == 0.0);
}

TEST_CASE("bracket rejects mismatched dimensions") {
  const auto a = load_catalog("su2").model.algebra();
  CHECK_THROWS_AS(bracket(a, LieVector::Zero(2), LieVector::Zero(3)), Error);
}

TEST_CASE("structure table construction") {
  CHECK_THROWS_AS(LieAlgebra::from_upper("x", {"a", "b"}, {{1, 0, 0, 1.0}}), Error);
  CHECK_THROWS_AS(LieAlgebra::from_upper("x", {"a", "b"}, {{0, 1, 0, 1.0}, {0, 1, 0, 2.0}}), Error);
  CHECK_THROWS_AS(LieAlgebra::from_upper("x", {"a", "b"}, {{0, 1, 2, 1.0}}), Error);
  const auto a = LieAlgebra::from_upper("aff", {"a", "b"}, {{0, 1, 1, 1.0}});
  CHECK(a.c(1, 0, 1) == -1.0);
  CHECK(a.index_of("b") == 1);
  CHECK_FALSE(a.index_of("c").has_value());
}

TEST_CASE("validate_algebra") {
  for (const auto& name : catalog_names()) {
    const auto r = validate_algebra(load_catalog(name).model.algebra());
    CHECK_MESSAGE(r.passed, name);
    CHECK(r.antisymmetry == 0.0);
    CHECK(r.jacobi <= 1e-12);
  }
  // c^3_{12} = c^3_{21} = 1 is not antisymmetric.
  std::vector<double> table(27, 0.0);
  table[(0 * 3 + 1) * 3 + 2] = 1.0;
  table[(1 * 3 + 0) * 3 + 2] = 1.0;
  const auto bad = validate_algebra(LieAlgebra("bad", {"a", "b", "c"}, table));
  CHECK_FALSE(bad.passed);
  CHECK(bad.antisymmetry == doctest::Approx(2.0));

  // Antisymmetric but not Jacobi: [a,b] = c, [b,c] = a, [a,c] = a.
  const auto nj = LieAlgebra::from_upper("nj", {"a", "b", "c"}, {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {0, 2, 0, 1.0}});
  const auto rj = validate_algebra(nj);
  CHECK(rj.antisymmetry == 0.0);
  CHECK(rj.jacobi > 0.5);
  CHECK_FALSE(rj.passed);
}

TEST_CASE("bracket is bilinear and antisymmetric on random pairs") {
  Rng rng(7);
  for (const auto& name : catalog_names()) {
    const auto a = load_catalog(name).model.algebra();
    const int n = a.dim();
    double worst = 0.0;
    for (int s = 0; s < 200; ++s) {
      const LieVector x = rng.vector(n), y = rng.vector(n), z = rng.vector(n);
      const double p = rng.normal(), q = rng.normal();
      worst = std::max(worst, max_abs(bracket(a, x, y) + bracket(a, y, x)));
      worst = std::max(worst, max_abs(bracket(a, p * x + q * z, y) - p * bracket(a, x, y) - q * bracket(a, z, y)));
    }
    CHECK_MESSAGE(worst <= 1e-12, name);
  }
}

TEST_CASE("ad_matrix acts as the bracket") {
  Rng rng(3);
  for (const auto& name : catalog_names()) {
    const auto a = load_catalog(name).model.algebra();
    const LieVector x = rng.vector(a.dim()), y = rng.vector(a.dim());
    CHECK(max_abs(ad_matrix(a, x) * y - bracket(a, x, y)) <= 1e-14);
  }
}

TEST_CASE("expm against oracles") {
  Rng rng(11);
  for (int s = 0; s < 20; ++s) {
    Matrix a(4, 4);
    for (int i = 0; i < 16; ++i) a(i) = 0.3 * rng.normal();
    const Matrix e = linalg::expm(a);
    const Matrix oracle = testing_support::series_exp(a);
    CHECK(max_abs(e - oracle) <= 1e-13 * std::max(1.0, max_abs(oracle)));
  }
  // Rotation generator: exact cos/sin.
  Matrix j(2, 2);
  j << 0, -1, 1, 0;
  const double th = 7.3;
  Matrix rot(2, 2);
  rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  CHECK(max_abs(linalg::expm(th * j) - rot) <= 1e-13 * 8);
  CHECK(max_abs(linalg::expm(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)) == 0.0);
}

TEST_CASE("ad_exponential examples") {
  const auto su2 = load_catalog("su2").model.algebra();
  CHECK(max_abs(ad_exponential(su2, LieVector::Ones(3), 0.0) - Matrix::Identity(3, 3)) == 0.0);
  const auto r2 = load_catalog("su2_plus_r2").model.algebra();
  CHECK(max_abs(ad_exponential(r2, r2.basis_vector(3), 2.5) - Matrix::Identity(5, 5)) == 0.0);

  // ad_{e3} e1 = e2, ad_{e3} e2 = -e1: rotation by pi/2 sends e1 -> e2.
  const Matrix e = ad_exponential(su2, su2.basis_vector(2), std::numbers::pi / 2);
  Matrix expected = Matrix::Zero(3, 3);
  expected(1, 0) = 1.0;
  expected(0, 1) = -1.0;
  expected(2, 2) = 1.0;
  CHECK(max_abs(e - expected) <= 1e-13);
  CHECK(max_abs(e - testing_support::series_exp(std::numbers::pi / 2 * ad_matrix(su2, su2.basis_vector(2)))) <= 1e-13);
}

TEST_CASE("ad_exponential is a one-parameter group") {
  Rng rng(5);
  for (const auto& name : catalog_names()) {
    const auto a = load_catalog(name).model.algebra();
    for (int s = 0; s < 10; ++s) {
      const LieVector x = rng.vector(a.dim());
      const double p = rng.uniform(-2, 2), q = rng.uniform(-2, 2);
      CHECK(max_abs(ad_exponential(a, x, p + q) - ad_exponential(a, x, p) * ad_exponential(a, x, q)) <= 1e-10);
    }
  }
}

TEST_CASE("group exponential") {
  const auto heis = load_catalog("heis3").model;
  const auto& r = *heis.realization();
  const LieVector x = (LieVector(3) << 1.5, -0.7, 2.0).finished();
  // Nilpotent: exp(N) = I + N + N^2/2 exactly.
  const Matrix N = 0.8 * r.element(x);
  const Matrix poly = Matrix::Identity(3, 3) + N + 0.5 * N * N;
  CHECK(max_abs(group_exponential(r, x, 0.8) - poly) <= 1e-14);
  CHECK(max_abs(group_exponential(r, x, 0.0) - Matrix::Identity(3, 3)) == 0.0);

  const auto su2 = load_catalog("su2").model;
  const auto& rs = *su2.realization();
  const LieVector y = (LieVector(3) << 0.3, 1.1, -0.4).finished();
  CHECK(max_abs(group_exponential(rs, y, 0.7) * group_exponential(rs, y, 1.2) - group_exponential(rs, y, 1.9)) <= 1e-13);
}

TEST_CASE("ad_exponential agrees with group-level conjugation") {
  Rng rng(17);
  for (const auto& name : catalog_names()) {
    const auto m = load_catalog(name).model;
    const auto& r = *m.realization();
    const auto& a = m.algebra();
    for (int s = 0; s < 5; ++s) {
      const LieVector x = rng.vector(a.dim()), y = rng.vector(a.dim());
      const double t = rng.uniform(-1.5, 1.5);
      const Matrix g = group_exponential(r, y, -t);
      const Matrix conj = g * r.element(x) * g.inverse();
      const LieVector coords = testing_support::realization_coordinates(r, conj);
      CHECK_MESSAGE(max_abs(ad_exponential(a, y, -t) * x - coords) <= 1e-9, name);
    }
  }
}

TEST_CASE("realization consistency") {
  for (const auto& name : catalog_names()) {
    const auto m = load_catalog(name).model;
    CHECK_MESSAGE(realization_residual(m.algebra(), *m.realization()) <= 1e-12, name);
  }
  const auto ab = abelian(2);
  CHECK(realization_residual(ab, MatrixRealization{2, {Matrix::Zero(2, 2), Matrix::Zero(2, 2)}}) == 0.0);
  auto r = *load_catalog("su2").model.realization();
  r.matrices[0](0, 1) += 1e-3;
  CHECK(realization_residual(load_catalog("su2").model.algebra(), r) > 1e-4);
}

TEST_CASE("inner product validation") {
  CHECK_THROWS_AS(InnerProduct(Matrix::Zero(2, 2)), Error);
  Matrix ns(2, 2);
  ns << 1, 0.5, 0, 1;
  CHECK_THROWS_AS(InnerProduct{ns}, Error);
  Matrix indef(2, 2);
  indef << 1, 0, 0, -1;
  CHECK_THROWS_AS(InnerProduct{indef}, Error);
}

TEST_CASE("projections") {
  Rng rng(23);
  for (const auto& name : catalog_names()) {
    const auto m = load_catalog(name).model;
    const auto& d = m.decomposition();
    const auto& p1 = d.projector(Part::m1);
    const auto& p2 = d.projector(Part::m2);
    CHECK(max_abs(p1 * p1 - p1) <= 1e-12);
    CHECK(max_abs(p2 * p2 - p2) <= 1e-12);
    CHECK(max_abs(p1 * p2) <= 1e-12);
    const LieVector x = rng.vector(m.dim());
    CHECK(max_abs(project(d, x, Part::h) + project(d, x, Part::m) - x) <= 1e-12);
    CHECK(max_abs(project(d, x, Part::m1) + project(d, x, Part::m2) - project(d, x, Part::m)) <= 1e-12);
  }
  const auto u2 = load_catalog("u2").model;
  const LieVector e1 = LieVector::Unit(4, 0);
  CHECK(max_abs(project(u2.decomposition(), e1, Part::m1) - e1) == 0.0);

  // u2 split against an independent least-squares solve in a skewed basis.
  const Matrix m1 = (Matrix(4, 2) << 1, 1, 0, 1, 0, 0, 0, 0).finished();
  const Matrix m2 = (Matrix(4, 2) << 0, 0, 1, 0, 1, 1, 0, 1).finished();
  ReductiveDecomposition d(Matrix(4, 0), m1, m2);
  for (int s = 0; s < 10; ++s) {
    const LieVector x = rng.vector(4);
    Matrix B(4, 4);
    B << m1, m2;
    const LieVector c = B.colPivHouseholderQr().solve(x);
    CHECK(max_abs(project(d, x, Part::m1) - m1 * c.head(2)) <= 1e-12);
    CHECK(max_abs(project(d, x, Part::m2) - m2 * c.tail(2)) <= 1e-12);
  }
  CHECK(part_from_string("m2") == Part::m2);
  CHECK_THROWS_AS(part_from_string("k"), Error);
}

TEST_CASE("decomposition rejects dependent or incomplete spans") {
  CHECK_THROWS_AS(ReductiveDecomposition(Matrix(3, 0), cols(3, {0, 1}), cols(3, {1})), Error);
  CHECK_THROWS_AS(ReductiveDecomposition(Matrix(3, 0), cols(3, {0}), cols(3, {1})), Error);
}

TEST_CASE("check_decomposition") {
  const auto su2 = load_catalog("su2").model;
  const auto ip = InnerProduct::identity(3);
  const auto good = check_decomposition(su2.algebra(), su2.decomposition(), ip);
  CHECK(good.m1_m2_bracket_in_m1 == 0.0);
  CHECK(good.h_closed == 0.0);
  CHECK(good.h_m_bracket == 0.0);
  CHECK(good.m1_m2_orthogonality == 0.0);

  // m1 = {e1, e3}, m2 = {e2}: [e1, e2] = e3 and [e3, e2] = -e1 both stay in m1.
  const auto swapped = check_decomposition(
      su2.algebra(), ReductiveDecomposition::lie_group(cols(3, {0, 2}), cols(3, {1})), ip);
  CHECK(swapped.m1_m2_bracket_in_m1 == 0.0);
  // m1 = {e1}, m2 = {e2, e3}: [e1, e2] = e3 lands in m2.
  const auto bad = check_decomposition(su2.algebra(),
                                       ReductiveDecomposition::lie_group(cols(3, {0}), cols(3, {1, 2})), ip);
  CHECK(bad.m1_m2_bracket_in_m1 == doctest::Approx(1.0));

  const auto r2 = load_catalog("su2_plus_r2").model;
  CHECK(check_decomposition(r2.algebra(), r2.decomposition(), r2.ip()).m1_m2_bracket_in_m1 == 0.0);
}

TEST_CASE("ad invariance") {
  const auto u2 = load_catalog("u2").model;
  // -Re tr(xy) on the realified matrices is twice the complex trace form.
  const auto& r = *u2.realization();
  Matrix g(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = -(r.matrices[i] * r.matrices[j]).trace();
  const InnerProduct trace_form(g);
  CHECK(ad_invariance_residual(u2.algebra(), trace_form, Matrix::Identity(4, 4)) <= 1e-14);
  CHECK(ad_invariance_residual(abelian(3), InnerProduct(Rng(2).spd(3)), Matrix::Identity(3, 3)) == 0.0);
  const auto heis = load_catalog("heis3").model;
  CHECK(ad_invariance_residual(heis.algebra(), InnerProduct::identity(3), Matrix::Identity(3, 3)) == doctest::Approx(1.0));
}

TEST_CASE("heis3 admits no ad-invariant inner product") {
  // <[e1,e2],e3> + <e2,[e1,e3]> = <e3,e3> > 0 for every positive definite gram.
  const auto heis = load_catalog("heis3").model.algebra();
  Rng rng(31);
  for (int s = 0; s < 50; ++s) {
    const InnerProduct ip(rng.spd(3));
    CHECK(ad_invariance_residual(heis, ip, Matrix::Identity(3, 3)) >= ip.gram()(2, 2) - 1e-12);
  }
}

TEST_CASE("center, derived algebra, complements") {
  CHECK(center(load_catalog("su2").model.algebra()).cols() == 0);
  const Matrix z = center(load_catalog("u2").model.algebra());
  REQUIRE(z.cols() == 1);
  CHECK(max_abs(z - LieVector::Unit(4, 3)) <= 1e-12);
  const Matrix der = derived(load_catalog("su2_plus_r2").model.algebra());
  REQUIRE(der.cols() == 3);
  CHECK(max_abs(der - cols(5, {0, 1, 2})) <= 1e-12);
  const Matrix hz = center(load_catalog("heis3").model.algebra());
  REQUIRE(hz.cols() == 1);
  CHECK(max_abs(hz - LieVector::Unit(3, 2)) <= 1e-12);

  Matrix g = Matrix::Identity(3, 3);
  g(0, 1) = g(1, 0) = 0.5;
  const InnerProduct ip(g);
  const Matrix comp = orthogonal_complement(ip, cols(3, {0}));
  REQUIRE(comp.cols() == 2);
  CHECK(max_abs(cols(3, {0}).transpose() * g * comp) <= 1e-12);
}

TEST_CASE("subalgebra residual") {
  const auto su2 = load_catalog("su2").model.algebra();
  CHECK(subalgebra_residual(su2, cols(3, {2})) == 0.0);
  CHECK(subalgebra_residual(su2, cols(3, {0, 1})) == doctest::Approx(1.0));
}
