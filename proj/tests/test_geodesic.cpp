#include "support.hpp"

#include <doctest.h>

#include <numbers>

using namespace finslab;
using testing_support::Rng;
using testing_support::max_abs;

namespace {

// Left logarithmic derivative M(t)^{-1} M'(t) of the realized curve, in algebra coordinates.
LieVector realized_body_velocity(const MatrixRealization& r, const std::vector<LieVector>& f, double t) {
  const double h = 1e-5;
  const Matrix M = testing_support::realized_curve(r, f, t);
  const Matrix dM = (testing_support::realized_curve(r, f, t + h) - testing_support::realized_curve(r, f, t - h)) / (2 * h);
  return testing_support::realization_coordinates(r, M.inverse() * dM);
}

HomogeneousModel deformed(const char* name, double lambda) {
  return deform_model(load_catalog(name).model, lambda).model;
}

}  // namespace

TEST_CASE("sign convention: one-parameter subgroups of bi-invariant metrics") {
  Rng rng(201);
  for (const char* name : {"su2", "so3", "u2", "su2_plus_r2"}) {
    const auto m = load_catalog(name).model.riemannian();
    for (int s = 0; s < 5; ++s) {
      const ExpProductCurve c({rng.vector(m.dim())});
      const auto r = is_geodesic(m, c, -1.0, 2.0, 31, 1e-12);
      CHECK_MESSAGE(r.passed, name);
      CHECK(r.max_residual <= 1e-12);
    }
  }
}

TEST_CASE("exp product curves") {
  CHECK_THROWS_AS(ExpProductCurve({}), Error);
  CHECK_THROWS_AS(ExpProductCurve({LieVector::Zero(2), LieVector::Zero(3)}), Error);
  const auto a = load_catalog("su2_plus_r2").model.algebra();
  Rng rng(203);
  const ExpProductCurve c({rng.vector(5), rng.vector(5), rng.vector(5)});
  CHECK(max_abs(body_velocity(a, c, 0.0) - (c.factors()[0] + c.factors()[1] + c.factors()[2])) <= 1e-15);
  const ExpProductCurve one({c.factors()[0]});
  CHECK(max_abs(body_velocity(a, one, 1.7) - c.factors()[0]) <= 1e-15);
  const ExpProductCurve central({c.factors()[0], LieVector::Unit(5, 3)});
  CHECK(max_abs(body_velocity(a, central, 2.3) - c.factors()[0] - LieVector::Unit(5, 3)) <= 1e-14);
  CHECK(max_abs(body_acceleration(a, one, 0.4)) == 0.0);
}

TEST_CASE("two-factor body velocity at pi/2 on su2") {
  const auto m = load_catalog("su2").model;
  const auto& a = m.algebra();
  const LieVector e1 = LieVector::Unit(3, 0), e3 = LieVector::Unit(3, 2);
  const double t = std::numbers::pi / 2;
  const LieVector v = body_velocity(a, ExpProductCurve({e1, e3}), t);
  CHECK(max_abs(v - (ad_exponential(a, e3, -t) * e1 + e3)) <= 1e-15);
  // e^{-t ad_e3} e1 = cos t e1 - sin t e2.
  CHECK(max_abs(v - LieVector((LieVector(3) << 0.0, -1.0, 1.0).finished())) <= 1e-15);
  CHECK(max_abs(v - realized_body_velocity(*m.realization(), {e1, e3}, t)) <= 1e-8);
}

TEST_CASE("body velocity matches the matrix realization") {
  Rng rng(207);
  for (const auto& name : catalog_names()) {
    const auto m = load_catalog(name).model;
    for (int k = 1; k <= 3; ++k) {
      std::vector<LieVector> f;
      for (int i = 0; i < k; ++i) f.push_back(rng.vector(m.dim()));
      const ExpProductCurve c(f);
      for (int i = 0; i <= 10; ++i) {
        const double t = 0.1 * i;
        CHECK_MESSAGE(max_abs(body_velocity(m.algebra(), c, t) - realized_body_velocity(*m.realization(), f, t)) <= 1e-7,
                      name);
      }
    }
  }
}

TEST_CASE("body acceleration closed form against finite differences") {
  Rng rng(211);
  const auto a = load_catalog("su2_plus_r2").model.algebra();
  for (int k = 1; k <= 4; ++k) {
    std::vector<LieVector> f;
    for (int i = 0; i < k; ++i) f.push_back(rng.vector(5));
    const ExpProductCurve c(f);
    for (double t : {-0.7, 0.0, 0.3, 1.9})
      CHECK(max_abs(body_acceleration_closed_form(a, c, t) - body_acceleration_fd(a, c, t)) <= 1e-7);
  }
  // Two-step with central y: no acceleration.
  const ExpProductCurve cy({rng.vector(5), LieVector::Unit(5, 4)});
  CHECK(max_abs(body_acceleration(a, cy, 0.8)) <= 1e-14);
}

TEST_CASE("two_step_factors") {
  const auto m = load_catalog("su2_plus_r2").model;
  Rng rng(213);
  const LieVector v0 = rng.vector(5);
  const auto f = two_step_factors(v0, m.decomposition(), 2.5);
  CHECK(max_abs(f.x + f.y - v0) <= 1e-12);
  const auto one = two_step_factors(v0, m.decomposition(), 1.0);
  CHECK(max_abs(one.y) == 0.0);
  const LieVector v1 = project(m.decomposition(), v0, Part::m1);
  const auto only1 = two_step_factors(v1, m.decomposition(), 3.0);
  CHECK(max_abs(only1.x - v1) <= 1e-15);
  CHECK(max_abs(only1.y) <= 1e-15);
  CHECK_THROWS_AS(two_step_factors(v0, m.decomposition(), 0.0), Error);
  CHECK_THROWS_AS(two_step_factors(v0, m.decomposition(), -2.0), Error);

  // su2, lambda = 2, v0 = e1 + e3: x = e1 + 2 e3, y = -e3.
  const auto su2 = load_catalog("su2").model;
  const auto s = two_step_factors(LieVector((LieVector(3) << 1, 0, 1).finished()), su2.decomposition(), 2.0);
  CHECK(max_abs(s.x - LieVector((LieVector(3) << 1, 0, 2).finished())) == 0.0);
  CHECK(max_abs(s.y - LieVector((LieVector(3) << 0, 0, -1).finished())) == 0.0);
  const auto d = deformed("su2", 2.0);
  CHECK(is_geodesic(d, ExpProductCurve({s.x, s.y}), 0.0, 1.0, 101, 1e-6).passed);
}

TEST_CASE("wrong factors do not certify") {
  const auto d = deformed("su2", 2.0);
  const auto s = two_step_factors(LieVector((LieVector(3) << 1, 0, 1).finished()), d.decomposition(), 2.0);
  const auto swapped = is_geodesic(d, ExpProductCurve({s.y, s.x}), 0.0, 1.0, 101, 1e-6);
  CHECK_FALSE(swapped.passed);
  CHECK(swapped.max_residual > 1e-3);
  const auto straight = is_geodesic(d, ExpProductCurve({s.v0}), 0.0, 1.0, 101, 1e-6);
  CHECK_FALSE(straight.passed);
}

TEST_CASE("stationary curves along geodesic vectors") {
  const auto d = deformed("su2", 3.0);
  const LieVector e3 = LieVector::Unit(3, 2);
  const auto ep = euler_poincare_residual(d.algebra(), d.norm(), ExpProductCurve({e3}), 0.4);
  CHECK(max_abs(ep.residual) <= 1e-12);
  CHECK(max_abs(ep.residual - geodesic_vector_residual(d, e3)) <= 1e-12);
}

TEST_CASE("Euler-Arnold oracle agrees with the factory curves") {
  Rng rng(217);
  for (const char* metric : {"riemannian", "randers", "cubic"}) {
    const auto base = catalog_variant(load_catalog("su2_plus_r2"), metric);
    const auto d = deform_model(base, 2.0).model;
    for (int s = 0; s < 3; ++s) {
      LieVector v0;
      do v0 = rng.vector(5);
      while (!is_strongly_convex(d.norm(), v0));
      const auto f = two_step_factors(v0, d.decomposition(), 2.0);
      const ExpProductCurve c({f.x, f.y});
      const Trajectory traj = euler_arnold_integrate(d.algebra(), d.norm(), v0, 0.0, 1.0, 1000);
      double dev = 0.0;
      for (size_t i = 0; i < traj.t.size(); ++i)
        dev = std::max(dev, max_abs(traj.v[i] - body_velocity(d.algebra(), c, traj.t[i])));
      CHECK_MESSAGE(dev <= 1e-7, metric);
      CHECK_MESSAGE(is_geodesic(d, c, 0.0, 1.0, 101, 1e-6).passed, metric);
    }
  }
  // Bi-invariant: constant trajectory.
  const auto su2 = load_catalog("su2").model;
  const LieVector v0 = rng.vector(3);
  const auto traj = euler_arnold_integrate(su2.algebra(), su2.norm(), v0, 0.0, 1.0, 1000);
  CHECK(max_abs(traj.v.back() - v0) <= 1e-14);
}

TEST_CASE("RK4 oracle converges at fourth order") {
  // Large initial velocity so truncation error dominates rounding at these step counts.
  const auto d = deformed("su2", 5.0);
  const LieVector v0 = (LieVector(3) << 3.0, -2.0, 4.0).finished();
  const auto f = two_step_factors(v0, d.decomposition(), 5.0);
  const ExpProductCurve exact({f.x, f.y});
  auto error = [&](int steps) {
    const auto traj = euler_arnold_integrate(d.algebra(), d.norm(), v0, 0.0, 1.0, steps);
    return max_abs(traj.v.back() - body_velocity(d.algebra(), exact, 1.0));
  };
  const double e1 = error(100), e2 = error(200);
  INFO("errors " << e1 << " " << e2);
  CHECK(e1 / e2 >= 12.0);
  CHECK(e1 / e2 <= 20.0);
}

TEST_CASE("Berwald consistency: deformed metric and deformed Randers share geodesics") {
  Rng rng(219);
  for (const char* name : {"su2_plus_r2", "u2"})
    for (double lambda : {0.5, 2.0, 5.0}) {
      const auto d = deform_model(load_catalog(name).model, lambda).model;
      for (int s = 0; s < 3; ++s) {
        const LieVector v0 = rng.vector(d.dim());
        const auto f = two_step_factors(v0, d.decomposition(), lambda);
        const ExpProductCurve c({f.x, f.y});
        CHECK(is_geodesic(d, c, 0.0, 1.0, 41, 1e-6).passed);
        CHECK(is_geodesic(d.riemannian(), c, 0.0, 1.0, 41, 1e-6).passed);
      }
    }
}

TEST_CASE("is_geodesic inputs") {
  const auto m = load_catalog("su2").model;
  const ExpProductCurve c({LieVector::Unit(3, 0)});
  CHECK_THROWS_AS(is_geodesic(m, c, 0.0, 1.0, 1, 1e-6), Error);
  CHECK_THROWS_AS(is_geodesic(m, c, 0.0, 1.0, 11, 0.0), Error);
  const auto r = is_geodesic(m, c, 0.0, 1.0, 11, 1e-6);
  CHECK(r.grid.size() == 11);
  CHECK(r.grid.front() == 0.0);
  CHECK(r.grid.back() == 1.0);
  CHECK(r.richardson_ok);

  // Leaving the cone is reported per sample.
  const auto cubic = catalog_variant(load_catalog("su2_plus_r2"), "cubic");
  const auto rc = is_geodesic(cubic, ExpProductCurve({-LieVector::Unit(5, 3)}), 0.0, 1.0, 5, 1e-6);
  CHECK_FALSE(rc.passed);
  CHECK(!rc.residuals.front().has_value());
  CHECK(!rc.sample_errors.front().empty());

  // Nontrivial isotropy: not certified at curve level.
  const auto base = load_catalog("su2_plus_r2").model;
  Matrix h = Matrix::Zero(5, 1), m1 = Matrix::Zero(5, 2), m2 = Matrix::Zero(5, 2);
  h(2, 0) = 1;
  m1(0, 0) = m1(1, 1) = 1;
  m2(3, 0) = m2(4, 1) = 1;
  const HomogeneousModel gh(base.algebra(), base.realization(), base.ip(), ReductiveDecomposition(h, m1, m2),
                            MinkowskiNorm::riemannian(base.ip()));
  CHECK_THROWS_AS(is_geodesic(gh, ExpProductCurve({LieVector::Unit(5, 0)}), 0.0, 1.0, 5, 1e-6), Error);
}

TEST_CASE("navigation curves") {
  const auto m = load_catalog("su2_plus_r2").model;
  const auto& a = m.algebra();
  Rng rng(223);
  const LieVector x = rng.vector(5), y = rng.vector(5);
  const auto same = navigation_curve(a, LieVector::Zero(5), x, y);
  CHECK(max_abs(same.factors()[0] - x) == 0.0);
  const auto z1 = navigation_curve(a, LieVector::Unit(5, 3), x, y);
  for (double t : {0.0, 0.5, 1.0})
    CHECK(max_abs(body_velocity(a, z1, t) - body_velocity(a, ExpProductCurve({LieVector::Unit(5, 3), x, y}), t)) <= 1e-10);
  const auto w = navigation_curve(a, LieVector::Unit(5, 4), LieVector::Zero(5), LieVector::Zero(5));
  CHECK(max_abs(body_velocity(a, w, 0.7) - LieVector::Unit(5, 4)) == 0.0);
  CHECK_THROWS_AS(navigation_curve(a, LieVector::Unit(5, 0), x, y), Error);
}

TEST_CASE("navigation turns unit-speed geodesics into geodesics") {
  Rng rng(227);
  const LieVector W0 = 0.5 * LieVector::Unit(5, 4);
  for (const char* metric : {"riemannian", "randers"}) {
    const auto base = catalog_variant(load_catalog("su2_plus_r2"), metric);
    for (double lambda : {1.0, 2.0}) {
      const auto d = lambda == 1.0 ? base : deform_model(base, lambda).model;
      const auto nav = d.with_norm(MinkowskiNorm::navigation(d.norm(), W0));
      for (int s = 0; s < 3; ++s) {
        LieVector v0 = rng.vector(5);
        v0 /= norm_value(d.norm(), v0);
        const auto f = two_step_factors(v0, d.decomposition(), lambda);
        const ExpProductCurve c({f.x, f.y});
        REQUIRE(is_geodesic(d, c, 0.0, 1.0, 21, 1e-6).passed);
        CHECK(is_geodesic(nav, navigation_curve(d.algebra(), W0, f.x, f.y), 0.0, 1.0, 21, 1e-6).passed);
      }
    }
  }
}

TEST_CASE("go_scan") {
  const auto m = load_catalog("su2_plus_r2").model;
  const auto s = go_scan(m, 2.0, 5, 1e-6, 42);
  CHECK(s.pass_fraction == 1.0);
  CHECK(s.worst_oracle_deviation <= 1e-7);
  CHECK(go_scan(m, 1.0, 3, 1e-6, 42).pass_fraction == 1.0);
  // Same seed, same draws.
  const auto again = go_scan(m, 2.0, 5, 1e-6, 42);
  for (size_t i = 0; i < s.results.size(); ++i) CHECK(max_abs(s.results[i].v0 - again.results[i].v0) == 0.0);
  for (const auto& t : s.results) CHECK(norm_value(deform_model(m, 2.0).model.norm(), t.v0) == doctest::Approx(1.0));

  const auto su2 = load_catalog("su2").model;
  const HomogeneousModel bad(su2.algebra(), su2.realization(), su2.ip(),
                             ReductiveDecomposition::lie_group(LieVector::Unit(3, 0), (Matrix(3, 2) << 0, 0, 1, 0, 0, 1).finished()),
                             su2.norm());
  CHECK_THROWS_AS(go_scan(bad, 2.0, 3, 1e-6, 1), Error);
  CHECK_THROWS_AS(go_scan(m, 2.0, 0, 1e-6, 1), Error);
}
