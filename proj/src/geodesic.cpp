#include "finslab/geodesic.hpp"

#include "finslab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace finslab {

ExpProductCurve::ExpProductCurve(std::vector<LieVector> factors) : factors_(std::move(factors)) {
  require(!factors_.empty(), ErrorCode::InvalidArgument, "a curve needs at least one factor");
  for (const auto& f : factors_)
    require(f.size() == factors_.front().size() && f.size() > 0, ErrorCode::InvalidArgument,
            "curve factors have inconsistent lengths");
}

namespace {

void require_curve_dim(const LieAlgebra& algebra, const ExpProductCurve& curve) {
  require(curve.dim() == algebra.dim(), ErrorCode::InvalidArgument,
          "curve factors do not match the algebra dimension");
}

}  // namespace

LieVector body_velocity(const LieAlgebra& algebra, const ExpProductCurve& curve, double t) {
  require_curve_dim(algebra, curve);
  const int n = algebra.dim();
  const auto& a = curve.factors();
  Matrix prod = Matrix::Identity(n, n);
  LieVector v = LieVector::Zero(n);
  for (size_t i = a.size(); i-- > 0;) {
    v += prod * a[i];
    if (i > 0) prod = prod * ad_exponential(algebra, a[i], -t);
  }
  return v;
}

LieVector body_acceleration_closed_form(const LieAlgebra& algebra, const ExpProductCurve& curve,
                                        double t) {
  require_curve_dim(algebra, curve);
  const int n = algebra.dim();
  const auto& a = curve.factors();
  Matrix prod = Matrix::Identity(n, n);
  Matrix dprod = Matrix::Zero(n, n);
  LieVector acc = LieVector::Zero(n);
  for (size_t i = a.size(); i-- > 0;) {
    acc += dprod * a[i];
    if (i == 0) break;
    const Matrix e = ad_exponential(algebra, a[i], -t);
    const Matrix de = -ad_matrix(algebra, a[i]) * e;
    dprod = dprod * e + prod * de;
    prod = prod * e;
  }
  return acc;
}

LieVector body_acceleration_fd(const LieAlgebra& algebra, const ExpProductCurve& curve, double t) {
  const double h = 1e-4 * std::max(1.0, std::abs(t));
  return (body_velocity(algebra, curve, t - 2 * h) - 8.0 * body_velocity(algebra, curve, t - h) +
          8.0 * body_velocity(algebra, curve, t + h) - body_velocity(algebra, curve, t + 2 * h)) /
         (12.0 * h);
}

LieVector body_acceleration(const LieAlgebra& algebra, const ExpProductCurve& curve, double t) {
  if (curve.size() <= 3) return body_acceleration_closed_form(algebra, curve, t);
  return body_acceleration_fd(algebra, curve, t);
}

LieVector legendre_covector(const MinkowskiNorm& norm, const LieVector& v) {
  if (norm.kind() == NormKind::riemannian) {
    require_regular(norm, v);
    return norm.inner_product().gram() * v;
  }
  const int n = norm.dim();
  LieVector out(n);
  for (int k = 0; k < n; ++k) out(k) = legendre(norm, v, LieVector::Unit(n, k));
  return out;
}

EulerPoincare euler_poincare_residual(const LieAlgebra& algebra, const MinkowskiNorm& norm,
                                      const ExpProductCurve& curve, double t) {
  require_curve_dim(algebra, curve);
  const int n = algebra.dim();
  auto momentum = [&](double s) { return legendre_covector(norm, body_velocity(algebra, curve, s)); };
  auto stencil = [&](double h) {
    return LieVector((momentum(t - 2 * h) - 8.0 * momentum(t - h) + 8.0 * momentum(t + h) -
                      momentum(t + 2 * h)) /
                     (12.0 * h));
  };
  const LieVector dmu = stencil(kStencilStep);
  const LieVector dmu_half = stencil(0.5 * kStencilStep);

  const LieVector v = body_velocity(algebra, curve, t);
  LieVector coadjoint(n);
  for (int k = 0; k < n; ++k)
    coadjoint(k) = legendre(norm, v, bracket(algebra, v, algebra.basis_vector(k)));
  return {dmu - coadjoint, (dmu - dmu_half).cwiseAbs().maxCoeff()};
}

ResidualReport is_geodesic(const LieAlgebra& algebra, const MinkowskiNorm& norm,
                           const ExpProductCurve& curve, double t0, double t1, int samples,
                           double tol) {
  require(samples >= 2, ErrorCode::InvalidArgument, "is_geodesic needs at least 2 samples");
  require(tol > 0.0, ErrorCode::InvalidArgument, "tolerance must be positive");
  require(norm.dim() == algebra.dim(), ErrorCode::InvalidArgument, "norm/algebra dimension mismatch");
  ResidualReport r;
  r.tolerance = tol;
  bool all_ok = true;
  for (int i = 0; i < samples; ++i) {
    const double t = t0 + (t1 - t0) * i / (samples - 1);
    r.grid.push_back(t);
    try {
      const EulerPoincare ep = euler_poincare_residual(algebra, norm, curve, t);
      const double m = ep.residual.cwiseAbs().maxCoeff();
      r.residuals.emplace_back(m);
      r.sample_errors.emplace_back();
      r.max_residual = std::max(r.max_residual, m);
      r.richardson_gap = std::max(r.richardson_gap, ep.richardson_gap);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Domain && e.code() != ErrorCode::Numeric) throw;
      r.residuals.emplace_back(std::nullopt);
      r.sample_errors.emplace_back(e.what());
      all_ok = false;
    }
  }
  r.richardson_ok = r.richardson_gap <= kRichardsonThreshold;
  r.passed = all_ok && r.max_residual <= tol;
  return r;
}

ResidualReport is_geodesic(const HomogeneousModel& model, const ExpProductCurve& curve, double t0,
                           double t1, int samples, double tol) {
  require(model.decomposition().trivial_isotropy(), ErrorCode::InvalidArgument,
          "curve-level certification needs a Lie group model (h = 0)");
  return is_geodesic(model.algebra(), model.norm(), curve, t0, t1, samples, tol);
}

TwoStepFactors two_step_factors(const LieVector& v0, const ReductiveDecomposition& d, double lambda) {
  require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::InvalidArgument, "lambda must be positive");
  require(v0.size() == d.dim(), ErrorCode::InvalidArgument, "v0 has the wrong dimension");
  const LieVector v2 = project(d, v0, Part::m2);
  const LieVector rest = v0 - v2;  // v_1 plus any h part
  return {rest + lambda * v2, (1.0 - lambda) * v2, v0, lambda};
}

LieVector euler_arnold_rhs(const LieAlgebra& algebra, const MinkowskiNorm& norm, const LieVector& v) {
  const int n = algebra.dim();
  LieVector rhs(n);
  for (int k = 0; k < n; ++k) rhs(k) = legendre(norm, v, bracket(algebra, v, algebra.basis_vector(k)));
  // d/dt g_v(v, w) = g_v(v', w) + 2 C_v(v, v', w), and the Cartan term vanishes.
  const Matrix g = fundamental_tensor(norm, v).gram;
  Eigen::LDLT<Matrix> ldlt(g);
  require(ldlt.info() == Eigen::Success && ldlt.isPositive(), ErrorCode::Numeric,
          "fundamental tensor is singular along the trajectory");
  return ldlt.solve(rhs);
}

Trajectory euler_arnold_integrate(const LieAlgebra& algebra, const MinkowskiNorm& norm,
                                  const LieVector& v0, double t0, double t1, int steps) {
  require(steps >= 1, ErrorCode::InvalidArgument, "need at least one step");
  require(v0.size() == algebra.dim(), ErrorCode::InvalidArgument, "v0 has the wrong dimension");
  const double h = (t1 - t0) / steps;
  Trajectory out;
  out.t.reserve(static_cast<size_t>(steps) + 1);
  out.v.reserve(static_cast<size_t>(steps) + 1);
  LieVector v = v0;
  out.t.push_back(t0);
  out.v.push_back(v);
  auto f = [&](const LieVector& x) { return euler_arnold_rhs(algebra, norm, x); };
  for (int i = 0; i < steps; ++i) {
    const LieVector k1 = f(v);
    const LieVector k2 = f(v + 0.5 * h * k1);
    const LieVector k3 = f(v + 0.5 * h * k2);
    const LieVector k4 = f(v + h * k3);
    v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.t.push_back(t0 + (i + 1) * h);
    out.v.push_back(v);
  }
  return out;
}

ExpProductCurve navigation_curve(const LieAlgebra& algebra, const LieVector& W0, const LieVector& x,
                                 const LieVector& y) {
  require(W0.size() == algebra.dim(), ErrorCode::InvalidArgument, "W0 has the wrong dimension");
  const double central = linalg::max_abs(ad_matrix(algebra, W0));
  require(central <= 1e-10, ErrorCode::Hypothesis, "W0 is not central");
  ExpProductCurve collapsed({W0 + x, y});
  const ExpProductCurve full({W0, x, y});
  for (int i = 0; i <= 10; ++i) {
    const double t = 0.1 * i;
    const double gap = (body_velocity(algebra, collapsed, t) - body_velocity(algebra, full, t))
                           .cwiseAbs()
                           .maxCoeff();
    require(gap <= 1e-10, ErrorCode::Numeric, "two- and three-factor navigation curves disagree");
  }
  return collapsed;
}

GoScanSummary go_scan(const HomogeneousModel& model, double lambda, int trials, double tol,
                      std::uint64_t seed, const GoScanOptions& options) {
  require(trials >= 1, ErrorCode::InvalidArgument, "go_scan needs at least one trial");
  require(model.decomposition().trivial_isotropy(), ErrorCode::InvalidArgument,
          "curve-level certification needs a Lie group model (h = 0)");
  const DeformationResult deformed = deform_model(model, lambda);
  const HomogeneousModel& target = deformed.model;
  const MinkowskiNorm riemannian = MinkowskiNorm::riemannian(target.ip());
  const bool finsler = target.norm().kind() != NormKind::riemannian;

  GoScanSummary out;
  out.lambda = lambda;
  out.trials = trials;
  out.tolerance = tol;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const int n = model.dim();
  int passed = 0;
  for (int trial = 0; trial < trials; ++trial) {
    LieVector v(n);
    int guard = 0;
    do {
      for (int i = 0; i < n; ++i) v(i) = normal(rng);
      require(++guard < 10000, ErrorCode::Numeric, "go_scan: no regular initial velocity found");
    } while (!is_strongly_convex(target.norm(), v));
    v /= norm_value(target.norm(), v);

    GoScanTrial result{v, two_step_factors(v, model.decomposition(), lambda), 0.0, 0.0, 0.0, false};
    const ExpProductCurve curve({result.factors.x, result.factors.y});
    const ResidualReport report =
        is_geodesic(target.algebra(), target.norm(), curve, options.t0, options.t1, options.samples, tol);
    result.residual = report.max_residual;
    result.passed = report.passed;
    if (finsler) {
      const ResidualReport rr =
          is_geodesic(target.algebra(), riemannian, curve, options.t0, options.t1, options.samples, tol);
      result.riemannian_residual = rr.max_residual;
      result.passed = result.passed && rr.passed;
    } else {
      result.riemannian_residual = report.max_residual;
    }
    if (options.with_oracle) {
      const int steps = std::max(1, static_cast<int>(std::lround((options.t1 - options.t0) / options.oracle_step)));
      const Trajectory traj =
          euler_arnold_integrate(target.algebra(), target.norm(), v, options.t0, options.t1, steps);
      for (size_t i = 0; i < traj.t.size(); ++i)
        result.oracle_deviation =
            std::max(result.oracle_deviation,
                     (traj.v[i] - body_velocity(target.algebra(), curve, traj.t[i])).cwiseAbs().maxCoeff());
    }
    out.worst_residual = std::max(out.worst_residual, result.residual);
    out.worst_riemannian_residual = std::max(out.worst_riemannian_residual, result.riemannian_residual);
    out.worst_oracle_deviation = std::max(out.worst_oracle_deviation, result.oracle_deviation);
    if (result.passed) ++passed;
    out.results.push_back(std::move(result));
  }
  out.pass_fraction = static_cast<double>(passed) / trials;
  return out;
}

}  // namespace finslab
