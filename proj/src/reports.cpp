#include "finslab/reports.hpp"

#include "finslab/catalog.hpp"
#include "finslab/linalg.hpp"

#include <cmath>

namespace finslab::reports {

namespace {

using io::vector_to_json;

double tolerance(const std::string& verb, const Options& o) {
  const double tol = o.tol.value_or(default_tolerance(verb));
  require(tol > 0.0, ErrorCode::InvalidArgument, "tol must be positive");
  return tol;
}

json header(const std::string& verb, const Subject& s, const Options& o, double tol) {
  return {{"verb", verb},
          {"source", s.source},
          {"algebra", s.model.algebra().name()},
          {"norm", to_string(s.model.norm().kind())},
          {"seed", o.seed},
          {"tolerance", tol}};
}

Outcome finish(json report, bool passed) {
  report["verdict"] = passed ? "pass" : "fail";
  return {std::move(report), passed, std::nullopt};
}

double model_lambda(const Subject& s, const Options& o) {
  if (s.model.deformation()) {
    const double rec = s.model.deformation()->lambda;
    require(!o.lambda || *o.lambda == rec, ErrorCode::InvalidArgument,
            "--lambda disagrees with the model's deformation record");
    return rec;
  }
  const double lambda = o.lambda.value_or(1.0);
  require(lambda > 0.0, ErrorCode::InvalidArgument, "lambda must be positive");
  return lambda;
}

json berwald_json(const BerwaldResidual& r) {
  return {{"residual_skew", r.skew}, {"residual_orth", r.orth}};
}

void require_samples(const Options& o) {
  require(o.samples >= 2, ErrorCode::InvalidArgument, "samples must be at least 2");
  require(o.t1 > o.t0, ErrorCode::InvalidArgument, "t1 must exceed t0");
}

}  // namespace

double default_tolerance(const std::string& verb) {
  if (verb == "check" || verb == "berwald") return 1e-12;
  if (verb == "natred" || verb == "geovec") return 1e-10;
  return 1e-6;
}

json residual_report_json(const ResidualReport& r, std::uint64_t seed) {
  json residuals = json::array();
  for (const auto& v : r.residuals) residuals.push_back(v ? json(*v) : json(nullptr));
  json out{{"grid", r.grid},
           {"residuals", residuals},
           {"max_residual", r.max_residual},
           {"tolerance", r.tolerance},
           {"richardson_gap", r.richardson_gap},
           {"richardson_ok", r.richardson_ok},
           {"verdict", r.passed ? "pass" : "fail"},
           {"seed", seed}};
  json errors = json::array();
  for (size_t i = 0; i < r.sample_errors.size(); ++i)
    if (!r.sample_errors[i].empty()) errors.push_back({{"t", r.grid[i]}, {"error", r.sample_errors[i]}});
  if (!errors.empty()) out["sample_errors"] = errors;
  return out;
}

Outcome run_check(const Subject& s, const Options& o) {
  const double tol = tolerance("check", o);
  const auto& m = s.model;
  const auto& a = m.algebra();
  json rep = header("check", s, o, tol);

  const AlgebraReport alg = validate_algebra(a);
  rep["algebra_check"] = {{"antisymmetry", alg.antisymmetry}, {"jacobi", alg.jacobi}};
  bool ok = alg.antisymmetry <= tol && alg.jacobi <= tol;

  if (m.realization()) {
    const double r = realization_residual(a, *m.realization());
    rep["realization_residual"] = r;
    ok = ok && r <= tol;
  }
  const DecompositionReport d = check_decomposition(a, m.decomposition(), m.ip());
  rep["decomposition"] = {{"h_closed", d.h_closed},
                          {"h_m_bracket", d.h_m_bracket},
                          {"h_m1_bracket", d.h_m1_bracket},
                          {"h_m2_bracket", d.h_m2_bracket},
                          {"m1_m2_orthogonality", d.m1_m2_orthogonality},
                          {"h_m_orthogonality", d.h_m_orthogonality},
                          {"m1_m2_bracket_in_m1", d.m1_m2_bracket_in_m1},
                          {"m1_m2_bracket_in_m2", d.m1_m2_bracket_in_m2},
                          {"projection_idempotence", d.projection_idempotence},
                          {"projection_sum", d.projection_sum}};
  ok = ok && d.h_closed <= tol && d.h_m_bracket <= tol && d.m1_m2_orthogonality <= tol &&
       d.projection_idempotence <= tol && d.projection_sum <= tol;

  const int n = a.dim();
  const double full = ad_invariance_residual(a, m.ip(), Matrix::Identity(n, n));
  const auto& h = m.decomposition().basis(Part::h);
  const double over_h = h.cols() > 0 ? ad_invariance_residual(a, m.ip(), h) : 0.0;
  rep["ad_invariance"] = {{"over_g", full}, {"over_h", over_h}, {"bi_invariant", full <= 1e-10}};
  ok = ok && over_h <= 1e-10;

  const auto& norm = m.norm();
  json nj{{"kind", to_string(norm.kind())}};
  if (norm.kind() == NormKind::alpha_beta) {
    const auto& ab = norm.as<AlphaBetaNorm>();
    const double b = ab.ip.norm(ab.X);
    nj["x_norm"] = b;
    nj["b0"] = std::isfinite(ab.phi.b0()) ? json(ab.phi.b0()) : json("inf");
    if (ab.phi.kind() != PhiKind::kropina) {
      const PhiReport reg = phi_regularity(ab.phi, b, 201);
      const PhiReport pos = f_positivity(ab.phi, b, 201);
      nj["phi_regularity"] = {{"passed", reg.passed}, {"minimum", reg.minimum}, {"argmin", reg.argmin}};
      nj["f_positivity"] = {{"passed", pos.passed}, {"minimum", pos.minimum}, {"argmin", pos.argmin}};
      ok = ok && reg.passed && pos.passed;
    }
  } else if (norm.kind() == NormKind::cubic) {
    const auto& c = norm.as<CubicNorm>();
    const double unit = std::sqrt(c.b.dot(c.ip.gram().ldlt().solve(c.b)));
    nj["b_dual_norm"] = unit;
    ok = ok && std::abs(unit - 1.0) <= 1e-12;
  } else if (norm.kind() == NormKind::navigation) {
    const auto& nav = norm.as<NavigationNorm>();
    nj["base"] = to_string(nav.base->kind());
    nj["base_of_minus_W"] = norm_value(*nav.base, -nav.W);
  }
  rep["norm_check"] = nj;

  if (s.expected) {
    const auto actual = evaluate_verdicts(m);
    rep["verdicts"] = actual;
    rep["expected_verdicts"] = *s.expected;
    rep["expected_verdicts_match"] = actual == *s.expected;
    ok = ok && actual == *s.expected;
  }
  return finish(std::move(rep), ok);
}

Outcome run_berwald(const Subject& s, const std::optional<LieVector>& X, const Options& o) {
  const double tol = tolerance("berwald", o);
  const auto& m = s.model;
  json rep = header("berwald", s, o, tol);
  BerwaldResidual r;
  if (X) {
    rep["X"] = vector_to_json(*X);
    rep["X_source"] = "command line";
    r = berwald_conditions(m.algebra(), m.ip(), m.decomposition(), *X);
  } else if (m.norm().kind() == NormKind::alpha_beta) {
    rep["X"] = vector_to_json(m.norm().as<AlphaBetaNorm>().X);
    rep["X_source"] = "alpha_beta norm";
    r = berwald_test_alphabeta(m);
    if (m.norm().as<AlphaBetaNorm>().phi.kind() == PhiKind::randers)
      rep["douglas_randers_orthogonality"] = douglas_randers_orthogonality(m);
  } else if (m.norm().kind() == NormKind::cubic) {
    rep["X"] = vector_to_json(m.norm().as<CubicNorm>().dual_vector());
    rep["X_source"] = "cubic norm";
    r = berwald_test_cubic(m);
  } else {
    require(m.norm().kind() == NormKind::riemannian, ErrorCode::InvalidArgument,
            "berwald needs an (alpha, beta), cubic or Riemannian norm, or --X");
    rep["X"] = vector_to_json(LieVector::Zero(m.dim()));
    rep["X_source"] = "riemannian (X = 0)";
  }
  rep.update(berwald_json(r));
  return finish(std::move(rep), r.holds(tol));
}

Outcome run_natred(const Subject& s, const Options& o) {
  const double tol = tolerance("natred", o);
  json rep = header("natred", s, o, tol);
  const double r = naturally_reductive_residual(s.model);
  rep["residual"] = r;
  return finish(std::move(rep), r <= tol);
}

Outcome run_geovec(const Subject& s, const std::optional<LieVector>& y, const Options& o) {
  const double tol = tolerance("geovec", o);
  json rep = header("geovec", s, o, tol);
  if (y) {
    const LieVector r = geodesic_vector_residual(s.model, *y);
    const double worst = r.cwiseAbs().maxCoeff();
    rep["y"] = vector_to_json(*y);
    rep["residual"] = vector_to_json(r);
    rep["max_residual"] = worst;
    return finish(std::move(rep), worst <= tol);
  }
  require(o.trials >= 0, ErrorCode::InvalidArgument, "trials must be non-negative");
  const auto found = find_geodesic_vectors(s.model, o.trials, tol, o.seed);
  json list = json::array();
  for (const auto& v : found)
    list.push_back({{"y", vector_to_json(v)},
                    {"max_residual", geodesic_vector_residual(s.model, v).cwiseAbs().maxCoeff()}});
  rep["seeds"] = o.trials;
  rep["geodesic_vectors"] = list;
  rep["count"] = found.size();
  return finish(std::move(rep), !found.empty() || o.trials == 0);
}

Outcome run_deform(const Subject& s, const Options& o) {
  require(o.lambda.has_value(), ErrorCode::InvalidArgument, "deform needs --lambda");
  const double tol = tolerance("berwald", o);
  json rep = header("deform", s, o, tol);
  const DeformationResult d = deform_model(s.model, *o.lambda);
  rep["lambda"] = d.lambda;
  rep["regime"] = to_string(d.regime);
  if (d.X_lambda) {
    rep["X_lambda"] = vector_to_json(*d.X_lambda);
    rep["x_norm"] = d.x_norm;
    rep["x_norm_squared"] = d.x_norm_squared;
  }
  rep["notes"] = d.notes;
  bool ok = true;
  const auto kind = d.model.norm().kind();
  if (kind == NormKind::alpha_beta || kind == NormKind::cubic) {
    const BerwaldResidual r =
        kind == NormKind::alpha_beta ? berwald_test_alphabeta(d.model) : berwald_test_cubic(d.model);
    rep["berwald"] = berwald_json(r);
    ok = r.holds(tol);
  }
  if (kind == NormKind::cubic) {
    const auto& c = d.model.norm().as<CubicNorm>();
    const double unit = std::sqrt(c.b.dot(c.ip.gram().ldlt().solve(c.b)));
    rep["b_dual_norm"] = unit;
    ok = ok && std::abs(unit - 1.0) <= 1e-12;
  }
  rep["model"] = io::model_to_json(d.model);
  Outcome out = finish(std::move(rep), ok);
  out.model = d.model;
  return out;
}

Outcome run_two_step(const Subject& s, const LieVector& v0, const Options& o) {
  const double tol = tolerance("two-step", o);
  require_samples(o);
  const auto& m = s.model;
  require(v0.size() == m.dim(), ErrorCode::InvalidArgument, "v0 has the wrong dimension");
  require(m.decomposition().trivial_isotropy(), ErrorCode::InvalidArgument,
          "curve-level certification needs a Lie group model (h = 0)");
  require_regular(m.norm(), v0);
  const double lambda = model_lambda(s, o);
  json rep = header("two-step", s, o, tol);
  const TwoStepFactors f = two_step_factors(v0, m.decomposition(), lambda);
  const ExpProductCurve curve({f.x, f.y});
  rep["lambda"] = lambda;
  rep["v0"] = vector_to_json(v0);
  rep["factors"] = io::curve_to_json(curve)["factors"];

  const ResidualReport finsler = is_geodesic(m, curve, o.t0, o.t1, o.samples, tol);
  rep["certification"] = residual_report_json(finsler, o.seed);
  bool ok = finsler.passed;
  if (m.norm().kind() != NormKind::riemannian) {
    const ResidualReport riem = is_geodesic(m.riemannian(), curve, o.t0, o.t1, o.samples, tol);
    rep["riemannian_certification"] = residual_report_json(riem, o.seed);
    ok = ok && riem.passed;
  }
  const int steps = std::max(1, static_cast<int>(std::lround((o.t1 - o.t0) / 1e-3)));
  const Trajectory traj = euler_arnold_integrate(m.algebra(), m.norm(), v0, o.t0, o.t1, steps);
  double dev = 0.0;
  for (size_t i = 0; i < traj.t.size(); ++i)
    dev = std::max(dev, (traj.v[i] - body_velocity(m.algebra(), curve, traj.t[i])).cwiseAbs().maxCoeff());
  rep["oracle"] = {{"steps", steps}, {"max_deviation", dev}};
  return finish(std::move(rep), ok);
}

Outcome run_verify_curve(const Subject& s, const ExpProductCurve& curve, const Options& o) {
  const double tol = tolerance("verify-curve", o);
  require_samples(o);
  json rep = header("verify-curve", s, o, tol);
  rep["factors"] = io::curve_to_json(curve)["factors"];
  const ResidualReport r = is_geodesic(s.model, curve, o.t0, o.t1, o.samples, tol);
  rep.update(residual_report_json(r, o.seed));
  return finish(std::move(rep), r.passed);
}

Outcome run_navigation(const Subject& s, const LieVector& W0, const LieVector& v0, const Options& o) {
  const double tol = tolerance("navigation", o);
  require_samples(o);
  const auto& m = s.model;
  require(m.decomposition().trivial_isotropy(), ErrorCode::InvalidArgument,
          "curve-level certification needs a Lie group model (h = 0)");
  require(v0.size() == m.dim() && W0.size() == m.dim(), ErrorCode::InvalidArgument,
          "vector has the wrong dimension");
  require_regular(m.norm(), v0);
  const double lambda = model_lambda(s, o);
  json rep = header("navigation", s, o, tol);

  // Navigation turns unit-speed geodesics of the base into geodesics of the new norm.
  const LieVector unit = v0 / norm_value(m.norm(), v0);
  const TwoStepFactors f = two_step_factors(unit, m.decomposition(), lambda);
  const ExpProductCurve base_curve({f.x, f.y});
  const ExpProductCurve nav_curve = navigation_curve(m.algebra(), W0, f.x, f.y);
  const HomogeneousModel nav_model = m.with_norm(MinkowskiNorm::navigation(m.norm(), W0));

  rep["lambda"] = lambda;
  rep["W0"] = vector_to_json(W0);
  rep["v0_unit"] = vector_to_json(unit);
  rep["base_factors"] = io::curve_to_json(base_curve)["factors"];
  rep["navigation_factors"] = io::curve_to_json(nav_curve)["factors"];
  const ResidualReport base = is_geodesic(m, base_curve, o.t0, o.t1, o.samples, tol);
  const ResidualReport nav = is_geodesic(nav_model, nav_curve, o.t0, o.t1, o.samples, tol);
  rep["base_certification"] = residual_report_json(base, o.seed);
  rep["navigation_certification"] = residual_report_json(nav, o.seed);
  return finish(std::move(rep), base.passed && nav.passed);
}

Outcome run_go_scan(const Subject& s, const Options& o) {
  const double tol = tolerance("go-scan", o);
  require_samples(o);
  require(o.lambda.has_value(), ErrorCode::InvalidArgument, "go-scan needs --lambda");
  json rep = header("go-scan", s, o, tol);
  GoScanOptions g;
  g.t0 = o.t0;
  g.t1 = o.t1;
  g.samples = o.samples;
  const GoScanSummary sum = go_scan(s.model, *o.lambda, o.trials, tol, o.seed, g);
  json trials = json::array();
  for (const auto& t : sum.results)
    trials.push_back({{"v0", vector_to_json(t.v0)},
                      {"x", vector_to_json(t.factors.x)},
                      {"y", vector_to_json(t.factors.y)},
                      {"max_residual", t.residual},
                      {"riemannian_max_residual", t.riemannian_residual},
                      {"oracle_deviation", t.oracle_deviation},
                      {"verdict", t.passed ? "pass" : "fail"}});
  rep["lambda"] = sum.lambda;
  rep["trials"] = sum.trials;
  rep["samples"] = o.samples;
  rep["pass_fraction"] = sum.pass_fraction;
  rep["worst_residual"] = sum.worst_residual;
  rep["worst_riemannian_residual"] = sum.worst_riemannian_residual;
  rep["worst_oracle_deviation"] = sum.worst_oracle_deviation;
  rep["results"] = trials;
  return finish(std::move(rep), sum.pass_fraction == 1.0);
}

}  // namespace finslab::reports
