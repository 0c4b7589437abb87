#include "finslab/homogeneity.hpp"

#include "finslab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace finslab {

std::string to_string(DeformationRegime regime) {
  switch (regime) {
    case DeformationRegime::identity: return "identity";
    case DeformationRegime::lambda_below_one: return "lambda_below_one";
    case DeformationRegime::lambda_above_one: return "lambda_above_one";
  }
  return "?";
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double outside_m(const ReductiveDecomposition& d, const InnerProduct& ip, const LieVector& v) {
  return ip.norm(v - project(d, v, Part::m));
}

/// Vector data attached to a norm that must live in m.
std::optional<LieVector> norm_vector(const MinkowskiNorm& norm) {
  switch (norm.kind()) {
    case NormKind::alpha_beta: return norm.as<AlphaBetaNorm>().X;
    case NormKind::cubic: return norm.as<CubicNorm>().dual_vector();
    case NormKind::navigation: return norm.as<NavigationNorm>().W;
    case NormKind::riemannian: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

HomogeneousModel::HomogeneousModel(LieAlgebra algebra, std::optional<MatrixRealization> realization,
                                   InnerProduct ip, ReductiveDecomposition decomposition,
                                   MinkowskiNorm norm, std::optional<DeformationRecord> deformation)
    : algebra_(std::move(algebra)), realization_(std::move(realization)), ip_(std::move(ip)),
      decomposition_(std::move(decomposition)), norm_(std::move(norm)),
      deformation_(std::move(deformation)) {
  const int n = algebra_.dim();
  require(ip_.dim() == n && decomposition_.dim() == n && norm_.dim() == n,
          ErrorCode::InvalidArgument, "model components have inconsistent dimensions");
  const AlgebraReport valid = validate_algebra(algebra_);
  require(valid.passed, ErrorCode::InvalidArgument,
          "structure constants fail antisymmetry/Jacobi (antisymmetry " + fmt(valid.antisymmetry) +
              ", jacobi " + fmt(valid.jacobi) + ")");
  if (realization_) {
    const double r = realization_residual(algebra_, *realization_);
    require(r <= 1e-10, ErrorCode::InvalidArgument,
            "matrix realization does not reproduce the structure constants (residual " + fmt(r) + ")");
  }
  const Matrix& pm = decomposition_.projector(Part::m);
  const double gap =
      linalg::max_abs(pm.transpose() * (norm_.inner_product().gram() - ip_.gram()) * pm);
  require(gap <= 1e-10, ErrorCode::InvalidArgument,
          "norm inner product differs from the model inner product on m");
  if (auto v = norm_vector(norm_))
    require(outside_m(decomposition_, ip_, *v) <= 1e-10, ErrorCode::InvalidArgument,
            "the norm's vector data does not lie in m");
}

HomogeneousModel HomogeneousModel::with_norm(MinkowskiNorm norm) const {
  return HomogeneousModel(algebra_, realization_, ip_, decomposition_, std::move(norm), deformation_);
}

HomogeneousModel HomogeneousModel::riemannian() const {
  return with_norm(MinkowskiNorm::riemannian(ip_));
}

LieVector geodesic_vector_residual(const HomogeneousModel& model, const LieVector& y) {
  const auto& d = model.decomposition();
  const LieVector ym = project(d, y, Part::m);
  require(ym.norm() > 0.0, ErrorCode::InvalidArgument, "geodesic vector test needs y_m != 0");
  const int n = model.dim();
  LieVector out(n);
  for (int k = 0; k < n; ++k) {
    const LieVector u = project(d, bracket(model.algebra(), y, model.algebra().basis_vector(k)), Part::m);
    out(k) = legendre(model.norm(), ym, u);
  }
  return out;
}

namespace {

bool lex_greater(const LieVector& a, const LieVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) > b(i)) return true;
    if (a(i) < b(i)) return false;
  }
  return false;
}

}  // namespace

std::vector<LieVector> find_geodesic_vectors(const HomogeneousModel& model, int seed_count,
                                             double tol, std::uint64_t seed) {
  std::vector<LieVector> found;
  if (seed_count <= 0) return found;
  const Matrix& mb = model.decomposition().basis(Part::m);
  const Eigen::Index p = mb.cols();
  if (p == 0) return found;
  const Matrix gm = mb.transpose() * model.ip().gram() * mb;
  auto unit = [&](const LieVector& c) -> LieVector { return c / std::sqrt(c.dot(gm * c)); };
  auto residual = [&](const LieVector& c) -> std::optional<LieVector> {
    const LieVector y = mb * c;
    if (!is_regular(model.norm(), y)) return std::nullopt;
    return geodesic_vector_residual(model, y);
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int s = 0; s < seed_count; ++s) {
    LieVector c(p);
    for (Eigen::Index i = 0; i < p; ++i) c(i) = normal(rng);
    c = unit(c);
    auto r = residual(c);
    if (!r) continue;
    bool converged = r->cwiseAbs().maxCoeff() <= tol;
    for (int it = 0; it < 100 && !converged && p > 1; ++it) {
      constexpr double h = 1e-7;
      Matrix jac(r->size(), p);
      bool ok = true;
      for (Eigen::Index j = 0; j < p && ok; ++j) {
        LieVector step = LieVector::Zero(p);
        step(j) = h;
        auto plus = residual(c + step), minus = residual(c - step);
        if (!plus || !minus) ok = false;
        else jac.col(j) = (*plus - *minus) / (2.0 * h);
      }
      if (!ok) break;
      const Matrix tangent = linalg::null_space((gm * c).transpose());
      const Matrix jt = jac * tangent;
      const LieVector delta =
          -(jt.completeOrthogonalDecomposition().pseudoInverse() * *r);
      double damping = 1.0;
      const double before = r->norm();
      std::optional<LieVector> next_r;
      LieVector next_c;
      for (int tries = 0; tries < 30; ++tries) {
        next_c = unit(c + damping * tangent * delta);
        next_r = residual(next_c);
        if (next_r && next_r->norm() <= before) break;
        damping *= 0.5;
      }
      if (!next_r) break;
      c = next_c;
      r = next_r;
      converged = r->cwiseAbs().maxCoeff() <= tol;
    }
    if (!converged) continue;

    LieVector y = mb * c;
    y /= model.ip().norm(y);
    bool duplicate = false;
    for (auto& f : found) {
      if ((f - y).norm() < 1e-6 || (f + y).norm() < 1e-6) {
        duplicate = true;
        if (lex_greater(y, f)) f = y;
        break;
      }
    }
    if (!duplicate) found.push_back(y);
  }
  std::sort(found.begin(), found.end(), lex_greater);
  return found;
}

double naturally_reductive_residual(const HomogeneousModel& model) {
  const auto& d = model.decomposition();
  const auto& a = model.algebra();
  const InnerProduct& ip = model.ip();
  const Matrix& m = d.basis(Part::m);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.cols(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const LieVector xy = project(d, bracket(a, m.col(i), m.col(j)), Part::m);
      for (Eigen::Index k = 0; k < m.cols(); ++k) {
        const LieVector xz = project(d, bracket(a, m.col(i), m.col(k)), Part::m);
        worst = std::max(worst, std::abs(ip.dot(xy, m.col(k)) + ip.dot(m.col(j), xz)));
      }
    }
  return worst;
}

BerwaldResidual berwald_conditions(const LieAlgebra& algebra, const InnerProduct& ip,
                                   const ReductiveDecomposition& d, const LieVector& X) {
  require(X.size() == algebra.dim(), ErrorCode::InvalidArgument, "X has the wrong dimension");
  const Matrix& m = d.basis(Part::m);
  BerwaldResidual r;
  for (Eigen::Index i = 0; i < m.cols(); ++i) {
    const LieVector y = m.col(i);
    const LieVector yx = project(d, bracket(algebra, y, X), Part::m);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const LieVector z = m.col(j);
      const LieVector zx = project(d, bracket(algebra, z, X), Part::m);
      r.skew = std::max(r.skew, std::abs(ip.dot(yx, z) + ip.dot(zx, y)));
      r.orth = std::max(r.orth, std::abs(ip.dot(project(d, bracket(algebra, y, z), Part::m), X)));
    }
  }
  return r;
}

BerwaldResidual berwald_test_alphabeta(const HomogeneousModel& model) {
  const auto& ab = model.norm().as<AlphaBetaNorm>();
  return berwald_conditions(model.algebra(), ab.ip, model.decomposition(), ab.X);
}

BerwaldResidual berwald_test_cubic(const HomogeneousModel& model) {
  const auto& cubic = model.norm().as<CubicNorm>();
  return berwald_conditions(model.algebra(), cubic.ip, model.decomposition(), cubic.dual_vector());
}

double douglas_randers_orthogonality(const HomogeneousModel& model) {
  const auto& ab = model.norm().as<AlphaBetaNorm>();
  require(ab.phi.kind() == PhiKind::randers, ErrorCode::InvalidArgument,
          "Douglas orthogonality test applies to Randers data only");
  return berwald_conditions(model.algebra(), ab.ip, model.decomposition(), ab.X).orth;
}

InnerProduct deform_inner_product(const InnerProduct& ip, const ReductiveDecomposition& d,
                                  double lambda) {
  require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::InvalidArgument, "lambda must be positive");
  const Matrix& g = ip.gram();
  const Matrix& p1 = d.projector(Part::m1);
  const Matrix& p2 = d.projector(Part::m2);
  double orth = 0.0;
  const Matrix& m1 = d.basis(Part::m1);
  const Matrix& m2 = d.basis(Part::m2);
  if (m1.cols() > 0 && m2.cols() > 0) orth = linalg::max_abs(m1.transpose() * g * m2);
  require(orth <= kHypothesisTolerance, ErrorCode::Hypothesis,
          "m1 and m2 are not orthogonal (residual " + fmt(orth) + ")");
  if (lambda == 1.0) return ip;
  const Matrix& ph = d.projector(Part::h);
  const Matrix& pm = d.projector(Part::m);
  Matrix out = ph.transpose() * g * ph + ph.transpose() * g * pm + pm.transpose() * g * ph +
               p1.transpose() * g * p1 + lambda * p2.transpose() * g * p2;
  return InnerProduct(0.5 * (out + out.transpose()));
}

DecompositionReport require_deformation_hypotheses(const HomogeneousModel& model,
                                                   const std::optional<LieVector>& X) {
  require(!model.deformation(), ErrorCode::Hypothesis, "model is already a deformation");
  const auto report = check_decomposition(model.algebra(), model.decomposition(), model.ip());
  require(report.m1_m2_orthogonality <= kHypothesisTolerance, ErrorCode::Hypothesis,
          "m1 and m2 are not orthogonal (residual " + fmt(report.m1_m2_orthogonality) + ")");
  require(report.m1_m2_bracket_in_m1 <= kHypothesisTolerance, ErrorCode::Hypothesis,
          "[m1, m2] is not contained in m1 (residual " + fmt(report.m1_m2_bracket_in_m1) + ")");
  require(report.h_m1_bracket <= kHypothesisTolerance && report.h_m2_bracket <= kHypothesisTolerance,
          ErrorCode::Hypothesis, "m1 + m2 is not an ad(h)-invariant splitting");
  if (X) {
    const LieVector off = *X - project(model.decomposition(), *X, Part::m2);
    require(model.ip().norm(off) <= 1e-10, ErrorCode::Hypothesis,
            "X does not lie in m2 (off-m2 part " + fmt(model.ip().norm(off)) + ")");
  }
  return report;
}

namespace {

DeformationRegime regime_of(double lambda) {
  if (lambda == 1.0) return DeformationRegime::identity;
  return lambda < 1.0 ? DeformationRegime::lambda_below_one : DeformationRegime::lambda_above_one;
}

HomogeneousModel rebuild(const HomogeneousModel& model, InnerProduct ip, MinkowskiNorm norm,
                         double lambda) {
  return HomogeneousModel(model.algebra(), model.realization(), std::move(ip),
                          model.decomposition(), std::move(norm),
                          DeformationRecord{lambda, regime_of(lambda)});
}

}  // namespace

DeformationResult deform_riemannian(const HomogeneousModel& model, double lambda) {
  require(model.norm().kind() == NormKind::riemannian, ErrorCode::InvalidArgument,
          "deform_riemannian needs a Riemannian norm");
  require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::InvalidArgument, "lambda must be positive");
  require_deformation_hypotheses(model, std::nullopt);
  if (lambda == 1.0) return {lambda, DeformationRegime::identity, model, std::nullopt, 0.0, 0.0, {}};
  InnerProduct ip = deform_inner_product(model.ip(), model.decomposition(), lambda);
  MinkowskiNorm norm = MinkowskiNorm::riemannian(ip);
  return {lambda, regime_of(lambda), rebuild(model, std::move(ip), std::move(norm), lambda),
          std::nullopt, 0.0, 0.0, {}};
}

DeformationResult deform_alphabeta(const HomogeneousModel& model, double lambda) {
  const auto& ab = model.norm().as<AlphaBetaNorm>();
  require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::InvalidArgument, "lambda must be positive");
  require_deformation_hypotheses(model, ab.X);
  if (lambda == 1.0) return {lambda, DeformationRegime::identity, model, ab.X,
                             ab.ip.norm(ab.X), ab.ip.dot(ab.X, ab.X), {}};

  InnerProduct ip = deform_inner_product(model.ip(), model.decomposition(), lambda);
  const DeformationRegime regime = regime_of(lambda);
  // lambda < 1 keeps X; lambda > 1 uses X / sqrt(lambda). Rescaling would also
  // work below 1 but is not what the construction prescribes.
  LieVector x = regime == DeformationRegime::lambda_above_one ? LieVector(ab.X / std::sqrt(lambda)) : ab.X;
  const double norm = ip.norm(x);
  const double squared = ip.dot(x, x);
  std::vector<std::string> notes;
  notes.push_back("regularity enforced as |X_lambda| < b0 (norm, not squared norm)");
  if (ab.phi.kind() != PhiKind::kropina) {
    require(norm < ab.phi.b0(), ErrorCode::Hypothesis,
            "deformed data violates |X_lambda| < b0 (|X_lambda| = " + fmt(norm) + ")");
    if ((squared < ab.phi.b0()) != (norm < ab.phi.b0()))
      notes.push_back("squared-norm and norm conventions disagree against b0");
  }
  if (regime == DeformationRegime::lambda_below_one)
    notes.push_back("X kept unchanged below lambda = 1; X/sqrt(lambda) would also be admissible");
  MinkowskiNorm deformed = MinkowskiNorm::alpha_beta(ip, x, ab.phi);
  return {lambda, regime, rebuild(model, std::move(ip), std::move(deformed), lambda), x, norm,
          squared, std::move(notes)};
}

DeformationResult deform_cubic(const HomogeneousModel& model, double lambda) {
  const auto& cubic = model.norm().as<CubicNorm>();
  require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::InvalidArgument, "lambda must be positive");
  const LieVector X = cubic.dual_vector();
  require_deformation_hypotheses(model, X);
  if (lambda == 1.0) return {lambda, DeformationRegime::identity, model, X, cubic.ip.norm(X),
                             cubic.ip.dot(X, X), {}};
  InnerProduct ip = deform_inner_product(model.ip(), model.decomposition(), lambda);
  const LieVector x = X / std::sqrt(ip.dot(X, X));
  LieVector b = ip.gram() * x;
  MinkowskiNorm deformed = MinkowskiNorm::cubic(ip, std::move(b));
  const double norm = ip.norm(x);
  return {lambda, regime_of(lambda), rebuild(model, std::move(ip), std::move(deformed), lambda), x,
          norm, norm * norm, {}};
}

DeformationResult deform_model(const HomogeneousModel& model, double lambda) {
  switch (model.norm().kind()) {
    case NormKind::riemannian: return deform_riemannian(model, lambda);
    case NormKind::alpha_beta: return deform_alphabeta(model, lambda);
    case NormKind::cubic: return deform_cubic(model, lambda);
    case NormKind::navigation: break;
  }
  fail(ErrorCode::InvalidArgument, "navigation norms have no lambda-deformation");
}

namespace {

/// Least-squares distance of each column of `vs` from span(basis).
double span_residual(const Matrix& basis, const Matrix& vs) {
  if (vs.cols() == 0) return 0.0;
  if (basis.cols() == 0) return vs.colwise().norm().maxCoeff();
  const Matrix q = linalg::column_space(basis);
  return (vs - q * (q.transpose() * vs)).colwise().norm().maxCoeff();
}

}  // namespace

ChainDecomposition chain_decomposition(const LieAlgebra& algebra, const InnerProduct& ip,
                                       const Matrix& k_basis, const Matrix& h_basis) {
  const int n = algebra.dim();
  Matrix k = k_basis.cols() == 0 ? Matrix(n, 0) : k_basis;
  Matrix h = h_basis.cols() == 0 ? Matrix(n, 0) : h_basis;
  require(k.rows() == n && h.rows() == n && ip.dim() == n, ErrorCode::InvalidArgument,
          "chain_decomposition: dimension mismatch");
  ChainResiduals r;
  r.ad_invariance = ad_invariance_residual(algebra, ip, Matrix::Identity(n, n));
  require(r.ad_invariance <= 1e-10, ErrorCode::Hypothesis,
          "inner product is not ad-invariant (residual " + fmt(r.ad_invariance) + ")");
  r.k_subalgebra = subalgebra_residual(algebra, k);
  r.h_subalgebra = subalgebra_residual(algebra, h);
  r.h_in_k = span_residual(k, h);
  require(r.k_subalgebra <= 1e-10, ErrorCode::Hypothesis, "k is not a subalgebra");
  require(r.h_subalgebra <= 1e-10, ErrorCode::Hypothesis, "h is not a subalgebra");
  require(r.h_in_k <= 1e-10, ErrorCode::Hypothesis, "h is not contained in k");

  k = linalg::canonical_basis(k);
  h = linalg::canonical_basis(h);
  Matrix m1 = orthogonal_complement(ip, k);
  Matrix m2 = k;
  if (h.cols() > 0 && k.cols() > 0)
    m2 = linalg::canonical_basis(k * linalg::null_space(h.transpose() * ip.gram() * k));
  ReductiveDecomposition d(h, m1, m2);

  const auto report = check_decomposition(algebra, d, ip);
  r.m1_m2_in_m1 = report.m1_m2_bracket_in_m1;
  r.m1_m2_in_m2 = report.m1_m2_bracket_in_m2;
  for (Eigen::Index i = 0; i < k.cols(); ++i)
    for (Eigen::Index j = 0; j < m1.cols(); ++j) {
      const LieVector b = bracket(algebra, k.col(i), m1.col(j));
      r.k_m1_bracket = std::max(r.k_m1_bracket, ip.norm(b - project(d, b, Part::m1)));
    }
  return {std::move(d), r};
}

EquivalenceReport geodesic_equivalence_check(const HomogeneousModel& model, int samples, double tol,
                                      std::uint64_t seed) {
  const auto& ab = model.norm().as<AlphaBetaNorm>();
  const HomogeneousModel riemannian = model.riemannian();
  const Matrix& mb = model.decomposition().basis(Part::m);
  EquivalenceReport out;
  out.requested = samples;
  out.min_factor = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const int max_attempts = std::max(100, 100 * samples);
  while (static_cast<int>(out.samples.size()) < samples) {
    if (out.attempts >= max_attempts) {
      out.sampler_exhausted = true;
      break;
    }
    ++out.attempts;
    LieVector c(mb.cols());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = normal(rng);
    const LieVector y = mb * c;
    if (!is_regular(model.norm(), y)) continue;
    if (orthogonality_hypothesis_residual(model.algebra(), model.decomposition(), ab.ip, ab.X, y) >
        kOrthogonalityHypothesisTolerance)
      continue;
    const LieVector fin = geodesic_vector_residual(model, y);
    const LieVector riem = geodesic_vector_residual(riemannian, y);
    EquivalenceSample s;
    s.y = y;
    s.finsler_residual = fin.cwiseAbs().maxCoeff();
    s.riemannian_residual = riem.cwiseAbs().maxCoeff();
    const double r = ab.ip.dot(ab.X, y) / ab.ip.norm(y);
    const double p = ab.phi(r);
    s.factor = p * p - p * ab.phi.derivative(r) * r;
    s.agree = (s.finsler_residual <= tol) == (s.riemannian_residual <= tol);
    out.min_factor = std::min(out.min_factor, s.factor);
    out.max_identity_gap = std::max(out.max_identity_gap, (fin - s.factor * riem).cwiseAbs().maxCoeff());
    out.samples.push_back(std::move(s));
  }
  out.all_agree = !out.sampler_exhausted &&
                  std::all_of(out.samples.begin(), out.samples.end(),
                              [](const EquivalenceSample& s) { return s.agree; });
  return out;
}

}  // namespace finslab
