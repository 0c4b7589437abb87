#pragma once

#include "finslab/homogeneity.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace finslab {

/// t -> exp(t a_1) ... exp(t a_k), through the identity at t = 0.
class ExpProductCurve {
 public:
  explicit ExpProductCurve(std::vector<LieVector> factors);

  const std::vector<LieVector>& factors() const { return factors_; }
  int dim() const { return static_cast<int>(factors_.front().size()); }
  size_t size() const { return factors_.size(); }

 private:
  std::vector<LieVector> factors_;
};

/// Left logarithmic derivative g(t)^{-1} g'(t):
/// sum_i (prod_{j=k..i+1} exp(-t ad_{a_j})) a_i.
LieVector body_velocity(const LieAlgebra& algebra, const ExpProductCurve& curve, double t);

/// Closed form for k <= 3, central differences of body_velocity otherwise.
LieVector body_acceleration(const LieAlgebra& algebra, const ExpProductCurve& curve, double t);
LieVector body_acceleration_closed_form(const LieAlgebra& algebra, const ExpProductCurve& curve,
                                        double t);
/// Five-point stencil with step 1e-4 * max(1, |t|).
LieVector body_acceleration_fd(const LieAlgebra& algebra, const ExpProductCurve& curve, double t);

/// g_v(v, e_k) for every basis vector e_k.
LieVector legendre_covector(const MinkowskiNorm& norm, const LieVector& v);

inline constexpr double kStencilStep = 1e-4;
inline constexpr double kRichardsonThreshold = 1e-6;

struct EulerPoincare {
  LieVector residual;     // per basis covector
  double richardson_gap;  // |D_h - D_{h/2}| over components
};

/// d/dt g_v(v, w) - g_v(v, [v, w]) along the curve's body velocity, for each basis w.
EulerPoincare euler_poincare_residual(const LieAlgebra& algebra, const MinkowskiNorm& norm,
                                      const ExpProductCurve& curve, double t);

struct ResidualReport {
  std::vector<double> grid;
  std::vector<std::optional<double>> residuals;  // nullopt where the sample failed
  std::vector<std::string> sample_errors;        // parallel to grid, empty when fine
  double max_residual = 0.0;
  double tolerance = 0.0;
  double richardson_gap = 0.0;
  bool richardson_ok = true;
  bool passed = false;
};

ResidualReport is_geodesic(const LieAlgebra& algebra, const MinkowskiNorm& norm,
                           const ExpProductCurve& curve, double t0, double t1, int samples,
                           double tol);
/// Curve-level certification is only available for Lie groups (trivial h).
ResidualReport is_geodesic(const HomogeneousModel& model, const ExpProductCurve& curve, double t0,
                           double t1, int samples, double tol);

struct TwoStepFactors {
  LieVector x;
  LieVector y;
  LieVector v0;
  double lambda;
};

/// x = v_1 + lambda v_2, y = (1 - lambda) v_2 where v0 = v_1 + v_2 along m1 + m2.
/// Any h component of v0 is carried by x.
TwoStepFactors two_step_factors(const LieVector& v0, const ReductiveDecomposition& d, double lambda);

struct Trajectory {
  std::vector<double> t;
  std::vector<LieVector> v;
};

/// Classical RK4 for g_v(v', w) = g_v(v, [v, w]).
Trajectory euler_arnold_integrate(const LieAlgebra& algebra, const MinkowskiNorm& norm,
                                  const LieVector& v0, double t0, double t1, int steps);

/// Right-hand side v' of the Euler-Arnold equation.
LieVector euler_arnold_rhs(const LieAlgebra& algebra, const MinkowskiNorm& norm, const LieVector& v);

/// Collapses exp(t W0) exp(t x) exp(t y) to exp(t (W0 + x)) exp(t y). Throws
/// Hypothesis if W0 is not central.
ExpProductCurve navigation_curve(const LieAlgebra& algebra, const LieVector& W0, const LieVector& x,
                                 const LieVector& y);

struct GoScanOptions {
  double t0 = 0.0;
  double t1 = 1.0;
  int samples = 101;
  bool with_oracle = true;
  double oracle_step = 1e-3;
};

struct GoScanTrial {
  LieVector v0;
  TwoStepFactors factors;
  double residual = 0.0;              // under the deformed norm
  double riemannian_residual = 0.0;   // under the deformed inner product
  double oracle_deviation = 0.0;
  bool passed = false;
};

struct GoScanSummary {
  double lambda = 1.0;
  int trials = 0;
  double tolerance = 0.0;
  double pass_fraction = 0.0;
  double worst_residual = 0.0;
  double worst_riemannian_residual = 0.0;
  double worst_oracle_deviation = 0.0;
  std::vector<GoScanTrial> results;
};

/// Random unit initial velocities (unit in the deformed norm, on its regular
/// cone), two-step factors, and certification under the deformed metric.
GoScanSummary go_scan(const HomogeneousModel& model, double lambda, int trials, double tol,
                      std::uint64_t seed, const GoScanOptions& options = {});

}  // namespace finslab
