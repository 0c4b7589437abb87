#pragma once

#include "finslab/lie_algebra.hpp"

#include <limits>
#include <memory>
#include <variant>
#include <vector>

namespace finslab {

enum class PhiKind { randers, kropina, identity, polynomial };

std::string to_string(PhiKind kind);

/// The profile function phi of an (alpha, beta)-norm F = alpha * phi(beta / alpha).
class PhiFunction {
 public:
  static PhiFunction randers() { return PhiFunction(PhiKind::randers, {}, 1.0); }
  /// phi(s) = 1/s. Not positive on a symmetric interval; only used on s > 0.
  static PhiFunction kropina() {
    return PhiFunction(PhiKind::kropina, {}, std::numeric_limits<double>::infinity());
  }
  static PhiFunction identity(double b0 = std::numeric_limits<double>::infinity()) {
    return PhiFunction(PhiKind::identity, {}, b0);
  }
  /// sum_k coeffs[k] s^k on (-b0, b0). Throws unless phi > 0 there (sampled).
  static PhiFunction polynomial(std::vector<double> coeffs, double b0);

  PhiKind kind() const { return kind_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double b0() const { return b0_; }

  template <class T>
  T operator()(const T& s) const {
    switch (kind_) {
      case PhiKind::randers: return 1.0 + s;
      case PhiKind::kropina: return 1.0 / s;
      case PhiKind::identity: return T(1.0);
      case PhiKind::polynomial: {
        T acc(0.0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
        return acc;
      }
    }
    return T(1.0);
  }

  double derivative(double s) const;
  double second_derivative(double s) const;

 private:
  PhiFunction(PhiKind kind, std::vector<double> coeffs, double b0)
      : kind_(kind), coeffs_(std::move(coeffs)), b0_(b0) {}

  PhiKind kind_;
  std::vector<double> coeffs_;
  double b0_;
};

struct PhiReport {
  bool passed = false;
  double minimum = 0.0;
  double argmin = 0.0;
};

/// phi(s) - s phi'(s) + (b^2 - s^2) phi''(s) on a uniform grid of [-b, b].
PhiReport phi_regularity(const PhiFunction& phi, double b, int grid_size);
/// f(s) = phi(s) - s phi'(s) on the same kind of grid.
PhiReport f_positivity(const PhiFunction& phi, double b, int grid_size);
/// Max |central difference of phi - phi'| (step 1e-6) and min phi on a grid of (-b0, b0).
struct PhiConsistency {
  double derivative_gap = 0.0;
  double min_value = 0.0;
};
PhiConsistency phi_consistency(const PhiFunction& phi, int grid_size = 41);

class MinkowskiNorm;

enum class NormKind { riemannian, alpha_beta, cubic, navigation };
std::string to_string(NormKind kind);

struct RiemannianNorm {
  InnerProduct ip;
};

/// F = alpha phi(beta/alpha), alpha = sqrt<y,y>, beta = <X,y>.
struct AlphaBetaNorm {
  InnerProduct ip;
  LieVector X;
  PhiFunction phi;
};

/// F = (<y,y> b(y))^(1/3); b is a covector with unit dual norm.
struct CubicNorm {
  InnerProduct ip;
  LieVector b;
  LieVector dual_vector() const;
};

/// F(y) = lambda with base(y/lambda - W) = 1.
struct NavigationNorm {
  std::shared_ptr<const MinkowskiNorm> base;
  LieVector W;
};

/// Invariant Minkowski norm on g (in practice on m) at the origin.
class MinkowskiNorm {
 public:
  using Variant = std::variant<RiemannianNorm, AlphaBetaNorm, CubicNorm, NavigationNorm>;

  static MinkowskiNorm riemannian(InnerProduct ip);
  /// Throws InvalidArgument if |X| >= b0 (kropina exempt).
  static MinkowskiNorm alpha_beta(InnerProduct ip, LieVector X, PhiFunction phi);
  /// Throws InvalidArgument unless the dual norm of b is 1 to 1e-10.
  static MinkowskiNorm cubic(InnerProduct ip, LieVector b);
  /// Throws InvalidArgument unless base(-W) < 1, or base is Riemannian with |W| = 1.
  static MinkowskiNorm navigation(MinkowskiNorm base, LieVector W);

  NormKind kind() const { return static_cast<NormKind>(variant_.index()); }
  const Variant& variant() const { return variant_; }
  int dim() const;
  /// Inner product of the (innermost) Riemannian ingredient.
  const InnerProduct& inner_product() const;

  template <class V>
  const V& as() const {
    const V* p = std::get_if<V>(&variant_);
    require(p != nullptr, ErrorCode::InvalidArgument,
            "norm is a " + to_string(kind()) + " norm, which this operation does not accept");
    return *p;
  }

  /// True for navigation over a Riemannian base with |W| = 1.
  bool kropina_navigation() const;

 private:
  explicit MinkowskiNorm(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

/// Throws Domain if y is zero or outside the regular cone of the norm.
void require_regular(const MinkowskiNorm& norm, const LieVector& y);
bool is_regular(const MinkowskiNorm& norm, const LieVector& y);
/// Regular and the fundamental tensor at y is positive definite. Cubic norms
/// lose convexity on part of their cone.
bool is_strongly_convex(const MinkowskiNorm& norm, const LieVector& y);

double norm_value(const MinkowskiNorm& norm, const LieVector& y);

/// g_y(y, w) = (1/2) d/ds F^2(y + s w) at s = 0.
double legendre(const MinkowskiNorm& norm, const LieVector& y, const LieVector& w);
/// g_y(u, v).
double fundamental_form(const MinkowskiNorm& norm, const LieVector& y, const LieVector& u,
                        const LieVector& v);

struct FundamentalTensor {
  LieVector y;
  Matrix gram;
};

struct CartanTensor {
  LieVector y;
  int n = 0;
  std::vector<double> data;
  double operator()(int i, int j, int k) const { return data[(i * n + j) * n + k]; }
  /// C_y(u, v, w).
  double contract(const LieVector& u, const LieVector& v, const LieVector& w) const;
};

FundamentalTensor fundamental_tensor(const MinkowskiNorm& norm, const LieVector& y);
CartanTensor cartan_tensor(const MinkowskiNorm& norm, const LieVector& y);

struct GyIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double factor = 0.0;  // phi^2 - phi phi' r at r = <X, y_m> / |y_m|
  double r = 0.0;
};

inline constexpr double kOrthogonalityHypothesisTolerance = 1e-9;

/// Evaluates g_{y_m}(y_m, [y,z]_m) both through the fundamental tensor and
/// through the closed form h(y_m, [y,z]_m) (phi^2 - phi phi' r). Throws
/// Hypothesis if X is not orthogonal to [y, m]_m.
GyIdentity alphabeta_gy_identity(const MinkowskiNorm& norm, const LieAlgebra& algebra,
                                 const ReductiveDecomposition& d, const LieVector& y,
                                 const LieVector& z);

/// max over m-basis b of |<X, [y, b]_m>|.
double orthogonality_hypothesis_residual(const LieAlgebra& algebra, const ReductiveDecomposition& d,
                                         const InnerProduct& ip, const LieVector& X,
                                         const LieVector& y);

enum class NavigationKind { randers, kropina };

/// Closed-form navigation norm over a Riemannian base.
double navigation_closed_form(NavigationKind kind, const InnerProduct& ip, const LieVector& W,
                              const LieVector& y);

/// The Randers (alpha + beta) norm equal to navigation over (ip, W), |W| < 1.
MinkowskiNorm randers_from_navigation(const InnerProduct& ip, const LieVector& W);

}  // namespace finslab
