#include "finslab/minkowski.hpp"

#include "finslab/dual.hpp"
#include "finslab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

namespace finslab {

using ad::D1;
using ad::D2;
using ad::D3;

std::string to_string(PhiKind kind) {
  switch (kind) {
    case PhiKind::randers: return "randers";
    case PhiKind::kropina: return "kropina";
    case PhiKind::identity: return "identity";
    case PhiKind::polynomial: return "polynomial";
  }
  return "?";
}

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::riemannian: return "riemannian";
    case NormKind::alpha_beta: return "alpha_beta";
    case NormKind::cubic: return "cubic";
    case NormKind::navigation: return "navigation";
  }
  return "?";
}

PhiFunction PhiFunction::polynomial(std::vector<double> coeffs, double b0) {
  require(!coeffs.empty(), ErrorCode::InvalidArgument, "polynomial phi needs coefficients");
  require(std::isfinite(b0) && b0 > 0.0, ErrorCode::InvalidArgument,
          "polynomial phi needs a finite positive b0");
  PhiFunction phi(PhiKind::polynomial, std::move(coeffs), b0);
  constexpr int samples = 201;
  for (int i = 0; i < samples; ++i) {
    const double s = -b0 + (i + 0.5) * 2.0 * b0 / samples;
    require(phi(s) > 0.0, ErrorCode::InvalidArgument, "polynomial phi is not positive on (-b0, b0)");
  }
  return phi;
}

double PhiFunction::derivative(double s) const { return (*this)(D1(s, 1.0)).d; }

double PhiFunction::second_derivative(double s) const {
  return (*this)(D2(D1(s, 1.0), D1(1.0, 0.0))).d.d;
}

namespace {

std::vector<double> grid(double b, int grid_size) {
  require(grid_size >= 2, ErrorCode::InvalidArgument, "grid_size must be at least 2");
  std::vector<double> out(static_cast<size_t>(grid_size));
  for (int i = 0; i < grid_size; ++i) out[i] = -b + 2.0 * b * i / (grid_size - 1);
  return out;
}

template <class F>
PhiReport grid_minimum(double b, int grid_size, F&& f) {
  PhiReport r;
  r.minimum = std::numeric_limits<double>::infinity();
  for (double s : grid(b, grid_size)) {
    const double v = f(s);
    if (v < r.minimum) {
      r.minimum = v;
      r.argmin = s;
    }
  }
  r.passed = r.minimum > 0.0;
  return r;
}

void require_bound(const PhiFunction& phi, double b) {
  require(phi.kind() != PhiKind::kropina, ErrorCode::InvalidArgument,
          "kropina phi is non-regular; the regularity test does not apply");
  require(b >= 0.0 && b < phi.b0(), ErrorCode::InvalidArgument, "need 0 <= b < b0");
}

}  // namespace

PhiReport phi_regularity(const PhiFunction& phi, double b, int grid_size) {
  require_bound(phi, b);
  return grid_minimum(b, grid_size, [&](double s) {
    return phi(s) - s * phi.derivative(s) + (b * b - s * s) * phi.second_derivative(s);
  });
}

PhiReport f_positivity(const PhiFunction& phi, double b, int grid_size) {
  require_bound(phi, b);
  return grid_minimum(b, grid_size, [&](double s) { return phi(s) - s * phi.derivative(s); });
}

PhiConsistency phi_consistency(const PhiFunction& phi, int grid_size) {
  PhiConsistency out;
  out.min_value = std::numeric_limits<double>::infinity();
  const double b0 = std::isfinite(phi.b0()) ? phi.b0() : 1.0;
  // Kropina lives on s > 0 only.
  const double lo = phi.kind() == PhiKind::kropina ? 0.05 : -b0;
  const double hi = b0;
  constexpr double h = 1e-6;
  for (int i = 0; i < grid_size; ++i) {
    const double s = lo + (i + 0.5) * (hi - lo) / grid_size;
    const double fd = (phi(s + h) - phi(s - h)) / (2.0 * h);
    out.derivative_gap = std::max(out.derivative_gap, std::abs(fd - phi.derivative(s)));
    out.min_value = std::min(out.min_value, phi(s));
  }
  return out;
}

LieVector CubicNorm::dual_vector() const { return ip.gram().ldlt().solve(b); }

MinkowskiNorm MinkowskiNorm::riemannian(InnerProduct ip) { return MinkowskiNorm(RiemannianNorm{std::move(ip)}); }

MinkowskiNorm MinkowskiNorm::alpha_beta(InnerProduct ip, LieVector X, PhiFunction phi) {
  require(X.size() == ip.dim(), ErrorCode::InvalidArgument, "X has the wrong dimension");
  if (phi.kind() != PhiKind::kropina)
    require(ip.norm(X) < phi.b0(), ErrorCode::InvalidArgument,
            "(alpha, beta) norm needs |X| < b0");
  else
    require(ip.norm(X) > 0.0, ErrorCode::InvalidArgument, "kropina norm needs X != 0");
  return MinkowskiNorm(AlphaBetaNorm{std::move(ip), std::move(X), std::move(phi)});
}

MinkowskiNorm MinkowskiNorm::cubic(InnerProduct ip, LieVector b) {
  require(b.size() == ip.dim(), ErrorCode::InvalidArgument, "b has the wrong dimension");
  CubicNorm c{std::move(ip), std::move(b)};
  const double unit = c.b.dot(c.dual_vector());
  require(std::abs(unit - 1.0) <= 1e-10, ErrorCode::InvalidArgument,
          "cubic norm needs h^{ij} b_i b_j = 1");
  return MinkowskiNorm(std::move(c));
}

MinkowskiNorm MinkowskiNorm::navigation(MinkowskiNorm base, LieVector W) {
  require(W.size() == base.dim(), ErrorCode::InvalidArgument, "W has the wrong dimension");
  if (W.norm() > 0.0) {
    if (base.kind() == NormKind::riemannian) {
      const double w = base.inner_product().norm(W);
      require(w < 1.0 || std::abs(w - 1.0) <= 1e-10, ErrorCode::InvalidArgument,
              "navigation over a Riemannian base needs |W| <= 1");
    } else {
      require(is_regular(base, -W) && norm_value(base, -W) < 1.0, ErrorCode::InvalidArgument,
              "navigation needs base(-W) < 1");
    }
  }
  return MinkowskiNorm(NavigationNorm{std::make_shared<const MinkowskiNorm>(std::move(base)), std::move(W)});
}

int MinkowskiNorm::dim() const { return inner_product().dim(); }

const InnerProduct& MinkowskiNorm::inner_product() const {
  return std::visit(
      [](const auto& n) -> const InnerProduct& {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, NavigationNorm>)
          return n.base->inner_product();
        else
          return n.ip;
      },
      variant_);
}

bool MinkowskiNorm::kropina_navigation() const {
  const auto* nav = std::get_if<NavigationNorm>(&variant_);
  if (nav == nullptr || nav->base->kind() != NormKind::riemannian) return false;
  return std::abs(nav->base->inner_product().norm(nav->W) - 1.0) <= 1e-10;
}

namespace {

constexpr double kConeMargin = 1e-8;

template <class T>
T quadratic(const Matrix& g, const std::vector<T>& y) {
  T acc(0.0);
  const size_t n = y.size();
  for (size_t i = 0; i < n; ++i) {
    T row(0.0);
    for (size_t j = 0; j < n; ++j) row += g(i, j) * y[j];
    acc += y[i] * row;
  }
  return acc;
}

template <class T>
T linear(const LieVector& c, const std::vector<T>& y) {
  T acc(0.0);
  for (size_t i = 0; i < y.size(); ++i) acc += c(static_cast<Eigen::Index>(i)) * y[i];
  return acc;
}

std::vector<double> to_std(const LieVector& v) { return {v.data(), v.data() + v.size()}; }

LieVector to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const LieVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

struct NavigationRoot {
  double lambda;
  double slope;  // d/dlambda base(y/lambda - W)
};

NavigationRoot solve_navigation(const NavigationNorm& nav, const std::vector<double>& y);

template <class T>
T evaluate(const MinkowskiNorm& norm, const std::vector<T>& y) {
  using ad::sqrt;
  using ad::cbrt;
  return std::visit(
      [&](const auto& n) -> T {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, RiemannianNorm>) {
          return sqrt(quadratic(n.ip.gram(), y));
        } else if constexpr (std::is_same_v<N, AlphaBetaNorm>) {
          const T alpha = sqrt(quadratic(n.ip.gram(), y));
          const T beta = linear(LieVector(n.ip.gram() * n.X), y);
          return alpha * n.phi(beta / alpha);
        } else if constexpr (std::is_same_v<N, CubicNorm>) {
          return cbrt(quadratic(n.ip.gram(), y) * linear(n.b, y));
        } else {
          std::vector<double> primal(y.size());
          for (size_t i = 0; i < y.size(); ++i) primal[i] = ad::value(y[i]);
          const NavigationRoot root = solve_navigation(n, primal);
          if constexpr (std::is_same_v<T, double>) {
            return root.lambda;
          } else {
            // Chord iterations from the converged primal root: the iteration
            // map has zero primal derivative there, so each pass fixes at
            // least one more order of the tangent parts.
            T lambda(root.lambda);
            std::vector<T> u(y.size());
            for (int pass = 0; pass < 6; ++pass) {
              for (size_t i = 0; i < y.size(); ++i)
                u[i] = y[i] / lambda - n.W(static_cast<Eigen::Index>(i));
              lambda = lambda - (evaluate<T>(*n.base, u) - 1.0) / root.slope;
            }
            return lambda;
          }
        }
      },
      norm.variant());
}

NavigationRoot solve_navigation(const NavigationNorm& nav, const std::vector<double>& y) {
  const MinkowskiNorm& base = *nav.base;
  const size_t n = y.size();
  std::vector<double> u(n);
  auto shifted = [&](double lambda) {
    for (size_t i = 0; i < n; ++i) u[i] = y[i] / lambda - nav.W(static_cast<Eigen::Index>(i));
    require(is_regular(base, to_eigen(u)), ErrorCode::Domain,
            "navigation: y/lambda - W left the base norm's regular cone");
    return u;
  };
  auto phi = [&](double lambda) { return evaluate<double>(base, shifted(lambda)); };

  double hi = std::max(to_eigen(y).norm(), 1e-300);
  int guard = 0;
  while (phi(hi) >= 1.0) {
    hi *= 2.0;
    require(++guard < 2000, ErrorCode::Numeric, "navigation: root not bracketed");
  }
  double lo = hi;
  guard = 0;
  while (phi(lo) <= 1.0) {
    lo *= 0.5;
    require(++guard < 2000, ErrorCode::Numeric, "navigation: root not bracketed");
  }
  hi = std::max(hi, 2.0 * lo);
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) > 1.0 ? lo : hi) = mid;
  }

  auto value_and_slope = [&](double lambda) {
    const std::vector<double> at = shifted(lambda);
    std::vector<D1> seeded(n);
    for (size_t i = 0; i < n; ++i) seeded[i] = D1(at[i], -y[i] / (lambda * lambda));
    const D1 f = evaluate<D1>(base, seeded);
    return std::pair{f.v - 1.0, f.d};
  };
  double lambda = 0.5 * (lo + hi);
  for (int it = 0; it < 60; ++it) {
    const auto [g, slope] = value_and_slope(lambda);
    require(slope < 0.0, ErrorCode::Numeric, "navigation: non-monotone base norm");
    double next = lambda - g / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    (g > 0.0 ? lo : hi) = lambda;
    const double step = std::abs(next - lambda);
    lambda = next;
    if (step <= 1e-15 * lambda) break;
  }
  return {lambda, value_and_slope(lambda).second};
}

/// 1/2 F^2 and 1/4 F^2 in dual arithmetic.
template <class T>
T half_energy(const MinkowskiNorm& norm, const std::vector<T>& y) {
  const T f = evaluate<T>(norm, y);
  return 0.5 * (f * f);
}

}  // namespace

bool is_regular(const MinkowskiNorm& norm, const LieVector& y) {
  if (y.size() != norm.dim() || !(y.norm() > 0.0) || !y.allFinite()) return false;
  return std::visit(
      [&](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, AlphaBetaNorm>) {
          if (n.phi.kind() != PhiKind::kropina) return true;
          return n.ip.dot(n.X, y) > kConeMargin * n.ip.norm(n.X) * n.ip.norm(y);
        } else if constexpr (std::is_same_v<N, CubicNorm>) {
          return n.b.dot(y) > kConeMargin * n.ip.norm(y);
        } else if constexpr (std::is_same_v<N, NavigationNorm>) {
          if (!norm.kropina_navigation()) return true;
          const InnerProduct& ip = n.base->inner_product();
          return ip.dot(n.W, y) > kConeMargin * ip.norm(n.W) * ip.norm(y);
        } else {
          return true;
        }
      },
      norm.variant());
}

void require_regular(const MinkowskiNorm& norm, const LieVector& y) {
  require(y.size() == norm.dim(), ErrorCode::InvalidArgument, "vector has the wrong dimension");
  require(y.norm() > 0.0, ErrorCode::Domain, "the zero vector has no norm derivatives");
  require(is_regular(norm, y), ErrorCode::Domain,
          "vector lies outside the regular cone of the " + to_string(norm.kind()) + " norm");
}

double norm_value(const MinkowskiNorm& norm, const LieVector& y) {
  require_regular(norm, y);
  return evaluate<double>(norm, to_std(y));
}

double legendre(const MinkowskiNorm& norm, const LieVector& y, const LieVector& w) {
  require_regular(norm, y);
  if (norm.kind() == NormKind::riemannian) return norm.inner_product().dot(y, w);
  std::vector<D1> seeded(static_cast<size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) seeded[i] = D1(y(i), w(i));
  return half_energy(norm, seeded).d;
}

double fundamental_form(const MinkowskiNorm& norm, const LieVector& y, const LieVector& u,
                        const LieVector& v) {
  require_regular(norm, y);
  if (norm.kind() == NormKind::riemannian) return norm.inner_product().dot(u, v);
  std::vector<D2> seeded(static_cast<size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) seeded[i] = D2(D1(y(i), u(i)), D1(v(i), 0.0));
  return half_energy(norm, seeded).d.d;
}

FundamentalTensor fundamental_tensor(const MinkowskiNorm& norm, const LieVector& y) {
  require_regular(norm, y);
  const int n = norm.dim();
  FundamentalTensor out{y, Matrix::Zero(n, n)};
  if (norm.kind() == NormKind::riemannian) {
    out.gram = norm.inner_product().gram();
    return out;
  }
  std::vector<D2> seeded(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      for (int k = 0; k < n; ++k)
        seeded[k] = D2(D1(y(k), k == i ? 1.0 : 0.0), D1(k == j ? 1.0 : 0.0, 0.0));
      out.gram(i, j) = out.gram(j, i) = half_energy(norm, seeded).d.d;
    }
  return out;
}

double CartanTensor::contract(const LieVector& u, const LieVector& v, const LieVector& w) const {
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) acc += (*this)(i, j, k) * u(i) * v(j) * w(k);
  return acc;
}

CartanTensor cartan_tensor(const MinkowskiNorm& norm, const LieVector& y) {
  require_regular(norm, y);
  const int n = norm.dim();
  CartanTensor out{y, n, std::vector<double>(static_cast<size_t>(n) * n * n, 0.0)};
  if (norm.kind() == NormKind::riemannian) return out;
  std::vector<D3> seeded(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        for (int m = 0; m < n; ++m)
          seeded[m] = D3(D2(D1(y(m), m == i ? 1.0 : 0.0), D1(m == j ? 1.0 : 0.0, 0.0)),
                         D2(D1(m == k ? 1.0 : 0.0, 0.0), D1(0.0, 0.0)));
        // (1/4) F^2 = (1/2) * half_energy
        const double c = 0.5 * half_energy(norm, seeded).d.d.d;
        const int idx[6][3] = {{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}};
        for (const auto& p : idx) out.data[(p[0] * n + p[1]) * n + p[2]] = c;
      }
  return out;
}

double orthogonality_hypothesis_residual(const LieAlgebra& algebra, const ReductiveDecomposition& d,
                                         const InnerProduct& ip, const LieVector& X,
                                         const LieVector& y) {
  const Matrix& m = d.basis(Part::m);
  double worst = 0.0;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    worst = std::max(worst, std::abs(ip.dot(X, project(d, bracket(algebra, y, m.col(c)), Part::m))));
  return worst;
}

GyIdentity alphabeta_gy_identity(const MinkowskiNorm& norm, const LieAlgebra& algebra,
                                 const ReductiveDecomposition& d, const LieVector& y,
                                 const LieVector& z) {
  const auto& ab = norm.as<AlphaBetaNorm>();
  const LieVector ym = project(d, y, Part::m);
  require(ym.norm() > 0.0, ErrorCode::InvalidArgument, "y_m must be nonzero");
  const double hyp = orthogonality_hypothesis_residual(algebra, d, ab.ip, ab.X, y);
  require(hyp <= kOrthogonalityHypothesisTolerance, ErrorCode::Hypothesis,
          "X is not orthogonal to [y, m]_m (residual " + std::to_string(hyp) + ")");

  const LieVector u = project(d, bracket(algebra, y, z), Part::m);
  GyIdentity out;
  out.lhs = legendre(norm, ym, u);
  out.r = ab.ip.dot(ab.X, ym) / ab.ip.norm(ym);
  const double p = ab.phi(out.r);
  out.factor = p * p - p * ab.phi.derivative(out.r) * out.r;
  out.rhs = ab.ip.dot(ym, u) * out.factor;
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

double navigation_closed_form(NavigationKind kind, const InnerProduct& ip, const LieVector& W,
                              const LieVector& y) {
  require(W.size() == ip.dim() && y.size() == ip.dim(), ErrorCode::InvalidArgument,
          "navigation_closed_form: dimension mismatch");
  require(y.norm() > 0.0, ErrorCode::Domain, "navigation_closed_form: y must be nonzero");
  const double ww = ip.dot(W, W), wy = ip.dot(W, y), yy = ip.dot(y, y);
  if (kind == NavigationKind::randers) {
    require(ww < 1.0, ErrorCode::InvalidArgument, "randers navigation needs |W| < 1");
    // positive root of (1 - |W|^2) L^2 + 2 <W,y> L - |y|^2 = 0
    const double a = 1.0 - ww;
    const double disc = std::sqrt(wy * wy + a * yy);
    // Rationalized when <W,y> > 0 to avoid cancellation.
    return wy <= 0.0 ? (disc - wy) / a : yy / (disc + wy);
  }
  require(std::abs(ww - 1.0) <= 1e-10, ErrorCode::InvalidArgument, "kropina navigation needs |W| = 1");
  require(wy > 0.0, ErrorCode::Domain, "kropina navigation needs <W, y> > 0");
  return yy / (2.0 * wy);
}

MinkowskiNorm randers_from_navigation(const InnerProduct& ip, const LieVector& W) {
  const double lambda = 1.0 - ip.dot(W, W);
  require(lambda > 0.0, ErrorCode::InvalidArgument, "randers navigation needs |W| < 1");
  const LieVector w = ip.gram() * W;
  const Matrix a = (lambda * ip.gram() + w * w.transpose()) / (lambda * lambda);
  InnerProduct alpha(0.5 * (a + a.transpose()));
  const LieVector b = -w / lambda;
  LieVector X = alpha.gram().ldlt().solve(b);
  return MinkowskiNorm::alpha_beta(std::move(alpha), std::move(X), PhiFunction::randers());
}

bool is_strongly_convex(const MinkowskiNorm& norm, const LieVector& y) {
  if (!is_regular(norm, y)) return false;
  const Matrix g = fundamental_tensor(norm, y).gram;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g);
  return eig.info() == Eigen::Success && eig.eigenvalues().minCoeff() > 1e-10 * eig.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace finslab
