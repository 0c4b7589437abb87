#pragma once

#include "finslab/catalog.hpp"
#include "finslab/geodesic.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace testing_support {

using finslab::LieVector;
using finslab::Matrix;

struct Rng {
  explicit Rng(std::uint64_t seed) : engine(seed) {}

  double normal() { return gauss(engine); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }

  LieVector vector(int n) {
    LieVector v(n);
    for (int i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  LieVector unit(int n) {
    LieVector v = vector(n);
    return v / v.norm();
  }

  // Random symmetric positive definite matrix with eigenvalues in [0.5, 2.5].
  Matrix spd(int n) {
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = normal();
    Eigen::HouseholderQR<Matrix> qr(a);
    const Matrix q = qr.householderQ();
    LieVector d(n);
    for (int i = 0; i < n; ++i) d(i) = uniform(0.5, 2.5);
    return q * d.asDiagonal() * q.transpose();
  }

  std::mt19937_64 engine;
  std::normal_distribution<double> gauss;
};

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Plain Taylor series, no scaling. Only used on small arguments or as an oracle.
inline Matrix series_exp(const Matrix& a, int terms = 80) {
  Matrix out = Matrix::Identity(a.rows(), a.cols());
  Matrix term = out;
  for (int k = 1; k < terms; ++k) {
    term = term * a / static_cast<double>(k);
    out += term;
  }
  return out;
}

// Hessian of 0.5 F^2 by central differences of the value.
inline Matrix fd_hessian(const finslab::MinkowskiNorm& norm, const LieVector& y, double h = 1e-4) {
  const int n = static_cast<int>(y.size());
  auto E = [&](const LieVector& v) {
    const double f = finslab::norm_value(norm, v);
    return 0.5 * f * f;
  };
  Matrix H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const LieVector ei = LieVector::Unit(n, i) * h, ej = LieVector::Unit(n, j) * h;
      H(i, j) = (E(y + ei + ej) - E(y + ei - ej) - E(y - ei + ej) + E(y - ei - ej)) / (4 * h * h);
    }
  return H;
}

// Coordinates of a matrix in the span of the realization, by least squares.
inline LieVector realization_coordinates(const finslab::MatrixRealization& r, const Matrix& m) {
  const int n = static_cast<int>(r.matrices.size());
  const int d = r.size;
  Matrix A(d * d, n);
  for (int k = 0; k < n; ++k) A.col(k) = Eigen::Map<const LieVector>(r.matrices[k].data(), d * d);
  const LieVector b = Eigen::Map<const LieVector>(m.data(), d * d);
  return A.colPivHouseholderQr().solve(b);
}

// exp(t a_1) ... exp(t a_k) in the realization.
inline Matrix realized_curve(const finslab::MatrixRealization& r, const std::vector<LieVector>& f, double t) {
  Matrix out = Matrix::Identity(r.size, r.size);
  for (const auto& a : f) out = out * series_exp(t * r.element(a));
  return out;
}

}  // namespace testing_support
