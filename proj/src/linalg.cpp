#include "finslab/linalg.hpp"

#include <cmath>
#include <limits>

namespace finslab::linalg {

Matrix expm(const Matrix& a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();

  // Scale until ||a / 2^s||_1 <= 1/4; the Taylor tail then drops below
  // machine precision within ~20 terms.
  int squarings = 0;
  if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  const Matrix scaled = a / std::ldexp(1.0, squarings);

  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= std::numeric_limits<double>::epsilon() * 1e-3)
      break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

namespace {

struct Svd {
  Eigen::JacobiSVD<Matrix> svd;
  Eigen::Index rank = 0;
};

Svd decompose(const Matrix& a, unsigned options) {
  Svd out{Eigen::JacobiSVD<Matrix>(a, options)};
  const auto& s = out.svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return out;
  const double cutoff = kRankTolerance * s(0);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++out.rank;
  return out;
}

}  // namespace

Eigen::Index rank(const Matrix& a) {
  if (a.size() == 0) return 0;
  return decompose(a, 0).rank;
}

Matrix null_space(const Matrix& a) {
  const Eigen::Index cols = a.cols();
  if (a.rows() == 0) return Matrix::Identity(cols, cols);
  // JacobiSVD only returns a full V when asked for it.
  const auto d = decompose(a, Eigen::ComputeFullV);
  const Matrix& v = d.svd.matrixV();
  return v.rightCols(cols - d.rank);
}

Matrix column_space(const Matrix& a) {
  if (a.size() == 0) return Matrix(a.rows(), 0);
  const auto d = decompose(a, Eigen::ComputeThinU);
  return d.svd.matrixU().leftCols(d.rank);
}

Matrix canonical_basis(const Matrix& columns) {
  const Matrix orth = column_space(columns);
  Matrix r = orth.transpose();  // rows span the subspace
  const Eigen::Index rows = r.rows();
  const Eigen::Index cols = r.cols();
  Eigen::Index lead = 0;
  for (Eigen::Index row = 0; row < rows && lead < cols; ++lead) {
    Eigen::Index pivot = row;
    for (Eigen::Index i = row + 1; i < rows; ++i)
      if (std::abs(r(i, lead)) > std::abs(r(pivot, lead))) pivot = i;
    if (std::abs(r(pivot, lead)) < 1e-9) continue;
    r.row(pivot).swap(r.row(row));
    r.row(row) /= r(row, lead);
    for (Eigen::Index i = 0; i < rows; ++i)
      if (i != row) r.row(i) -= r(i, lead) * r.row(row);
    ++row;
  }
  for (Eigen::Index i = 0; i < r.size(); ++i)
    if (std::abs(r.data()[i]) < 1e-14) r.data()[i] = 0.0;
  return r.transpose();
}

double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

}  // namespace finslab::linalg
