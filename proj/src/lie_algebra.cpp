#include "finslab/lie_algebra.hpp"

#include "finslab/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace finslab {

LieAlgebra::LieAlgebra(std::string name, std::vector<std::string> labels,
                       std::vector<double> table)
    : name_(std::move(name)), dim_(static_cast<int>(labels.size())),
      labels_(std::move(labels)), table_(std::move(table)) {
  require(dim_ > 0, ErrorCode::InvalidArgument, "Lie algebra must have positive dimension");
  require(table_.size() == static_cast<size_t>(dim_) * dim_ * dim_, ErrorCode::InvalidArgument,
          "structure table size does not match dimension");
}

LieAlgebra LieAlgebra::from_upper(std::string name, std::vector<std::string> labels,
                                  const std::vector<Entry>& entries) {
  const int n = static_cast<int>(labels.size());
  std::vector<double> table(static_cast<size_t>(n) * n * n, 0.0);
  std::vector<bool> seen(static_cast<size_t>(n) * n * n, false);
  for (const auto& e : entries) {
    require(e.i >= 0 && e.j >= 0 && e.k >= 0 && e.i < n && e.j < n && e.k < n,
            ErrorCode::InvalidArgument, "structure index out of range");
    require(e.i < e.j, ErrorCode::InvalidArgument, "structure entries must have i < j");
    const size_t at = (static_cast<size_t>(e.i) * n + e.j) * n + e.k;
    require(!seen[at], ErrorCode::InvalidArgument, "duplicate structure entry");
    seen[at] = true;
    table[at] = e.value;
    table[(static_cast<size_t>(e.j) * n + e.i) * n + e.k] = -e.value;
  }
  return LieAlgebra(std::move(name), std::move(labels), std::move(table));
}

std::optional<int> LieAlgebra::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<int>(it - labels_.begin());
}

Matrix MatrixRealization::element(const LieVector& x) const {
  require(static_cast<size_t>(x.size()) == matrices.size(), ErrorCode::InvalidArgument,
          "vector length does not match realization");
  Matrix out = Matrix::Zero(size, size);
  for (size_t i = 0; i < matrices.size(); ++i) out += x(static_cast<Eigen::Index>(i)) * matrices[i];
  return out;
}

InnerProduct::InnerProduct(Matrix gram) : gram_(std::move(gram)) {
  require(gram_.rows() > 0 && gram_.rows() == gram_.cols(), ErrorCode::InvalidArgument,
          "gram matrix must be square and non-empty");
  require(linalg::max_abs(gram_ - gram_.transpose()) <= 1e-12, ErrorCode::InvalidArgument,
          "gram matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram_, Eigen::EigenvaluesOnly);
  require(eig.eigenvalues().minCoeff() > 0.0, ErrorCode::InvalidArgument,
          "gram matrix is not positive definite");
}

double InnerProduct::norm(const LieVector& x) const { return std::sqrt(std::max(0.0, dot(x, x))); }

std::string to_string(Part part) {
  switch (part) {
    case Part::h: return "h";
    case Part::m: return "m";
    case Part::m1: return "m1";
    case Part::m2: return "m2";
  }
  return "?";
}

Part part_from_string(const std::string& name) {
  if (name == "h") return Part::h;
  if (name == "m") return Part::m;
  if (name == "m1") return Part::m1;
  if (name == "m2") return Part::m2;
  fail(ErrorCode::InvalidArgument, "unknown decomposition part '" + name + "'");
}

ReductiveDecomposition::ReductiveDecomposition(Matrix h, Matrix m1, Matrix m2)
    : h_(std::move(h)), m1_(std::move(m1)), m2_(std::move(m2)) {
  const Eigen::Index n = std::max({h_.rows(), m1_.rows(), m2_.rows()});
  // Empty blocks may come in as 0x0.
  for (Matrix* b : {&h_, &m1_, &m2_})
    if (b->cols() == 0) b->resize(n, 0);
  require(h_.rows() == n && m1_.rows() == n && m2_.rows() == n, ErrorCode::InvalidArgument,
          "decomposition vectors have inconsistent lengths");
  require(h_.cols() + m1_.cols() + m2_.cols() == n, ErrorCode::InvalidArgument,
          "decomposition does not have dim g spanning vectors");

  Matrix all(n, n);
  all << h_, m1_, m2_;
  require(linalg::rank(all) == n, ErrorCode::InvalidArgument,
          "decomposition vectors are not linearly independent");
  m_.resize(n, m1_.cols() + m2_.cols());
  m_ << m1_, m2_;

  const Matrix coords = all.fullPivLu().inverse();
  const Eigen::Index kh = h_.cols(), k1 = m1_.cols(), k2 = m2_.cols();
  projector_h_ = h_ * coords.topRows(kh);
  projector_m1_ = m1_ * coords.middleRows(kh, k1);
  projector_m2_ = m2_ * coords.bottomRows(k2);
  projector_m_ = projector_m1_ + projector_m2_;
}

ReductiveDecomposition ReductiveDecomposition::lie_group(Matrix m1, Matrix m2) {
  return ReductiveDecomposition(Matrix(std::max(m1.rows(), m2.rows()), 0), std::move(m1),
                                std::move(m2));
}

const Matrix& ReductiveDecomposition::basis(Part part) const {
  switch (part) {
    case Part::h: return h_;
    case Part::m: return m_;
    case Part::m1: return m1_;
    case Part::m2: return m2_;
  }
  return m_;
}

const Matrix& ReductiveDecomposition::projector(Part part) const {
  switch (part) {
    case Part::h: return projector_h_;
    case Part::m: return projector_m_;
    case Part::m1: return projector_m1_;
    case Part::m2: return projector_m2_;
  }
  return projector_m_;
}

LieVector project(const ReductiveDecomposition& d, const LieVector& x, Part part) {
  require(x.size() == d.dim(), ErrorCode::InvalidArgument, "vector length does not match decomposition");
  return d.projector(part) * x;
}

LieVector bracket(const LieAlgebra& a, const LieVector& x, const LieVector& y) {
  const int n = a.dim();
  require(x.size() == n && y.size() == n, ErrorCode::InvalidArgument,
          "bracket: dimension mismatch");
  LieVector out = LieVector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (x(i) == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const double w = x(i) * y(j);
      if (w == 0.0) continue;
      for (int k = 0; k < n; ++k) out(k) += a.c(i, j, k) * w;
    }
  }
  return out;
}

AlgebraReport validate_algebra(const LieAlgebra& a) {
  const int n = a.dim();
  AlgebraReport r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        r.antisymmetry = std::max(r.antisymmetry, std::abs(a.c(i, j, k) + a.c(j, i, k)));

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          double sum = 0.0;
          for (int l = 0; l < n; ++l)
            sum += a.c(i, j, l) * a.c(l, k, m) + a.c(j, k, l) * a.c(l, i, m) +
                   a.c(k, i, l) * a.c(l, j, m);
          r.jacobi = std::max(r.jacobi, std::abs(sum));
        }
  r.passed = r.antisymmetry <= kStructureTolerance && r.jacobi <= kStructureTolerance;
  return r;
}

Matrix ad_matrix(const LieAlgebra& a, const LieVector& x) {
  const int n = a.dim();
  require(x.size() == n, ErrorCode::InvalidArgument, "ad_matrix: dimension mismatch");
  Matrix ad = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (x(i) == 0.0) continue;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) ad(k, j) += x(i) * a.c(i, j, k);
  }
  return ad;
}

Matrix ad_exponential(const LieAlgebra& a, const LieVector& x, double t) {
  return linalg::expm(t * ad_matrix(a, x));
}

Matrix group_exponential(const MatrixRealization& r, const LieVector& x, double t) {
  return linalg::expm(t * r.element(x));
}

double realization_residual(const LieAlgebra& a, const MatrixRealization& r) {
  const int n = a.dim();
  require(static_cast<int>(r.matrices.size()) == n, ErrorCode::InvalidArgument,
          "realization has the wrong number of matrices");
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix diff = r.matrices[i] * r.matrices[j] - r.matrices[j] * r.matrices[i];
      for (int k = 0; k < n; ++k) diff -= a.c(i, j, k) * r.matrices[k];
      worst = std::max(worst, linalg::max_abs(diff));
    }
  return worst;
}

namespace {

template <class F>
double max_over_pairs(const Matrix& us, const Matrix& vs, F&& f) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < us.cols(); ++i)
    for (Eigen::Index j = 0; j < vs.cols(); ++j)
      worst = std::max(worst, f(LieVector(us.col(i)), LieVector(vs.col(j))));
  return worst;
}

}  // namespace

DecompositionReport check_decomposition(const LieAlgebra& a, const ReductiveDecomposition& d,
                                        const InnerProduct& ip) {
  require(d.dim() == a.dim() && ip.dim() == a.dim(), ErrorCode::InvalidArgument,
          "check_decomposition: dimension mismatch");
  DecompositionReport r;
  const Matrix& h = d.basis(Part::h);
  const Matrix& m = d.basis(Part::m);
  const Matrix& m1 = d.basis(Part::m1);
  const Matrix& m2 = d.basis(Part::m2);
  const Matrix id = Matrix::Identity(a.dim(), a.dim());

  auto outside = [&](Part part) {
    return [&, part](const LieVector& u, const LieVector& v) {
      return ip.norm((id - d.projector(part)) * bracket(a, u, v));
    };
  };
  r.h_closed = max_over_pairs(h, h, outside(Part::h));
  r.h_m_bracket = max_over_pairs(h, m, outside(Part::m));
  r.h_m1_bracket = max_over_pairs(h, m1, outside(Part::m1));
  r.h_m2_bracket = max_over_pairs(h, m2, outside(Part::m2));

  auto inner = [&](const LieVector& u, const LieVector& v) { return std::abs(ip.dot(u, v)); };
  r.m1_m2_orthogonality = max_over_pairs(m1, m2, inner);
  r.h_m_orthogonality = max_over_pairs(h, m, inner);

  r.m1_m2_bracket_in_m1 = max_over_pairs(m1, m2, [&](const LieVector& u, const LieVector& v) {
    return ip.norm(d.projector(Part::m2) * bracket(a, u, v));
  });
  r.m1_m2_bracket_in_m2 = max_over_pairs(m1, m2, [&](const LieVector& u, const LieVector& v) {
    return ip.norm(d.projector(Part::m1) * bracket(a, u, v));
  });

  for (Part p : {Part::h, Part::m, Part::m1, Part::m2}) {
    const Matrix& proj = d.projector(p);
    r.projection_idempotence = std::max(r.projection_idempotence, linalg::max_abs(proj * proj - proj));
  }
  r.projection_sum = linalg::max_abs(d.projector(Part::h) + d.projector(Part::m) - id);
  return r;
}

double ad_invariance_residual(const LieAlgebra& a, const InnerProduct& ip,
                              const Matrix& subspace_basis) {
  const int n = a.dim();
  double worst = 0.0;
  for (Eigen::Index s = 0; s < subspace_basis.cols(); ++s) {
    const Matrix ad = ad_matrix(a, subspace_basis.col(s));
    // <[z,x],y> + <x,[z,y]> over basis x, y is (ad^T G + G ad)(x, y).
    const Matrix sym = ad.transpose() * ip.gram() + ip.gram() * ad;
    worst = std::max(worst, n == 0 ? 0.0 : linalg::max_abs(sym));
  }
  return worst;
}

double subalgebra_residual(const LieAlgebra& a, const Matrix& basis) {
  if (basis.cols() == 0) return 0.0;
  const Matrix q = linalg::column_space(basis);
  const Matrix proj = q * q.transpose();
  return max_over_pairs(basis, basis, [&](const LieVector& u, const LieVector& v) {
    const LieVector b = bracket(a, u, v);
    return (b - proj * b).norm();
  });
}

Matrix center(const LieAlgebra& a) {
  const int n = a.dim();
  // x is central iff sum_i x_i c(i, j, k) = 0 for every (j, k).
  Matrix stacked(n * n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) stacked(j * n + k, i) = a.c(i, j, k);
  return linalg::canonical_basis(linalg::null_space(stacked));
}

Matrix derived(const LieAlgebra& a) {
  const int n = a.dim();
  Matrix brackets(n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) brackets(k, i * n + j) = a.c(i, j, k);
  return linalg::canonical_basis(brackets);
}

Matrix orthogonal_complement(const InnerProduct& ip, const Matrix& basis) {
  const int n = ip.dim();
  if (basis.cols() == 0) return Matrix::Identity(n, n);
  require(basis.rows() == n, ErrorCode::InvalidArgument, "orthogonal_complement: dimension mismatch");
  return linalg::canonical_basis(linalg::null_space(basis.transpose() * ip.gram()));
}

}  // namespace finslab
