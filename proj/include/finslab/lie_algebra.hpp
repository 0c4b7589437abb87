#pragma once

#include "finslab/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace finslab {

/// Finite-dimensional real Lie algebra given by structure constants,
/// [e_i, e_j] = sum_k c(i, j, k) e_k.
class LieAlgebra {
 public:
  struct Entry {
    int i;
    int j;
    int k;
    double value;
  };

  /// Takes a dense n*n*n table verbatim (index (i*n + j)*n + k). No
  /// completion or validation; see validate_algebra().
  LieAlgebra(std::string name, std::vector<std::string> labels, std::vector<double> table);

  /// Builds from entries with i < j and fills in c(j, i, k) = -c(i, j, k).
  static LieAlgebra from_upper(std::string name, std::vector<std::string> labels,
                               const std::vector<Entry>& entries);

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<int> index_of(const std::string& label) const;

  double c(int i, int j, int k) const { return table_[(i * dim_ + j) * dim_ + k]; }
  const std::vector<double>& table() const { return table_; }

  LieVector basis_vector(int i) const { return LieVector::Unit(dim_, i); }

 private:
  std::string name_;
  int dim_;
  std::vector<std::string> labels_;
  std::vector<double> table_;
};

/// One d x d real matrix per basis element. Complex algebras are handed in
/// realified.
struct MatrixRealization {
  int size = 0;
  std::vector<Matrix> matrices;

  Matrix element(const LieVector& x) const;
};

class InnerProduct {
 public:
  /// Throws InvalidArgument unless gram is symmetric (1e-12) and positive definite.
  explicit InnerProduct(Matrix gram);
  static InnerProduct identity(int n) { return InnerProduct(Matrix::Identity(n, n)); }

  int dim() const { return static_cast<int>(gram_.rows()); }
  const Matrix& gram() const { return gram_; }
  double dot(const LieVector& x, const LieVector& y) const { return x.dot(gram_ * y); }
  double norm(const LieVector& x) const;

 private:
  Matrix gram_;
};

enum class Part { h, m, m1, m2 };

std::string to_string(Part part);
Part part_from_string(const std::string& name);

/// Splitting g = h + m1 + m2 given by spanning vectors (stored as columns).
/// Projections are the direct-sum projections along the other summands; when
/// the summands are orthogonal they agree with orthogonal projection.
class ReductiveDecomposition {
 public:
  ReductiveDecomposition(Matrix h, Matrix m1, Matrix m2);

  /// H trivial, m = m1 + m2.
  static ReductiveDecomposition lie_group(Matrix m1, Matrix m2);

  int dim() const { return static_cast<int>(projector_h_.rows()); }
  const Matrix& basis(Part part) const;
  const Matrix& projector(Part part) const;
  bool trivial_isotropy() const { return h_.cols() == 0; }

 private:
  Matrix h_, m1_, m2_, m_;
  Matrix projector_h_, projector_m_, projector_m1_, projector_m2_;
};

LieVector project(const ReductiveDecomposition& d, const LieVector& x, Part part);

LieVector bracket(const LieAlgebra& a, const LieVector& x, const LieVector& y);

struct AlgebraReport {
  double antisymmetry = 0.0;
  double jacobi = 0.0;
  bool passed = false;
};

inline constexpr double kStructureTolerance = 1e-12;

AlgebraReport validate_algebra(const LieAlgebra& a);

/// Matrix of y -> [x, y] in the algebra basis.
Matrix ad_matrix(const LieAlgebra& a, const LieVector& x);
/// exp(t ad_x).
Matrix ad_exponential(const LieAlgebra& a, const LieVector& x, double t);

/// exp(t * sum_i x_i M_i).
Matrix group_exponential(const MatrixRealization& r, const LieVector& x, double t);

/// Max entrywise |[M_i, M_j] - sum_k c(i,j,k) M_k|.
double realization_residual(const LieAlgebra& a, const MatrixRealization& r);

/// Residuals are maxima over basis pairs, measured in the inner-product norm.
struct DecompositionReport {
  double h_closed = 0.0;           // [h, h] in h
  double h_m_bracket = 0.0;        // [h, m] in m
  double h_m1_bracket = 0.0;       // [h, m1] in m1
  double h_m2_bracket = 0.0;       // [h, m2] in m2
  double m1_m2_orthogonality = 0.0;
  double h_m_orthogonality = 0.0;
  double m1_m2_bracket_in_m1 = 0.0;  // |P_m2 [u, v]|, u in m1, v in m2
  double m1_m2_bracket_in_m2 = 0.0;  // |P_m1 [u, v]|, the reverse containment
  double projection_idempotence = 0.0;
  double projection_sum = 0.0;
};

DecompositionReport check_decomposition(const LieAlgebra& a, const ReductiveDecomposition& d,
                                        const InnerProduct& ip);

/// max |<[z,x],y> + <x,[z,y]>| over z in the given span and x, y basis vectors of g.
double ad_invariance_residual(const LieAlgebra& a, const InnerProduct& ip,
                              const Matrix& subspace_basis);

/// max |[u,v] - (its least-squares projection onto span)| over basis pairs.
double subalgebra_residual(const LieAlgebra& a, const Matrix& basis);

Matrix center(const LieAlgebra& a);
Matrix derived(const LieAlgebra& a);
Matrix orthogonal_complement(const InnerProduct& ip, const Matrix& basis);

}  // namespace finslab
