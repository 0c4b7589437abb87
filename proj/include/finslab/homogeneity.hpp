#pragma once

#include "finslab/lie_algebra.hpp"
#include "finslab/minkowski.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace finslab {

enum class DeformationRegime { identity, lambda_below_one, lambda_above_one };
std::string to_string(DeformationRegime regime);

struct DeformationRecord {
  double lambda = 1.0;
  DeformationRegime regime = DeformationRegime::identity;
};

/// The data (g, h, m1, m2, <,>, F) of an invariant Finsler metric at the origin
/// of G/H. Validated on construction.
class HomogeneousModel {
 public:
  HomogeneousModel(LieAlgebra algebra, std::optional<MatrixRealization> realization,
                   InnerProduct ip, ReductiveDecomposition decomposition, MinkowskiNorm norm,
                   std::optional<DeformationRecord> deformation = std::nullopt);

  const LieAlgebra& algebra() const { return algebra_; }
  const std::optional<MatrixRealization>& realization() const { return realization_; }
  const InnerProduct& ip() const { return ip_; }
  const ReductiveDecomposition& decomposition() const { return decomposition_; }
  const MinkowskiNorm& norm() const { return norm_; }
  const std::optional<DeformationRecord>& deformation() const { return deformation_; }
  int dim() const { return algebra_.dim(); }

  HomogeneousModel with_norm(MinkowskiNorm norm) const;
  /// The Riemannian model (g, h, <,>) underlying this one.
  HomogeneousModel riemannian() const;

 private:
  LieAlgebra algebra_;
  std::optional<MatrixRealization> realization_;
  InnerProduct ip_;
  ReductiveDecomposition decomposition_;
  MinkowskiNorm norm_;
  std::optional<DeformationRecord> deformation_;
};

/// Hypotheses of the deformation theorems are enforced at this level.
inline constexpr double kHypothesisTolerance = 1e-8;

/// Component k: g_{y_m}(y_m, [y, e_k]_m). Zero vector iff y is a geodesic vector.
LieVector geodesic_vector_residual(const HomogeneousModel& model, const LieVector& y);

/// Newton search on the unit sphere of m from seeded random starts. Results
/// are unit (in <,>), deduplicated up to sign, sorted lexicographically
/// descending.
std::vector<LieVector> find_geodesic_vectors(const HomogeneousModel& model, int seed_count,
                                             double tol, std::uint64_t seed);

/// max over m-basis triples of |<[x,y]_m, z> + <y, [x,z]_m>|.
double naturally_reductive_residual(const HomogeneousModel& model);

struct BerwaldResidual {
  double skew = 0.0;  // |<[y,X]_m, z> + <[z,X]_m, y>|
  double orth = 0.0;  // |<[y,z]_m, X>|
  bool holds(double tol) const { return skew <= tol && orth <= tol; }
};

/// The two bracket conditions for a vector X over m-basis pairs.
BerwaldResidual berwald_conditions(const LieAlgebra& algebra, const InnerProduct& ip,
                                   const ReductiveDecomposition& d, const LieVector& X);
BerwaldResidual berwald_test_alphabeta(const HomogeneousModel& model);
/// X is the vector dual to b.
BerwaldResidual berwald_test_cubic(const HomogeneousModel& model);

/// max over m-basis pairs of |<[y,z]_m, X>| for Randers data.
double douglas_randers_orthogonality(const HomogeneousModel& model);

/// <,> on m1 plus lambda <,> on m2; the h block and h-m terms are kept.
InnerProduct deform_inner_product(const InnerProduct& ip, const ReductiveDecomposition& d,
                                  double lambda);

struct DeformationResult {
  double lambda;
  DeformationRegime regime;
  HomogeneousModel model;
  std::optional<LieVector> X_lambda;
  /// |X_lambda| and |X_lambda|^2 in <,>_lambda, both checked against b0 where relevant.
  double x_norm = 0.0;
  double x_norm_squared = 0.0;
  std::vector<std::string> notes;
};

/// Verifies m1 _|_ m2, [m1, m2] in m1 and, for vector data, X in m2. Throws Hypothesis.
DecompositionReport require_deformation_hypotheses(const HomogeneousModel& model,
                                                   const std::optional<LieVector>& X);

DeformationResult deform_riemannian(const HomogeneousModel& model, double lambda);
DeformationResult deform_alphabeta(const HomogeneousModel& model, double lambda);
DeformationResult deform_cubic(const HomogeneousModel& model, double lambda);
/// Dispatches on the norm kind. Navigation norms are not deformable.
DeformationResult deform_model(const HomogeneousModel& model, double lambda);

struct ChainResiduals {
  double k_subalgebra = 0.0;
  double h_subalgebra = 0.0;
  double h_in_k = 0.0;
  double k_m1_bracket = 0.0;    // [k, m1] in m1
  double m1_m2_in_m1 = 0.0;     // |P_m2 [m1, m2]|
  double m1_m2_in_m2 = 0.0;     // |P_m1 [m1, m2]|
  double ad_invariance = 0.0;
};

struct ChainDecomposition {
  ReductiveDecomposition decomposition;
  ChainResiduals residuals;
};

/// g = k + m1 and k = h + m2, orthogonal for an ad-invariant <,>.
ChainDecomposition chain_decomposition(const LieAlgebra& algebra, const InnerProduct& ip,
                                       const Matrix& k_basis, const Matrix& h_basis);

struct EquivalenceSample {
  LieVector y;
  double finsler_residual = 0.0;
  double riemannian_residual = 0.0;
  double factor = 0.0;
  bool agree = false;
};

struct EquivalenceReport {
  int requested = 0;
  int attempts = 0;
  std::vector<EquivalenceSample> samples;
  bool sampler_exhausted = false;
  double min_factor = 0.0;
  double max_identity_gap = 0.0;  // |finsler - factor * riemannian| componentwise
  bool all_agree = false;
};

/// Draws y in m with X _|_ [y, m]_m and compares Finsler and Riemannian
/// geodesic-vector verdicts.
EquivalenceReport geodesic_equivalence_check(const HomogeneousModel& model, int samples, double tol,
                                      std::uint64_t seed);

}  // namespace finslab
