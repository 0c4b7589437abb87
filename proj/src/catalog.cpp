#include "finslab/catalog.hpp"

#include "finslab/linalg.hpp"

#include <complex>

namespace finslab {

namespace {

using Complex = std::complex<double>;
using CMatrix = Eigen::Matrix2cd;

Matrix realify(const Eigen::MatrixXcd& z) {
  const Eigen::Index n = z.rows();
  Matrix out(2 * n, 2 * n);
  out << z.real(), -z.imag(), z.imag(), z.real();
  return out;
}

// e_k = -i sigma_k / 2, so [e1, e2] = e3 cyclically.
std::vector<Matrix> su2_matrices() {
  const Complex i(0.0, 1.0);
  CMatrix s1, s2, s3;
  s1 << 0, 1, 1, 0;
  s2 << 0, -i, i, 0;
  s3 << 1, 0, 0, -1;
  return {realify(-0.5 * i * s1), realify(-0.5 * i * s2), realify(-0.5 * i * s3)};
}

LieAlgebra su2_algebra(const std::string& name, std::vector<std::string> labels) {
  return LieAlgebra::from_upper(name, std::move(labels),
                                {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {0, 2, 1, -1.0}});
}

Matrix columns(int n, std::initializer_list<int> idx) {
  Matrix out = Matrix::Zero(n, static_cast<Eigen::Index>(idx.size()));
  int c = 0;
  for (int i : idx) out(i, c++) = 1.0;
  return out;
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

std::map<std::string, bool> structural(bool ad_invariant) {
  return {{"algebra", true},          {"realization", true},
          {"ad_invariant", ad_invariant}, {"reductive", true},
          {"m1_m2_orthogonal", true}, {"m1_m2_bracket_in_m1", true},
          {"naturally_reductive", ad_invariant}, {"deformation_hypotheses", true}};
}

CatalogEntry make_su2() {
  LieAlgebra a = su2_algebra("su2", {"e1", "e2", "e3"});
  InnerProduct ip = InnerProduct::identity(3);
  auto d = ReductiveDecomposition::lie_group(columns(3, {0, 1}), columns(3, {2}));
  HomogeneousModel m(a, MatrixRealization{4, su2_matrices()}, ip, d, MinkowskiNorm::riemannian(ip));
  return {"su2", "su(2) with the bi-invariant inner product, m1 = {e1, e2}, m2 = {e3}", m,
          std::nullopt, structural(true)};
}

CatalogEntry make_so3() {
  // Basis (Lx, Lz, Ly) with (L_i)_{jk} = -eps_{ijk}; so [Lx, Lz] = -Ly.
  LieAlgebra a = LieAlgebra::from_upper("so3", {"Lx", "Lz", "Ly"},
                                        {{0, 1, 2, -1.0}, {0, 2, 1, 1.0}, {1, 2, 0, -1.0}});
  auto gen = [](int i) {
    Matrix l = Matrix::Zero(3, 3);
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    l(j, k) = -1.0;
    l(k, j) = 1.0;
    return l;
  };
  InnerProduct ip = InnerProduct::identity(3);
  auto d = ReductiveDecomposition::lie_group(columns(3, {0, 1}), columns(3, {2}));
  HomogeneousModel m(a, MatrixRealization{3, {gen(0), gen(2), gen(1)}}, ip, d,
                     MinkowskiNorm::riemannian(ip));
  return {"so3", "so(3) in the basis (Lx, Lz, Ly), isomorphic to su2", m, std::nullopt,
          structural(true)};
}

CatalogEntry make_u2() {
  LieAlgebra a = LieAlgebra::from_upper("u2", {"e1", "e2", "e3", "e4"},
                                        {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {0, 2, 1, -1.0}});
  auto mats = su2_matrices();
  const Complex i(0.0, 1.0);
  mats.push_back(realify(0.5 * i * CMatrix::Identity()));
  InnerProduct ip(0.5 * Matrix::Identity(4, 4));
  auto d = ReductiveDecomposition::lie_group(columns(4, {0, 1, 2}), columns(4, {3}));
  const LieVector X = LieVector::Unit(4, 3);
  HomogeneousModel m(a, MatrixRealization{4, mats}, ip, d,
                     MinkowskiNorm::alpha_beta(ip, X, PhiFunction::randers()));
  auto expected = structural(true);
  expected["berwald"] = true;
  return {"u2", "u(2) = su(2) + center, Randers norm with X = e4 central", m, X, expected};
}

CatalogEntry make_su2_plus_r2() {
  LieAlgebra a = LieAlgebra::from_upper("su2_plus_r2", {"e1", "e2", "e3", "z1", "z2"},
                                        {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {0, 2, 1, -1.0}});
  auto su2 = su2_matrices();
  std::vector<Matrix> mats;
  for (const auto& s : su2) mats.push_back(block_diag(s, Matrix::Zero(2, 2)));
  Matrix z1 = Matrix::Zero(2, 2), z2 = Matrix::Zero(2, 2);
  z1(0, 0) = 1.0;
  z2(1, 1) = 1.0;
  mats.push_back(block_diag(Matrix::Zero(4, 4), z1));
  mats.push_back(block_diag(Matrix::Zero(4, 4), z2));
  Matrix gram = Matrix::Identity(5, 5);
  gram(3, 3) = gram(4, 4) = 0.25;  // |z1| = 1/2 keeps X = z1 inside the Randers range
  InnerProduct ip(gram);
  auto d = ReductiveDecomposition::lie_group(columns(5, {0, 1}), columns(5, {2, 3, 4}));
  const LieVector X = LieVector::Unit(5, 3);
  HomogeneousModel m(a, MatrixRealization{6, mats}, ip, d,
                     MinkowskiNorm::alpha_beta(ip, X, PhiFunction::randers()));
  auto expected = structural(true);
  expected["berwald"] = true;
  return {"su2_plus_r2",
          "su(2) + R^2, m1 = {e1, e2}, m2 = {e3, z1, z2}, Randers norm with X = z1 central", m, X,
          expected};
}

CatalogEntry make_heis3() {
  LieAlgebra a = LieAlgebra::from_upper("heis3", {"E12", "E23", "E13"}, {{0, 1, 2, 1.0}});
  auto unit = [](int r, int c) {
    Matrix e = Matrix::Zero(3, 3);
    e(r, c) = 1.0;
    return e;
  };
  InnerProduct ip = InnerProduct::identity(3);
  auto d = ReductiveDecomposition::lie_group(columns(3, {0, 1}), columns(3, {2}));
  HomogeneousModel m(a, MatrixRealization{3, {unit(0, 1), unit(1, 2), unit(0, 2)}}, ip, d,
                     MinkowskiNorm::riemannian(ip));
  return {"heis3", "Heisenberg algebra; no ad-invariant inner product exists", m, std::nullopt,
          structural(false)};
}

CatalogEntry make_su2_chain() {
  LieAlgebra a = su2_algebra("su2_chain", {"e1", "e2", "e3"});
  InnerProduct ip = InnerProduct::identity(3);
  ChainDecomposition chain = chain_decomposition(a, ip, columns(3, {2}), Matrix::Zero(3, 0));
  HomogeneousModel m(a, MatrixRealization{4, su2_matrices()}, ip, chain.decomposition,
                     MinkowskiNorm::riemannian(ip));
  return {"su2_chain", "su(2) > k = span{e3} > h = 0, Riemannian", m, std::nullopt,
          structural(true)};
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"su2", "u2", "su2_plus_r2", "so3", "heis3", "su2_chain"};
}

CatalogEntry load_catalog(const std::string& name) {
  if (name == "su2") return make_su2();
  if (name == "u2") return make_u2();
  if (name == "su2_plus_r2") return make_su2_plus_r2();
  if (name == "so3") return make_so3();
  if (name == "heis3") return make_heis3();
  if (name == "su2_chain") return make_su2_chain();
  fail(ErrorCode::NotFound, "unknown catalog entry '" + name + "'");
}

std::map<std::string, bool> evaluate_verdicts(const HomogeneousModel& model) {
  std::map<std::string, bool> out;
  const auto& a = model.algebra();
  out["algebra"] = validate_algebra(a).passed;
  out["realization"] =
      model.realization() && realization_residual(a, *model.realization()) <= kStructureTolerance;
  out["ad_invariant"] =
      ad_invariance_residual(a, model.ip(), Matrix::Identity(a.dim(), a.dim())) <= 1e-10;
  const DecompositionReport r = check_decomposition(a, model.decomposition(), model.ip());
  out["reductive"] = r.h_closed <= kStructureTolerance && r.h_m_bracket <= kStructureTolerance;
  out["m1_m2_orthogonal"] = r.m1_m2_orthogonality <= kStructureTolerance;
  out["m1_m2_bracket_in_m1"] = r.m1_m2_bracket_in_m1 <= kStructureTolerance;
  out["naturally_reductive"] = naturally_reductive_residual(model) <= 1e-10;

  std::optional<LieVector> X;
  if (model.norm().kind() == NormKind::alpha_beta) X = model.norm().as<AlphaBetaNorm>().X;
  if (model.norm().kind() == NormKind::cubic) X = model.norm().as<CubicNorm>().dual_vector();
  try {
    require_deformation_hypotheses(model, X);
    out["deformation_hypotheses"] = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Hypothesis) throw;
    out["deformation_hypotheses"] = false;
  }
  if (model.norm().kind() == NormKind::alpha_beta)
    out["berwald"] = berwald_test_alphabeta(model).holds(kStructureTolerance);
  if (model.norm().kind() == NormKind::cubic)
    out["berwald"] = berwald_test_cubic(model).holds(kStructureTolerance);
  return out;
}

HomogeneousModel catalog_variant(const CatalogEntry& entry, const std::string& metric) {
  const auto& model = entry.model;
  if (metric == "riemannian") return model.riemannian();
  require(metric == "randers" || metric == "cubic", ErrorCode::InvalidArgument,
          "unknown metric '" + metric + "' (expected riemannian, randers or cubic)");
  require(entry.X.has_value(), ErrorCode::InvalidArgument,
          "catalog entry '" + entry.name + "' has no invariant vector for a " + metric + " norm");
  if (metric == "randers")
    return model.with_norm(MinkowskiNorm::alpha_beta(model.ip(), *entry.X, PhiFunction::randers()));
  const LieVector unit = *entry.X / model.ip().norm(*entry.X);
  return model.with_norm(MinkowskiNorm::cubic(model.ip(), model.ip().gram() * unit));
}

}  // namespace finslab
