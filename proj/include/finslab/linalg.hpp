#pragma once

#include "finslab/types.hpp"

namespace finslab::linalg {

/// Relative singular-value cutoff used for every rank decision.
inline constexpr double kRankTolerance = 1e-10;

/// Matrix exponential by scaling and squaring with a Taylor kernel.
/// Intended for the small dense matrices that show up here (d <= ~10).
Matrix expm(const Matrix& a);

/// Numerical rank with cutoff kRankTolerance * largest singular value.
Eigen::Index rank(const Matrix& a);

/// Basis (as columns) of the null space of `a`.
Matrix null_space(const Matrix& a);

/// Basis (as columns) of the column space of `a`.
Matrix column_space(const Matrix& a);

/// Canonical basis of span(columns): reduced row echelon form of the row
/// space, so equal subspaces give identical output.
Matrix canonical_basis(const Matrix& columns);

/// Largest absolute entry, 0 for empty matrices.
double max_abs(const Matrix& a);

}  // namespace finslab::linalg
