#pragma once

#include "finslab/geodesic.hpp"
#include "finslab/homogeneity.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace finslab::io {

using json = nlohmann::json;

/// Parse errors carry nlohmann's byte offset plus line and column.
json parse(const std::string& text);
json read_file(const std::filesystem::path& path);

struct AlgebraFile {
  LieAlgebra algebra;
  std::optional<MatrixRealization> realization;
};

/// {"name", "dim", "basis", "structure": [{"i", "j", "coeffs": {"k": c}}], "matrix_realization"}
/// with 0-based i < j and k; antisymmetry is completed on load.
AlgebraFile algebra_from_json(const json& j);
json algebra_to_json(const LieAlgebra& algebra, const std::optional<MatrixRealization>& realization);

/// {"inner_product": gram | "identity", "norm": {...}}.
MinkowskiNorm norm_from_json(const json& j, int dim);
json norm_to_json(const MinkowskiNorm& norm);

/// {"algebra": inline object or path, "decomposition": {"h", "m1", "m2"}, "metric": norm file,
/// "deformation": {"lambda", "regime"} optional}. A document with a top-level "model" key is
/// unwrapped first, so deform reports load directly.
HomogeneousModel model_from_json(const json& j, const std::filesystem::path& base_dir = {});
json model_to_json(const HomogeneousModel& model);

ExpProductCurve curve_from_json(const json& j);
json curve_to_json(const ExpProductCurve& curve);

json vector_to_json(const LieVector& v);
LieVector vector_from_json(const json& j, int dim, const std::string& where);

/// A vector written as a JSON array, comma-separated reals, or a combination of
/// basis labels such as "e1 - 0.5*z2".
LieVector parse_vector_spec(const LieAlgebra& algebra, const std::string& text);

}  // namespace finslab::io
