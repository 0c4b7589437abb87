#include "finslab/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace finslab::io {

namespace {

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  fail(ErrorCode::Parse, where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(where, std::string("missing field \"") + key + "\"");
  return *it;
}

double real(const json& j, const std::string& where) {
  if (!j.is_number()) schema(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema(where, "non-finite number");
  return v;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) schema(where, "expected an integer");
  return j.get<int>();
}

Matrix square_from_json(const json& j, int n, const std::string& where) {
  if (!j.is_array()) schema(where, "expected an array");
  Matrix m(n, n);
  if (j.size() == static_cast<size_t>(n) * n && (n == 1 || !j.front().is_array())) {
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        m(r, c) = real(j[r * n + c], where + "[" + std::to_string(r * n + c) + "]");
    return m;
  }
  if (j.size() != static_cast<size_t>(n)) schema(where, "expected " + std::to_string(n) + " rows");
  for (int r = 0; r < n; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != static_cast<size_t>(n))
      schema(where + "[" + std::to_string(r) + "]", "expected a row of " + std::to_string(n));
    for (int c = 0; c < n; ++c) m(r, c) = real(row[c], where);
  }
  return m;
}

json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json matrix_flat(const Matrix& m) {
  json flat = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  return flat;
}

Matrix vectors_to_columns(const json& j, int dim, const std::string& where) {
  if (!j.is_array()) schema(where, "expected an array of vectors");
  Matrix out(dim, static_cast<Eigen::Index>(j.size()));
  for (size_t c = 0; c < j.size(); ++c)
    out.col(static_cast<Eigen::Index>(c)) = vector_from_json(j[c], dim, where + "[" + std::to_string(c) + "]");
  return out;
}

json columns_to_vectors(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(vector_to_json(m.col(c)));
  return out;
}

PhiFunction phi_from_json(const json& j, const std::string& where) {
  const std::string kind = field(j, "kind", where).get<std::string>();
  if (kind == "randers") return PhiFunction::randers();
  if (kind == "kropina") return PhiFunction::kropina();
  if (kind == "identity")
    return j.contains("b0") ? PhiFunction::identity(real(j["b0"], where + ".b0")) : PhiFunction::identity();
  if (kind == "polynomial") {
    const json& c = field(j, "coeffs", where);
    if (!c.is_array()) schema(where + ".coeffs", "expected an array");
    std::vector<double> coeffs;
    for (const auto& x : c) coeffs.push_back(real(x, where + ".coeffs"));
    return PhiFunction::polynomial(std::move(coeffs), real(field(j, "b0", where), where + ".b0"));
  }
  schema(where + ".kind", "unknown phi kind '" + kind + "'");
}

json phi_to_json(const PhiFunction& phi) {
  json j{{"kind", to_string(phi.kind())}};
  if (phi.kind() == PhiKind::polynomial) j["coeffs"] = phi.coeffs();
  if ((phi.kind() == PhiKind::polynomial || phi.kind() == PhiKind::identity) && std::isfinite(phi.b0()))
    j["b0"] = phi.b0();
  return j;
}

InnerProduct ip_from_json(const json& j, int dim, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() != "identity") schema(where, "expected \"identity\" or a gram matrix");
    return InnerProduct::identity(dim);
  }
  return InnerProduct(square_from_json(j, dim, where));
}

MinkowskiNorm norm_body(const json& j, const InnerProduct& ip, int dim, const std::string& where) {
  const std::string kind = field(j, "kind", where).get<std::string>();
  if (kind == "riemannian") return MinkowskiNorm::riemannian(ip);
  if (kind == "alpha_beta")
    return MinkowskiNorm::alpha_beta(ip, vector_from_json(field(j, "X", where), dim, where + ".X"),
                                     phi_from_json(field(j, "phi", where), where + ".phi"));
  if (kind == "cubic")
    return MinkowskiNorm::cubic(ip, vector_from_json(field(j, "b", where), dim, where + ".b"));
  if (kind == "navigation") {
    const json& base = field(j, "base", where);
    const InnerProduct base_ip =
        base.contains("inner_product") ? ip_from_json(base["inner_product"], dim, where + ".base.inner_product") : ip;
    const json& body = base.contains("norm") ? base["norm"] : base;
    return MinkowskiNorm::navigation(norm_body(body, base_ip, dim, where + ".base"),
                                     vector_from_json(field(j, "W", where), dim, where + ".W"));
  }
  schema(where + ".kind", "unknown norm kind '" + kind + "'");
}

json norm_body_to_json(const MinkowskiNorm& norm) {
  return std::visit(
      [](const auto& v) -> json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, RiemannianNorm>) {
          return {{"kind", "riemannian"}};
        } else if constexpr (std::is_same_v<V, AlphaBetaNorm>) {
          return {{"kind", "alpha_beta"}, {"X", vector_to_json(v.X)}, {"phi", phi_to_json(v.phi)}};
        } else if constexpr (std::is_same_v<V, CubicNorm>) {
          return {{"kind", "cubic"}, {"b", vector_to_json(v.b)}};
        } else {
          return {{"kind", "navigation"},
                  {"W", vector_to_json(v.W)},
                  {"base", {{"inner_product", matrix_rows(v.base->inner_product().gram())},
                            {"norm", norm_body_to_json(*v.base)}}}};
        }
      },
      norm.variant());
}

}  // namespace

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is a 1-based offset; recover line and column for the message.
    size_t line = 1, column = 1;
    for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    fail(ErrorCode::Parse, "malformed JSON at byte " + std::to_string(e.byte) + " (line " +
                               std::to_string(line) + ", column " + std::to_string(column) +
                               "): " + e.what());
  }
}

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::NotFound, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

json vector_to_json(const LieVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

LieVector vector_from_json(const json& j, int dim, const std::string& where) {
  if (!j.is_array()) schema(where, "expected an array of numbers");
  if (j.size() != static_cast<size_t>(dim))
    schema(where, "expected " + std::to_string(dim) + " components, got " + std::to_string(j.size()));
  LieVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = real(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

AlgebraFile algebra_from_json(const json& j) {
  const std::string name = j.contains("name") ? j["name"].get<std::string>() : "algebra";
  const json& basis = field(j, "basis", "algebra");
  if (!basis.is_array() || basis.empty()) schema("algebra.basis", "expected a non-empty array of labels");
  std::vector<std::string> labels;
  for (const auto& b : basis) {
    if (!b.is_string()) schema("algebra.basis", "labels must be strings");
    labels.push_back(b.get<std::string>());
  }
  const int n = static_cast<int>(labels.size());
  if (j.contains("dim") && integer(j["dim"], "algebra.dim") != n)
    schema("algebra.dim", "does not match the number of basis labels");

  std::vector<LieAlgebra::Entry> entries;
  const json& structure = field(j, "structure", "algebra");
  if (!structure.is_array()) schema("algebra.structure", "expected an array");
  for (size_t s = 0; s < structure.size(); ++s) {
    const std::string where = "algebra.structure[" + std::to_string(s) + "]";
    const json& e = structure[s];
    const int i = integer(field(e, "i", where), where + ".i");
    const int jj = integer(field(e, "j", where), where + ".j");
    const json& coeffs = field(e, "coeffs", where);
    if (!coeffs.is_object()) schema(where + ".coeffs", "expected an object {\"k\": value}");
    for (const auto& [key, value] : coeffs.items()) {
      int k = 0;
      try {
        size_t used = 0;
        k = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        schema(where + ".coeffs", "key '" + key + "' is not an index");
      }
      entries.push_back({i, jj, k, real(value, where + ".coeffs." + key)});
    }
  }
  AlgebraFile out{LieAlgebra::from_upper(name, labels, entries), std::nullopt};
  if (j.contains("matrix_realization")) {
    const json& r = j["matrix_realization"];
    const int size = integer(field(r, "size", "algebra.matrix_realization"), "algebra.matrix_realization.size");
    if (size <= 0) schema("algebra.matrix_realization.size", "must be positive");
    const json& mats = field(r, "matrices", "algebra.matrix_realization");
    if (!mats.is_array() || mats.size() != static_cast<size_t>(n))
      schema("algebra.matrix_realization.matrices", "expected one matrix per basis vector");
    MatrixRealization real_{size, {}};
    for (int i = 0; i < n; ++i)
      real_.matrices.push_back(
          square_from_json(mats[i], size, "algebra.matrix_realization.matrices[" + std::to_string(i) + "]"));
    out.realization = std::move(real_);
  }
  return out;
}

json algebra_to_json(const LieAlgebra& algebra, const std::optional<MatrixRealization>& realization) {
  const int n = algebra.dim();
  json structure = json::array();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      json coeffs = json::object();
      for (int k = 0; k < n; ++k)
        if (algebra.c(i, j, k) != 0.0) coeffs[std::to_string(k)] = algebra.c(i, j, k);
      if (!coeffs.empty()) structure.push_back({{"i", i}, {"j", j}, {"coeffs", coeffs}});
    }
  json out{{"name", algebra.name()}, {"dim", n}, {"basis", algebra.labels()}, {"structure", structure}};
  if (realization) {
    json mats = json::array();
    for (const auto& m : realization->matrices) mats.push_back(matrix_flat(m));
    out["matrix_realization"] = {{"size", realization->size}, {"matrices", mats}};
  }
  return out;
}

MinkowskiNorm norm_from_json(const json& j, int dim) {
  const InnerProduct ip = ip_from_json(field(j, "inner_product", "metric"), dim, "metric.inner_product");
  return norm_body(field(j, "norm", "metric"), ip, dim, "metric.norm");
}

json norm_to_json(const MinkowskiNorm& norm) {
  return {{"inner_product", matrix_rows(norm.inner_product().gram())}, {"norm", norm_body_to_json(norm)}};
}

HomogeneousModel model_from_json(const json& doc, const std::filesystem::path& base_dir) {
  const json& j = doc.is_object() && doc.contains("model") ? doc["model"] : doc;
  const json& a = field(j, "algebra", "model");
  AlgebraFile alg = [&] {
    if (a.is_string()) {
      std::filesystem::path p(a.get<std::string>());
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      return algebra_from_json(read_file(p));
    }
    return algebra_from_json(a);
  }();
  const int n = alg.algebra.dim();
  const json& d = field(j, "decomposition", "model");
  auto part = [&](const char* key) {
    return d.contains(key) ? vectors_to_columns(d[key], n, std::string("model.decomposition.") + key)
                           : Matrix(n, 0);
  };
  ReductiveDecomposition decomposition(part("h"), part("m1"), part("m2"));
  const json& metric = field(j, "metric", "model");
  MinkowskiNorm norm = norm_from_json(metric, n);
  // The model inner product: explicit, or the one the norm is built on.
  InnerProduct ip = j.contains("inner_product") ? ip_from_json(j["inner_product"], n, "model.inner_product")
                                                : norm.inner_product();
  std::optional<DeformationRecord> deformation;
  if (j.contains("deformation") && !j["deformation"].is_null()) {
    const double lambda = real(field(j["deformation"], "lambda", "model.deformation"), "model.deformation.lambda");
    if (!(lambda > 0.0)) schema("model.deformation.lambda", "must be positive");
    deformation = DeformationRecord{
        lambda, lambda == 1.0 ? DeformationRegime::identity
                              : (lambda < 1.0 ? DeformationRegime::lambda_below_one
                                              : DeformationRegime::lambda_above_one)};
  }
  return HomogeneousModel(std::move(alg.algebra), std::move(alg.realization), std::move(ip),
                          std::move(decomposition), std::move(norm), deformation);
}

json model_to_json(const HomogeneousModel& model) {
  const auto& d = model.decomposition();
  json out{{"algebra", algebra_to_json(model.algebra(), model.realization())},
           {"decomposition",
            {{"h", columns_to_vectors(d.basis(Part::h))},
             {"m1", columns_to_vectors(d.basis(Part::m1))},
             {"m2", columns_to_vectors(d.basis(Part::m2))}}},
           {"inner_product", matrix_rows(model.ip().gram())},
           {"metric", norm_to_json(model.norm())}};
  if (model.deformation())
    out["deformation"] = {{"lambda", model.deformation()->lambda},
                          {"regime", to_string(model.deformation()->regime)}};
  return out;
}

ExpProductCurve curve_from_json(const json& j) {
  const json& f = field(j, "factors", "curve");
  if (!f.is_array() || f.empty()) schema("curve.factors", "expected a non-empty array of vectors");
  if (!f.front().is_array()) schema("curve.factors[0]", "expected an array of numbers");
  const int n = static_cast<int>(f.front().size());
  std::vector<LieVector> factors;
  for (size_t i = 0; i < f.size(); ++i)
    factors.push_back(vector_from_json(f[i], n, "curve.factors[" + std::to_string(i) + "]"));
  return ExpProductCurve(std::move(factors));
}

json curve_to_json(const ExpProductCurve& curve) {
  json f = json::array();
  for (const auto& v : curve.factors()) f.push_back(vector_to_json(v));
  return {{"factors", f}};
}

LieVector parse_vector_spec(const LieAlgebra& algebra, const std::string& raw) {
  const int n = algebra.dim();
  std::string text;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) text.push_back(ch);
  require(!text.empty(), ErrorCode::Parse, "empty vector");
  if (text.front() == '[') return vector_from_json(parse(text), n, "vector");

  // Plain numbers separated by commas.
  if (text.find_first_not_of("0123456789.,+-eE") == std::string::npos && text.find(',') != std::string::npos) {
    LieVector v(n);
    std::stringstream ss(text);
    std::string item;
    int i = 0;
    while (std::getline(ss, item, ',')) {
      require(i < n, ErrorCode::Parse, "vector has more than " + std::to_string(n) + " components");
      try {
        v(i++) = std::stod(item);
      } catch (const std::exception&) {
        fail(ErrorCode::Parse, "cannot read '" + item + "' as a number");
      }
    }
    require(i == n, ErrorCode::Parse, "vector needs " + std::to_string(n) + " components");
    return v;
  }

  // Linear combination of labels: term (('+'|'-') term)*, term = [coef '*'] label | coef.
  LieVector v = LieVector::Zero(n);
  size_t pos = 0;
  while (pos < text.size()) {
    double sign = 1.0;
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1.0 : 1.0;
      ++pos;
    }
    size_t end = pos;
    while (end < text.size() && text[end] != '+' && text[end] != '-') ++end;
    std::string term = text.substr(pos, end - pos);
    require(!term.empty(), ErrorCode::Parse, "malformed vector '" + raw + "'");
    double coef = 1.0;
    std::string label = term;
    if (auto star = term.find('*'); star != std::string::npos) {
      try {
        size_t used = 0;
        coef = std::stod(term.substr(0, star), &used);
        require(used == star, ErrorCode::Parse, "bad coefficient in '" + term + "'");
      } catch (const std::logic_error&) {
        fail(ErrorCode::Parse, "bad coefficient in '" + term + "'");
      }
      label = term.substr(star + 1);
    }
    auto idx = algebra.index_of(label);
    require(idx.has_value(), ErrorCode::Parse, "unknown basis label '" + label + "'");
    v(*idx) += sign * coef;
    pos = end;
  }
  return v;
}

}  // namespace finslab::io
