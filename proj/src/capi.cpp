#include "finslab/finslab.h"

#include "finslab/catalog.hpp"
#include "finslab/io.hpp"
#include "finslab/reports.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>

using namespace finslab;

struct finslab_model {
  reports::Subject subject;
};

struct finslab_curve {
  ExpProductCurve curve;
};

struct finslab_report {
  reports::Outcome outcome;
};

namespace {

thread_local std::string last_error;

finslab_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return FINSLAB_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return FINSLAB_ERR_PARSE;
    case ErrorCode::Hypothesis: return FINSLAB_ERR_HYPOTHESIS;
    case ErrorCode::Domain: return FINSLAB_ERR_DOMAIN;
    case ErrorCode::NotFound: return FINSLAB_ERR_NOT_FOUND;
    case ErrorCode::Numeric: return FINSLAB_ERR_NUMERIC;
  }
  return FINSLAB_ERR_INTERNAL;
}

template <class F>
finslab_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return FINSLAB_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return FINSLAB_ERR_INTERNAL;
}

void need(const void* p, const char* what) {
  require(p != nullptr, ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

LieVector vec(const finslab_model* m, const double* data) {
  return Eigen::Map<const LieVector>(data, m->subject.model.dim());
}

void write(const LieVector& v, double* out) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v(i);
}

reports::Options options(const finslab_options* o) {
  finslab_options defaults;
  finslab_options_default(&defaults);
  const finslab_options& src = o ? *o : defaults;
  reports::Options out;
  if (src.tol > 0.0) out.tol = src.tol;
  else if (src.tol < 0.0 || std::isnan(src.tol)) fail(ErrorCode::InvalidArgument, "tol must be positive");
  if (src.lambda > 0.0) out.lambda = src.lambda;
  else if (src.lambda < 0.0 || std::isnan(src.lambda)) fail(ErrorCode::InvalidArgument, "lambda must be positive");
  out.samples = src.samples;
  out.t0 = src.t0;
  out.t1 = src.t1;
  out.seed = src.seed;
  out.trials = src.trials;
  return out;
}

finslab_model* wrap(HomogeneousModel model, std::string source,
                    std::optional<std::map<std::string, bool>> expected = std::nullopt) {
  return new finslab_model{reports::Subject{std::move(model), std::move(source), std::move(expected)}};
}

template <class F>
finslab_status run_verb(const finslab_model* model, finslab_report** out, F&& f) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = new finslab_report{f()};
  });
}

}  // namespace

extern "C" {

const char* finslab_version(void) { return "0.1.0"; }

const char* finslab_last_error(void) { return last_error.c_str(); }

const char* finslab_status_name(finslab_status status) {
  switch (status) {
    case FINSLAB_OK: return "ok";
    case FINSLAB_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case FINSLAB_ERR_PARSE: return "parse";
    case FINSLAB_ERR_HYPOTHESIS: return "hypothesis";
    case FINSLAB_ERR_DOMAIN: return "domain";
    case FINSLAB_ERR_NOT_FOUND: return "not_found";
    case FINSLAB_ERR_NUMERIC: return "numeric";
    case FINSLAB_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void finslab_string_free(char* s) { std::free(s); }

void finslab_options_default(finslab_options* o) {
  if (o == nullptr) return;
  o->tol = 0.0;
  o->lambda = 0.0;
  o->samples = 101;
  o->t0 = 0.0;
  o->t1 = 1.0;
  o->seed = reports::kDefaultSeed;
  o->trials = 20;
}

uint64_t finslab_default_seed(void) { return reports::kDefaultSeed; }

finslab_status finslab_catalog_names(char** out_json) {
  return guarded([&] {
    need(out_json, "out_json");
    *out_json = copy_string(io::json(catalog_names()).dump());
  });
}

finslab_status finslab_model_from_catalog(const char* name, finslab_model** out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    CatalogEntry e = load_catalog(name);
    *out = wrap(e.model, "catalog:" + e.name, e.expected);
  });
}

finslab_status finslab_model_from_catalog_metric(const char* name, const char* metric,
                                                 finslab_model** out) {
  return guarded([&] {
    need(name, "name");
    need(metric, "metric");
    need(out, "out");
    CatalogEntry e = load_catalog(name);
    HomogeneousModel m = catalog_variant(e, metric);
    std::optional<std::map<std::string, bool>> expected;
    if (m.norm().kind() == e.model.norm().kind()) expected = e.expected;
    *out = wrap(std::move(m), "catalog:" + e.name + ":" + metric, expected);
  });
}

finslab_status finslab_model_from_json(const char* text, const char* base_dir, finslab_model** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = wrap(io::model_from_json(io::parse(text), base_dir ? base_dir : ""), "json");
  });
}

finslab_status finslab_model_load(const char* path, finslab_model** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    const std::filesystem::path p(path);
    *out = wrap(io::model_from_json(io::read_file(p), p.parent_path()), "file:" + p.string());
  });
}

finslab_status finslab_model_to_json(const finslab_model* model, char** out_json) {
  return guarded([&] {
    need(model, "model");
    need(out_json, "out_json");
    *out_json = copy_string(io::model_to_json(model->subject.model).dump(2));
  });
}

finslab_status finslab_algebra_to_json(const finslab_model* model, char** out_json) {
  return guarded([&] {
    need(model, "model");
    need(out_json, "out_json");
    const auto& m = model->subject.model;
    *out_json = copy_string(io::algebra_to_json(m.algebra(), m.realization()).dump(2));
  });
}

int finslab_model_dim(const finslab_model* model) { return model ? model->subject.model.dim() : 0; }

void finslab_model_free(finslab_model* model) { delete model; }

finslab_status finslab_model_parse_vector(const finslab_model* model, const char* text, double* out) {
  return guarded([&] {
    need(model, "model");
    need(text, "text");
    need(out, "out");
    write(io::parse_vector_spec(model->subject.model.algebra(), text), out);
  });
}

finslab_status finslab_norm_value(const finslab_model* model, const double* y, size_t n, double* out) {
  return guarded([&] {
    need(model, "model");
    need(y, "y");
    need(out, "out");
    require(n == static_cast<size_t>(model->subject.model.dim()), ErrorCode::InvalidArgument,
            "vector has the wrong dimension");
    *out = norm_value(model->subject.model.norm(), vec(model, y));
  });
}

finslab_status finslab_geodesic_vector_residual(const finslab_model* model, const double* y, size_t n,
                                                double* out) {
  return guarded([&] {
    need(model, "model");
    need(y, "y");
    need(out, "out");
    require(n == static_cast<size_t>(model->subject.model.dim()), ErrorCode::InvalidArgument,
            "vector has the wrong dimension");
    write(geodesic_vector_residual(model->subject.model, vec(model, y)), out);
  });
}

finslab_status finslab_curve_from_factors(const double* factors, size_t k, size_t n, finslab_curve** out) {
  return guarded([&] {
    need(factors, "factors");
    need(out, "out");
    require(k > 0 && n > 0, ErrorCode::InvalidArgument, "empty curve");
    std::vector<LieVector> f;
    for (size_t i = 0; i < k; ++i)
      f.push_back(Eigen::Map<const LieVector>(factors + i * n, static_cast<Eigen::Index>(n)));
    *out = new finslab_curve{ExpProductCurve(std::move(f))};
  });
}

finslab_status finslab_curve_from_json(const char* text, finslab_curve** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new finslab_curve{io::curve_from_json(io::parse(text))};
  });
}

finslab_status finslab_curve_load(const char* path, finslab_curve** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new finslab_curve{io::curve_from_json(io::read_file(path))};
  });
}

finslab_status finslab_body_velocity(const finslab_model* model, const finslab_curve* curve, double t,
                                     double* out) {
  return guarded([&] {
    need(model, "model");
    need(curve, "curve");
    need(out, "out");
    write(body_velocity(model->subject.model.algebra(), curve->curve, t), out);
  });
}

void finslab_curve_free(finslab_curve* curve) { delete curve; }

finslab_status finslab_run_check(const finslab_model* model, const finslab_options* o,
                                 finslab_report** out) {
  return run_verb(model, out, [&] { return reports::run_check(model->subject, options(o)); });
}

finslab_status finslab_run_berwald(const finslab_model* model, const double* X, const finslab_options* o,
                                   finslab_report** out) {
  return run_verb(model, out, [&] {
    std::optional<LieVector> x;
    if (X) x = vec(model, X);
    return reports::run_berwald(model->subject, x, options(o));
  });
}

finslab_status finslab_run_natred(const finslab_model* model, const finslab_options* o,
                                  finslab_report** out) {
  return run_verb(model, out, [&] { return reports::run_natred(model->subject, options(o)); });
}

finslab_status finslab_run_geovec(const finslab_model* model, const double* y, const finslab_options* o,
                                  finslab_report** out) {
  return run_verb(model, out, [&] {
    std::optional<LieVector> v;
    if (y) v = vec(model, y);
    return reports::run_geovec(model->subject, v, options(o));
  });
}

finslab_status finslab_run_deform(const finslab_model* model, const finslab_options* o,
                                  finslab_model** out_model, finslab_report** out) {
  return run_verb(model, out, [&] {
    reports::Outcome r = reports::run_deform(model->subject, options(o));
    if (out_model) *out_model = wrap(*r.model, model->subject.source + ":deformed");
    return r;
  });
}

finslab_status finslab_run_two_step(const finslab_model* model, const double* v0, const finslab_options* o,
                                    finslab_report** out) {
  return run_verb(model, out, [&] {
    need(v0, "v0");
    return reports::run_two_step(model->subject, vec(model, v0), options(o));
  });
}

finslab_status finslab_run_verify_curve(const finslab_model* model, const finslab_curve* curve,
                                        const finslab_options* o, finslab_report** out) {
  return run_verb(model, out, [&] {
    need(curve, "curve");
    return reports::run_verify_curve(model->subject, curve->curve, options(o));
  });
}

finslab_status finslab_run_navigation(const finslab_model* model, const double* W0, const double* v0,
                                      const finslab_options* o, finslab_report** out) {
  return run_verb(model, out, [&] {
    need(W0, "W0");
    need(v0, "v0");
    return reports::run_navigation(model->subject, vec(model, W0), vec(model, v0), options(o));
  });
}

finslab_status finslab_run_go_scan(const finslab_model* model, const finslab_options* o,
                                   finslab_report** out) {
  return run_verb(model, out, [&] { return reports::run_go_scan(model->subject, options(o)); });
}

int finslab_report_passed(const finslab_report* report) {
  return report && report->outcome.passed ? 1 : 0;
}

finslab_status finslab_report_json(const finslab_report* report, int indent, char** out_json) {
  return guarded([&] {
    need(report, "report");
    need(out_json, "out_json");
    *out_json = copy_string(report->outcome.report.dump(indent));
  });
}

finslab_status finslab_report_number(const finslab_report* report, const char* key, double* out) {
  return guarded([&] {
    need(report, "report");
    need(key, "key");
    need(out, "out");
    const auto& j = report->outcome.report;
    auto it = j.find(key);
    require(it != j.end() && it->is_number(), ErrorCode::NotFound,
            std::string("report has no numeric field '") + key + "'");
    *out = it->get<double>();
  });
}

void finslab_report_free(finslab_report* report) { delete report; }

}  // extern "C"
