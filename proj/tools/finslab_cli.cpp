// finslab command line front end. Links only the C interface.
#include "finslab/finslab.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::json;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInvalid = 2;

struct Failure {
  finslab_status status;
  std::string message;
};

void check(finslab_status s) {
  if (s != FINSLAB_OK) throw Failure{s, finslab_last_error()};
}

struct ModelDeleter {
  void operator()(finslab_model* m) const { finslab_model_free(m); }
};
struct CurveDeleter {
  void operator()(finslab_curve* c) const { finslab_curve_free(c); }
};
struct ReportDeleter {
  void operator()(finslab_report* r) const { finslab_report_free(r); }
};
using ModelPtr = std::unique_ptr<finslab_model, ModelDeleter>;
using CurvePtr = std::unique_ptr<finslab_curve, CurveDeleter>;
using ReportPtr = std::unique_ptr<finslab_report, ReportDeleter>;

std::string take(char* s) {
  std::string out(s ? s : "");
  finslab_string_free(s);
  return out;
}

std::string read_stdin() {
  std::ostringstream ss;
  ss << std::cin.rdbuf();
  return ss.str();
}

struct Args {
  std::string catalog;
  std::string file;
  std::string metric;
  std::optional<double> tol;
  std::optional<double> lambda;
  std::optional<std::uint64_t> seed;
  int samples = 101;
  double t0 = 0.0;
  double t1 = 1.0;
  int trials = 20;
  std::string X, y, v0, W0, curve, what = "model";
  bool compact = false;
};

ModelPtr load_model(const Args& a) {
  if (!a.catalog.empty() == !a.file.empty())
    throw Failure{FINSLAB_ERR_INVALID_ARGUMENT, "give exactly one of --catalog or --file"};
  finslab_model* m = nullptr;
  if (!a.catalog.empty()) {
    if (a.metric.empty()) check(finslab_model_from_catalog(a.catalog.c_str(), &m));
    else check(finslab_model_from_catalog_metric(a.catalog.c_str(), a.metric.c_str(), &m));
    return ModelPtr(m);
  }
  if (!a.metric.empty())
    throw Failure{FINSLAB_ERR_INVALID_ARGUMENT, "--metric only applies to catalog models"};
  if (a.file == "-") check(finslab_model_from_json(read_stdin().c_str(), ".", &m));
  else check(finslab_model_load(a.file.c_str(), &m));
  return ModelPtr(m);
}

std::vector<double> vector_arg(const finslab_model* m, const std::string& text, const char* flag) {
  if (text.empty()) throw Failure{FINSLAB_ERR_INVALID_ARGUMENT, std::string("missing ") + flag};
  std::vector<double> v(static_cast<size_t>(finslab_model_dim(m)));
  const finslab_status s = finslab_model_parse_vector(m, text.c_str(), v.data());
  if (s != FINSLAB_OK) throw Failure{s, std::string(flag) + ": " + finslab_last_error()};
  return v;
}

std::uint64_t resolve_seed(const Args& a) {
  if (a.seed) return *a.seed;
  if (const char* env = std::getenv("FINSLAB_SEED")) {
    try {
      size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw Failure{FINSLAB_ERR_INVALID_ARGUMENT, "FINSLAB_SEED is not an unsigned integer"};
  }
  return finslab_default_seed();
}

finslab_options to_options(const Args& a) {
  finslab_options o;
  finslab_options_default(&o);
  if (a.tol) {
    if (!(*a.tol > 0.0)) throw Failure{FINSLAB_ERR_INVALID_ARGUMENT, "--tol must be positive"};
    o.tol = *a.tol;
  }
  if (a.lambda) {
    if (!(*a.lambda > 0.0)) throw Failure{FINSLAB_ERR_INVALID_ARGUMENT, "--lambda must be positive"};
    o.lambda = *a.lambda;
  }
  if (a.samples < 2) throw Failure{FINSLAB_ERR_INVALID_ARGUMENT, "--samples must be at least 2"};
  o.samples = a.samples;
  o.t0 = a.t0;
  o.t1 = a.t1;
  o.seed = resolve_seed(a);
  o.trials = a.trials;
  return o;
}

void summarize(const std::string& verb, const json& r) {
  std::cerr << "finslab " << verb << ": " << r.value("verdict", std::string("?"));
  for (const char* key : {"max_residual", "residual", "residual_skew", "residual_orth", "pass_fraction",
                          "worst_residual"})
    if (r.contains(key) && r[key].is_number()) std::cerr << "  " << key << "=" << r[key].dump();
  for (const char* key : {"certification", "base_certification", "navigation_certification"})
    if (r.contains(key)) std::cerr << "  " << key << ".max_residual=" << r[key]["max_residual"].dump();
  std::cerr << "\n";
}

int emit(const std::string& verb, finslab_report* raw, const Args& a) {
  ReportPtr report(raw);
  char* text = nullptr;
  check(finslab_report_json(report.get(), a.compact ? -1 : 2, &text));
  const std::string out = take(text);
  std::cout << out << "\n";
  summarize(verb, json::parse(out));
  return finslab_report_passed(report.get()) ? kPass : kFail;
}

int run(const std::string& verb, const Args& a) {
  if (verb == "dump") {
    ModelPtr m = load_model(a);
    char* text = nullptr;
    if (a.what == "model") check(finslab_model_to_json(m.get(), &text));
    else if (a.what == "algebra") check(finslab_algebra_to_json(m.get(), &text));
    else throw Failure{FINSLAB_ERR_INVALID_ARGUMENT, "--what must be model or algebra"};
    std::cout << json::parse(take(text)).dump(a.compact ? -1 : 2) << "\n";
    return kPass;
  }
  const finslab_options o = to_options(a);
  ModelPtr m = load_model(a);
  finslab_report* r = nullptr;
  if (verb == "check") {
    check(finslab_run_check(m.get(), &o, &r));
  } else if (verb == "berwald") {
    std::vector<double> X;
    if (!a.X.empty()) X = vector_arg(m.get(), a.X, "--X");
    check(finslab_run_berwald(m.get(), X.empty() ? nullptr : X.data(), &o, &r));
  } else if (verb == "natred") {
    check(finslab_run_natred(m.get(), &o, &r));
  } else if (verb == "geovec") {
    std::vector<double> y;
    if (!a.y.empty()) y = vector_arg(m.get(), a.y, "--y");
    check(finslab_run_geovec(m.get(), y.empty() ? nullptr : y.data(), &o, &r));
  } else if (verb == "deform") {
    check(finslab_run_deform(m.get(), &o, nullptr, &r));
  } else if (verb == "two-step") {
    const auto v0 = vector_arg(m.get(), a.v0, "--v0");
    check(finslab_run_two_step(m.get(), v0.data(), &o, &r));
  } else if (verb == "verify-curve") {
    if (a.curve.empty()) throw Failure{FINSLAB_ERR_INVALID_ARGUMENT, "missing --curve"};
    finslab_curve* c = nullptr;
    if (a.curve == "-") {
      if (a.file == "-") throw Failure{FINSLAB_ERR_INVALID_ARGUMENT, "only one input can come from stdin"};
      check(finslab_curve_from_json(read_stdin().c_str(), &c));
    } else {
      check(finslab_curve_load(a.curve.c_str(), &c));
    }
    CurvePtr curve(c);
    check(finslab_run_verify_curve(m.get(), curve.get(), &o, &r));
  } else if (verb == "navigation") {
    const auto W0 = vector_arg(m.get(), a.W0, "--W0");
    const auto v0 = vector_arg(m.get(), a.v0, "--v0");
    check(finslab_run_navigation(m.get(), W0.data(), v0.data(), &o, &r));
  } else if (verb == "go-scan") {
    check(finslab_run_go_scan(m.get(), &o, &r));
  } else {
    throw Failure{FINSLAB_ERR_INVALID_ARGUMENT, "unknown verb " + verb};
  }
  return emit(verb, r, a);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finslab: invariant Finsler metrics on Lie groups and homogeneous spaces"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", finslab_version());
  Args a;

  auto model_flags = [&](CLI::App* sub) {
    auto* cat = sub->add_option("--catalog", a.catalog, "catalog entry name");
    auto* file = sub->add_option("--file", a.file, "model JSON file, or - for stdin");
    cat->excludes(file);
    sub->add_option("--metric", a.metric, "catalog norm override: riemannian, randers or cubic");
  };
  auto numeric_flags = [&](CLI::App* sub) {
    sub->add_option("--tol", a.tol, "verdict tolerance (verb default if omitted)");
    sub->add_option("--seed", a.seed, "RNG seed (overrides FINSLAB_SEED)");
    sub->add_flag("--compact", a.compact, "single-line JSON");
  };
  auto curve_flags = [&](CLI::App* sub) {
    sub->add_option("--samples", a.samples, "grid points on [t0, t1]")->capture_default_str();
    sub->add_option("--t0", a.t0, "start of the time interval")->capture_default_str();
    sub->add_option("--t1", a.t1, "end of the time interval")->capture_default_str();
  };

  std::vector<CLI::App*> subs;
  auto* check_cmd = app.add_subcommand("check", "structural checks on a model");
  auto* berwald = app.add_subcommand("berwald", "Berwald conditions for the invariant vector");
  berwald->add_option("--X", a.X, "vector to test instead of the norm's own, e.g. e3");
  auto* natred = app.add_subcommand("natred", "naturally reductive residual");
  auto* geovec = app.add_subcommand("geovec", "geodesic vectors (search, or test --y)");
  geovec->add_option("--y", a.y, "vector to test");
  geovec->add_option("--seeds", a.trials, "number of random Newton seeds")->capture_default_str();
  auto* deform = app.add_subcommand("deform", "deform m2 by lambda; emits a reloadable model");
  auto* two_step = app.add_subcommand("two-step", "certify the two-step curve through v0");
  two_step->add_option("--v0", a.v0, "initial velocity");
  auto* verify = app.add_subcommand("verify-curve", "certify exp(t a_1)...exp(t a_k)");
  verify->add_option("--curve", a.curve, "curve JSON file, or - for stdin");
  auto* navigation = app.add_subcommand("navigation", "Zermelo navigation by a central W0");
  navigation->add_option("--W0", a.W0, "central wind");
  navigation->add_option("--v0", a.v0, "base initial velocity (rescaled to unit speed)");
  auto* go_scan = app.add_subcommand("go-scan", "random two-step certification after deforming");
  go_scan->add_option("--trials", a.trials, "number of random initial velocities")->capture_default_str();
  auto* dump = app.add_subcommand("dump", "write a model or its algebra as JSON");
  dump->add_option("--what", a.what, "model or algebra")->capture_default_str();

  for (auto* sub : {check_cmd, berwald, natred, geovec, deform, two_step, verify, navigation, go_scan}) {
    model_flags(sub);
    numeric_flags(sub);
  }
  model_flags(dump);
  dump->add_flag("--compact", a.compact, "single-line JSON");
  for (auto* sub : {two_step, verify, navigation, go_scan}) curve_flags(sub);
  for (auto* sub : {deform, two_step, navigation, go_scan})
    sub->add_option("--lambda", a.lambda, "deformation parameter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInvalid;
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  try {
    return run(verb, a);
  } catch (const Failure& f) {
    json err{{"verb", verb},
             {"verdict", "error"},
             {"error", {{"status", finslab_status_name(f.status)}, {"message", f.message}}}};
    std::cout << err.dump(a.compact ? -1 : 2) << "\n";
    std::cerr << "finslab " << verb << ": error (" << finslab_status_name(f.status) << "): " << f.message
              << "\n";
    return kInvalid;
  }
}
