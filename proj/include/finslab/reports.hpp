#pragma once

#include "finslab/geodesic.hpp"
#include "finslab/io.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace finslab::reports {

using json = nlohmann::json;

inline constexpr std::uint64_t kDefaultSeed = 20241016;

struct Options {
  std::optional<double> tol;     // verb default when unset
  std::optional<double> lambda;
  int samples = 101;
  double t0 = 0.0;
  double t1 = 1.0;
  std::uint64_t seed = kDefaultSeed;
  int trials = 20;
};

/// A model plus where it came from; catalog models carry their expected verdicts.
struct Subject {
  HomogeneousModel model;
  std::string source;
  std::optional<std::map<std::string, bool>> expected;
};

struct Outcome {
  json report;
  bool passed = false;
  std::optional<HomogeneousModel> model;  // deform only
};

double default_tolerance(const std::string& verb);

json residual_report_json(const ResidualReport& r, std::uint64_t seed);

Outcome run_check(const Subject& s, const Options& o);
Outcome run_berwald(const Subject& s, const std::optional<LieVector>& X, const Options& o);
Outcome run_natred(const Subject& s, const Options& o);
Outcome run_geovec(const Subject& s, const std::optional<LieVector>& y, const Options& o);
Outcome run_deform(const Subject& s, const Options& o);
Outcome run_two_step(const Subject& s, const LieVector& v0, const Options& o);
Outcome run_verify_curve(const Subject& s, const ExpProductCurve& curve, const Options& o);
Outcome run_navigation(const Subject& s, const LieVector& W0, const LieVector& v0, const Options& o);
Outcome run_go_scan(const Subject& s, const Options& o);

}  // namespace finslab::reports
