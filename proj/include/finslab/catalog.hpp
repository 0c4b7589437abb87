#pragma once

#include "finslab/homogeneity.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace finslab {

struct CatalogEntry {
  std::string name;
  std::string description;
  HomogeneousModel model;
  std::optional<LieVector> X;             // distinguished invariant vector, if any
  std::map<std::string, bool> expected;   // verdict name -> expected outcome
};

std::vector<std::string> catalog_names();

/// Throws NotFound for unknown names.
CatalogEntry load_catalog(const std::string& name);

/// Re-runs every verdict that appears in an expected table.
std::map<std::string, bool> evaluate_verdicts(const HomogeneousModel& model);

/// The entry's model with its norm swapped: "riemannian", "randers" (phi = 1 + s
/// with the entry's X) or "cubic" (b dual to X / |X|).
HomogeneousModel catalog_variant(const CatalogEntry& entry, const std::string& metric);

}  // namespace finslab
