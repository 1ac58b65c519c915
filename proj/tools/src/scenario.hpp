#pragma once

// Scenario files and the report they produce.
//
// A scenario ("schema": "cotlab-scenario/1") declares universes, named
// classes, named triples and an ordered list of checks:
//
//   universes  id -> {"algebra": {...}} or {"algebra_file": path},
//                    optional "max_dim"; or {"universe_file": path} for a
//                    saved universe; or {"shape": {...}, "value": id,
//                    optional "max_dim"} for representations of a shape
//                    quiver with values in another universe's algebra.
//   classes    name -> {"universe": id, and one of "predicate": string,
//                    "members": [ids or labels], "intersection": [names],
//                    "union": [names], "lift": phi|psi|pointwise with
//                    "of": value class name}.
//   triples    name -> {"c", "w", "f"} class names over one universe.
//   checks     [{"check": name, "name"?: label, params...}].
//
// Predicates are "all", "none", "projectives", "injectives",
// "members:<id or label>,...", "ext-orthogonal-of:<ref>" (the right Ext^1
// orthogonal) and "left-ext-orthogonal-of:<ref>", where <ref> is a class
// name or again a predicate.
//
// Paths are resolved against the scenario's directory.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cotlab/bqa.hpp"

namespace cotlab::cli {

using bqa::Json;

inline constexpr const char* kScenarioSchema = "cotlab-scenario/1";
inline constexpr const char* kReportSchema = "cotlab-report/1";

std::string tool_version();

struct RunOptions {
  std::optional<std::size_t> max_dim;      // value universes
  std::optional<std::size_t> rep_max_dim;  // representation universes
  std::optional<std::size_t> n_max;
  std::optional<std::size_t> budget;
  // Universe cache; unset falls back to $COTLAB_CACHE_DIR, "" disables it.
  std::optional<std::string> cache_dir;
  std::filesystem::path base_dir = ".";
  // Omitted from the report when false.
  bool timestamp = true;
};

struct RunOutcome {
  Json report;
  // 0 all pass, 1 some fail, 2 some inconclusive and none fail.
  int exit_code = 0;
  std::vector<std::string> summary;
};

// The fixed registry of check names.
const std::vector<std::string>& check_names();

// Throws MalformedInput (or the library's parse errors) for input problems:
// unknown schema, unresolved references, unknown check names, universes
// that cannot be built. Checks that hit a library precondition become
// inconclusive with the reason recorded.
RunOutcome run_scenario(const Json& scenario, const RunOptions& opts = {});

Json read_json_file(const std::filesystem::path& p);
void write_json_file(const std::filesystem::path& p, const Json& j);

}  // namespace cotlab::cli
