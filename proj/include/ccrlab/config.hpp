#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccrlab/grid.hpp"
#include "ccrlab/levy.hpp"

namespace ccrlab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-suite execution parameters. Unset fields inherit the experiment-level
/// values.
struct SuiteParams {
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string corpus = "default";
};

/// A user-defined label: explicit cell values or an indicator/oscillation
/// preset, attached to a fiber.
struct LabelSpec {
  LatticeVector fiber;
  std::string preset;  // "cells", "indicator", or "oscillation"
  std::vector<std::tuple<std::int64_t, double, double>> cells;
  LatticeVector from, to;
  Complex value{1.0, 0.0};
  double frequency = 0.0;
};

/// Parsed experiment configuration. Seeds are mandatory in files: a config
/// without an explicit seed is rejected rather than defaulted.
class ExperimentConfig {
 public:
  static ExperimentConfig load_file(const std::string& path);
  static ExperimentConfig load_json_text(const std::string& text,
                                         const std::string& origin = "<string>");
  /// The pinned desk-scale setup used by the acceptance run.
  static ExperimentConfig builtin_default();

  std::uint64_t seed = 0;
  std::int64_t n = 100000;
  int workers = 1;
  std::string output_dir = "out";
  GridPtr grid;
  std::vector<std::pair<std::string, LevyMeasure>> levy;
  std::vector<std::string> suites;  // "all" expands to every suite
  std::map<std::string, SuiteParams> suite_params;
  std::map<std::string, LabelSpec> labels;

  SuiteParams params_for(const std::string& suite) const;
  const LevyMeasure& levy_by_name(const std::string& name) const;
  /// First configured measure of the given family; throws if absent.
  const LevyMeasure& levy_by_family(LevyMeasure::Family family) const;
};

}  // namespace ccrlab
