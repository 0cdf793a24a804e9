#pragma once

#include <string>
#include <vector>

#include "ccrlab/config.hpp"
#include "ccrlab/report.hpp"

namespace ccrlab {

/// Names of all verification suites, in canonical order.
const std::vector<std::string>& suite_names();

/// Run one suite against the configuration. When filter_id is nonempty only
/// the check with that id is evaluated (used by convergence ladders).
/// Throws ConfigError for unknown suites or configurations the suite cannot
/// run on (e.g. Monte Carlo suites on a skew-chart grid).
SuiteReport run_suite(const ExperimentConfig& config, const std::string& suite,
                      const std::string& filter_id = "");

struct ConvergenceRow {
  std::int64_t n;
  double abs_error;
  double std_error;
};

/// Re-run one mc-kind check over an n-ladder and collect |error| and stderr
/// per rung. Throws std::invalid_argument for exact-kind checks.
std::vector<ConvergenceRow> emit_convergence(const ExperimentConfig& config,
                                             const std::string& check_id,
                                             const std::vector<std::int64_t>& ladder);

std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

}  // namespace ccrlab
