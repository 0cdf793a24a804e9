#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccrlab/pointproc.hpp"

namespace ccrlab {

/// Tolerance for exact-kind checks: |value - target| <= kExactTol * scale
/// with scale = max(1, |target|).
constexpr double kExactTol = 1e-12;
/// Acceptance band for Monte Carlo checks: |z| <= 4.
constexpr double kZBand = 4.0;

/// One verification check. Exact rows certify an identity computed along two
/// routes; mc rows compare a Monte Carlo estimate to a closed-form target.
/// For exact rows z is the deviation in units of the exact tolerance, so
/// pass means z <= 1 there and z <= 4 for mc rows.
struct CheckRow {
  enum class Kind { Exact, MC };
  std::string id;
  Kind kind = Kind::Exact;
  std::int64_t n = 0;  // replicates; 0 for exact rows
  Complex value;
  Complex target;
  double std_error = 0.0;  // 0 for exact rows
  double z = 0.0;
  bool pass = false;
};

CheckRow exact_row(std::string id, Complex value, Complex target);
/// Booleans encoded as value in {0,1} against target 1.
CheckRow indicator_row(std::string id, bool ok);
CheckRow mc_row(std::string id, const MCEstimate& estimate, Complex target);

struct SuiteReport {
  std::string suite;
  std::vector<CheckRow> rows;
  double seconds = 0.0;

  bool all_pass() const;
  std::size_t failures() const;
};

/// Deterministic CSV: fixed header, %.17g doubles, '\n' line endings; the
/// wall-clock duration is not written. Identical configs and seeds give
/// byte-identical output whatever the worker count.
std::string to_csv(const SuiteReport& report);
void write_csv_file(const SuiteReport& report, const std::string& path);

std::string format_double(double v);

}  // namespace ccrlab
