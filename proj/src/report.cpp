#include "ccrlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ccrlab {

CheckRow exact_row(std::string id, Complex value, Complex target) {
  CheckRow row;
  row.id = std::move(id);
  row.kind = CheckRow::Kind::Exact;
  row.value = value;
  row.target = target;
  const double scale = std::max(1.0, std::abs(target));
  row.z = std::abs(value - target) / (kExactTol * scale);
  row.pass = row.z <= 1.0;
  return row;
}

CheckRow indicator_row(std::string id, bool ok) {
  return exact_row(std::move(id), Complex(ok ? 1 : 0, 0), Complex(1, 0));
}

CheckRow mc_row(std::string id, const MCEstimate& estimate, Complex target) {
  CheckRow row;
  row.id = std::move(id);
  row.kind = CheckRow::Kind::MC;
  row.n = estimate.n;
  row.value = estimate.mean;
  row.target = target;
  row.std_error = estimate.std_error;
  const double diff = std::abs(estimate.mean - target);
  row.z = estimate.std_error > 0.0 ? diff / estimate.std_error
                                   : (diff == 0.0 ? 0.0 : INFINITY);
  row.pass = row.z <= kZBand;
  return row;
}

bool SuiteReport::all_pass() const { return failures() == 0; }

std::size_t SuiteReport::failures() const {
  std::size_t count = 0;
  for (const CheckRow& row : rows)
    if (!row.pass) ++count;
  return count;
}

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string to_csv(const SuiteReport& report) {
  std::ostringstream out;
  out << "check_id,kind,n,value_re,value_im,target_re,target_im,stderr,z,pass\n";
  for (const CheckRow& row : report.rows) {
    out << row.id << ',' << (row.kind == CheckRow::Kind::Exact ? "exact" : "mc") << ','
        << row.n << ',' << format_double(row.value.real()) << ','
        << format_double(row.value.imag()) << ',' << format_double(row.target.real())
        << ',' << format_double(row.target.imag()) << ',' << format_double(row.std_error)
        << ',' << format_double(row.z) << ',' << (row.pass ? 1 : 0) << '\n';
  }
  return out.str();
}

void write_csv_file(const SuiteReport& report, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("write_csv_file: cannot open " + path);
  file << to_csv(report);
}

}  // namespace ccrlab
