#pragma once

#include <string>
#include <vector>

namespace sheargeo {

struct CheckRecord {
  std::string name;
  std::string anchor;       // short identity description ("paper_anchor" slot)
  std::string grid;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  long points = 0;
  // per-grid-point residuals for plot-ready CSV; empty means one row with
  // the max residual
  std::vector<double> point_values;
};

struct Report {
  std::string config_echo;  // canonical key=value echo of the run config
  std::uint64_t seed = 0;
  std::string version;
  std::vector<CheckRecord> checks;  // kept sorted by name

  void add(CheckRecord r);
  void sort();
  bool all_pass() const;
};

enum class EmitFormat { Json, Csv, Human };
EmitFormat format_from_string(const std::string& s);

// Deterministic serialization: identical Report -> identical bytes.
std::string emit(const Report& report, EmitFormat format);

// Fixed shortest-roundtrip decimal rendering used for every number that
// reaches an output stream.
std::string format_double(double v);

}  // namespace sheargeo
