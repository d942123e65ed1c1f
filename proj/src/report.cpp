#include "sheargeo/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "sheargeo/errors.hpp"

namespace sheargeo {

void Report::add(CheckRecord r) { checks.push_back(std::move(r)); }

void Report::sort() {
  std::sort(checks.begin(), checks.end(),
            [](const CheckRecord& a, const CheckRecord& b) {
              return a.name < b.name;
            });
}

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

EmitFormat format_from_string(const std::string& s) {
  if (s == "json") return EmitFormat::Json;
  if (s == "csv") return EmitFormat::Csv;
  if (s == "human") return EmitFormat::Human;
  throw ConfigError("unknown format '" + s + "' (expected json|csv|human)");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

static std::string emit_json(const Report& rep) {
  nlohmann::ordered_json j;
  j["config"] = rep.config_echo;
  j["seed"] = rep.seed;
  j["version"] = rep.version;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : rep.checks) {
    nlohmann::ordered_json r;
    r["name"] = c.name;
    r["paper_anchor"] = c.anchor;
    r["grid"] = c.grid;
    r["max_residual"] = format_double(c.max_residual);
    r["mean_residual"] = format_double(c.mean_residual);
    r["tolerance"] = format_double(c.tolerance);
    r["pass"] = c.pass;
    arr.push_back(std::move(r));
  }
  j["checks"] = std::move(arr);
  nlohmann::ordered_json summary;
  summary["total"] = rep.checks.size();
  summary["passed"] =
      std::count_if(rep.checks.begin(), rep.checks.end(),
                    [](const CheckRecord& c) { return c.pass; });
  summary["all_pass"] = rep.all_pass();
  j["summary"] = std::move(summary);
  return j.dump(2) + "\n";
}

static std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

// one row per (check, grid point) so residual fields can be plotted directly
static std::string emit_csv(const Report& rep) {
  std::ostringstream os;
  os << "name,paper_anchor,point,residual,tolerance,pass\n";
  for (const auto& c : rep.checks) {
    if (c.point_values.empty()) {
      os << csv_quote(c.name) << ',' << csv_quote(c.anchor) << ",0,"
         << format_double(c.max_residual) << ',' << format_double(c.tolerance)
         << ',' << (c.pass ? 1 : 0) << '\n';
      continue;
    }
    for (std::size_t i = 0; i < c.point_values.size(); ++i)
      os << csv_quote(c.name) << ',' << csv_quote(c.anchor) << ',' << i << ','
         << format_double(c.point_values[i]) << ',' << format_double(c.tolerance)
         << ',' << (c.pass ? 1 : 0) << '\n';
  }
  return os.str();
}

static std::string emit_human(const Report& rep) {
  std::ostringstream os;
  os << "# " << rep.version << "\n# config: " << rep.config_echo
     << "\n# seed: " << rep.seed << "\n";
  std::size_t w = 4;
  for (const auto& c : rep.checks) w = std::max(w, c.name.size());
  for (const auto& c : rep.checks) {
    os << (c.pass ? "PASS  " : "FAIL  ") << c.name;
    os << std::string(w - c.name.size() + 2, ' ');
    char buf[128];
    std::snprintf(buf, sizeof buf, "max %-12.5g mean %-12.5g tol %-10.3g %s",
                  c.max_residual, c.mean_residual, c.tolerance, c.grid.c_str());
    os << buf << '\n';
  }
  os << (rep.all_pass() ? "ALL PASS" : "FAILURES PRESENT") << " ("
     << rep.checks.size() << " checks)\n";
  return os.str();
}

std::string emit(const Report& report, EmitFormat format) {
  switch (format) {
    case EmitFormat::Json: return emit_json(report);
    case EmitFormat::Csv: return emit_csv(report);
    case EmitFormat::Human: return emit_human(report);
  }
  throw IOError("bad format");
}

}  // namespace sheargeo
