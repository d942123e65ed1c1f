#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sheargeo {

enum class Command {
  VerifyBase,
  VerifySasaki,
  Einstein,
  TaubNut,
  Wave,
  CrRoundtrip,
  All,
};
Command command_from_string(const std::string& s);
std::string to_string(Command c);

struct RunConfig {
  Command command = Command::All;
  std::string base_kind = "s2-spherical";
  int n = 4;
  double Lambda = 0.0;
  double Lambda0 = 1.0;
  double B = 0.0;
  double C = 0.25;
  std::vector<int> grid = {10, 10, 10};
  std::uint64_t seed = 20240801;
  std::map<std::string, double> tol_overrides;  // keys: tol-<check-prefix>
  std::string output;                           // empty = stdout
  std::string format = "human";

  void validate() const;  // throws ConfigError
  std::string echo() const;
};

// Parse command line (and optional `--config <file>`; flags win over file
// keys). The file format is flat `key=value` text, UTF-8, '#' comments.
// Unknown keys are rejected. Throws ConfigError.
RunConfig parse_config(const std::vector<std::string>& args);
RunConfig parse_config_file(const std::string& path);

}  // namespace sheargeo
