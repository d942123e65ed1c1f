#include "sheargeo/config.hpp"

#include <fstream>
#include <sstream>

#include "sheargeo/errors.hpp"
#include "sheargeo/report.hpp"

namespace sheargeo {

Command command_from_string(const std::string& s) {
  if (s == "verify-base") return Command::VerifyBase;
  if (s == "verify-sasaki") return Command::VerifySasaki;
  if (s == "einstein") return Command::Einstein;
  if (s == "taubnut") return Command::TaubNut;
  if (s == "wave") return Command::Wave;
  if (s == "cr-roundtrip") return Command::CrRoundtrip;
  if (s == "all") return Command::All;
  throw ConfigError("unknown command '" + s + "'");
}

std::string to_string(Command c) {
  switch (c) {
    case Command::VerifyBase: return "verify-base";
    case Command::VerifySasaki: return "verify-sasaki";
    case Command::Einstein: return "einstein";
    case Command::TaubNut: return "taubnut";
    case Command::Wave: return "wave";
    case Command::CrRoundtrip: return "cr-roundtrip";
    case Command::All: return "all";
  }
  return "?";
}

void RunConfig::validate() const {
  if (n < 4 || n % 2 != 0)
    throw ConfigError("n must be even and >= 4 (got " + std::to_string(n) + ")");
  if (!(C > 0)) throw ConfigError("C must be > 0");
  if (grid.empty()) throw ConfigError("grid must have at least one axis");
  for (int c : grid)
    if (c < 2) throw ConfigError("grid counts must be >= 2 per axis");
}

std::string RunConfig::echo() const {
  std::ostringstream os;
  os << "command=" << to_string(command) << ";base=" << base_kind << ";n=" << n
     << ";lambda=" << format_double(Lambda) << ";lambda0=" << format_double(Lambda0)
     << ";B=" << format_double(B) << ";C=" << format_double(C) << ";grid=";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i) os << 'x';
    os << grid[i];
  }
  os << ";seed=" << seed << ";format=" << format;
  for (const auto& [k, v] : tol_overrides) os << ';' << k << '=' << format_double(v);
  return os.str();
}

namespace {

std::vector<int> parse_grid(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ConfigError("bad grid entry '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty grid spec");
  return out;
}

double parse_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects a real number, got '" + s + "'");
  }
}

long long parse_int(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects an integer, got '" + s + "'");
  }
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& val) {
  if (key == "command") cfg.command = command_from_string(val);
  else if (key == "base") cfg.base_kind = val;
  else if (key == "n") cfg.n = static_cast<int>(parse_int(key, val));
  else if (key == "lambda") cfg.Lambda = parse_double(key, val);
  else if (key == "lambda0") cfg.Lambda0 = parse_double(key, val);
  else if (key == "B") cfg.B = parse_double(key, val);
  else if (key == "C") cfg.C = parse_double(key, val);
  else if (key == "grid") cfg.grid = parse_grid(val);
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, val));
  else if (key == "output") cfg.output = val;
  else if (key == "format") cfg.format = val;
  else if (key.rfind("tol-", 0) == 0) cfg.tol_overrides[key] = parse_double(key, val);
  else throw ConfigError("unknown key '" + key + "'");
}

}  // namespace

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        " is not key=value");
    std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    while (!val.empty() && (val.front() == ' ' || val.front() == '\t'))
      val.erase(val.begin());
    apply_key(cfg, key, val);
  }
  return cfg;
}

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig cfg;
  // first pass: find --config and load the file as the base layer
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a path");
      cfg = parse_config_file(args[i + 1]);
    }
  }
  // flags override file keys; first positional token is the command
  bool have_command = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config") {
      ++i;
      continue;
    }
    if (a.rfind("--", 0) == 0) {
      const std::string key = a.substr(2);
      if (i + 1 >= args.size())
        throw ConfigError("flag --" + key + " needs a value");
      apply_key(cfg, key, args[++i]);
    } else {
      if (have_command)
        throw ConfigError("unexpected positional argument '" + a + "'");
      cfg.command = command_from_string(a);
      have_command = true;
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace sheargeo
