#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "sheargeo/errors.hpp"
#include "sheargeo/suite.hpp"

namespace {

constexpr const char* kUsage = R"(usage: sheargeo <command> [flags]

commands:
  verify-base    Kahler base invariants (Einstein identity, J, omega, eta)
  verify-sasaki  contact/Reeb/Sasaki-metric relations on the circle bundle
  einstein       curvature-level Einstein verification + reduced equations
  taubnut        4D coordinate recovery of the closed-form family
  wave           electromagnetic plane-wave harmonicity and flag structure
  cr-roundtrip   randomized CR <-> sub-Riemannian correspondence checks
  all            every suite above

flags (mirroring config-file keys one to one):
  --config <file>     flat key=value file, '#' comments; flags win
  --base <kind>       s2-spherical | s2-stereographic | torus |
                      hyperbolic-disk | product-s2-s2
  --n <int>           total dimension (even, >= 4; inferred from base)
  --lambda <real>     Einstein constant
  --lambda0 <real>    base Einstein constant (sign fixed by the base kind)
  --B <real> --C <real>  family parameters (C > 0)
  --grid <n,n,...>    per-axis sample counts, t first, fiber u fixed
  --seed <int>        seed for randomized property checks
  --tol-<check> <real>  tolerance override for one check
  --output <path>     write the report there instead of stdout
  --format <fmt>      json | csv | human

exit status is 0 iff every check passes.
)";

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (!args.empty() && (args[0] == "-h" || args[0] == "--help")) {
    std::cout << kUsage;
    return 0;
  }
  try {
    const sheargeo::RunConfig cfg = sheargeo::parse_config(args);
    const sheargeo::Report rep = sheargeo::run_suite(cfg);
    const std::string out =
        sheargeo::emit(rep, sheargeo::format_from_string(cfg.format));
    if (cfg.output.empty()) {
      std::cout << out;
    } else {
      std::ofstream f(cfg.output, std::ios::binary);
      if (!f) {
        std::cerr << "error: cannot write '" << cfg.output << "'\n";
        return 2;
      }
      f << out;
    }
    return rep.all_pass() ? 0 : 1;
  } catch (const sheargeo::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << kUsage;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
