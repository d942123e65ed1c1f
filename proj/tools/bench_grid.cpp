// Times the grid Einstein-residual kernel: serial reference vs the OpenMP
// path, printing points/s and the speedup.

#include <chrono>
#include <cstdio>

#include "sheargeo/einstein.hpp"

using namespace sheargeo;

namespace {

double time_once(const GridSpec& grid, const MetricField& g, ExecMode mode) {
  auto f = [&](const Vec& p) {
    const TensorResult tr = curvature_coordinate(g, p, DiffScheme::central());
    return max_abs(tr.ricci);
  };
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> buf;
  grid_eval(grid, f, buf, mode);
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int side = (argc > 1) ? std::atoi(argv[1]) : 8;
  const KahlerBase base = make_base(BaseKind::S2Spherical, 1.0);
  const SasakiChart S = build_sasaki(base);
  const EinsteinParams par{4, 0.0, 1.0, 0.0, 0.25};
  const MetricField g = build_lorentz_firm(S, einstein_profile(par));

  std::vector<int> counts = {side, 1, side, side};
  GridSpec grid = GridSpec::over_chart(g.chart, counts);
  grid.lo[0] = 0.4;
  grid.hi[0] = 2.5;
  grid.lo[1] = grid.hi[1] = 0.2;

  std::printf("einstein-residual kernel, %ld points, %d threads available\n",
              grid.total(), resolve_threads());
  const double ts = time_once(grid, g, ExecMode::Serial);
  const double tp = time_once(grid, g, ExecMode::Parallel);
  std::printf("serial   : %8.3f s  (%9.1f points/s)\n", ts, grid.total() / ts);
  std::printf("parallel : %8.3f s  (%9.1f points/s)\n", tp, grid.total() / tp);
  std::printf("speedup  : %8.2fx\n", ts / tp);
  return 0;
}
