#include "sheargeo/grid.hpp"

#include <cstdlib>
#include <limits>
#include <sstream>

#ifdef SHEARGEO_HAVE_OPENMP
#include <omp.h>
#endif

#include "sheargeo/errors.hpp"

namespace sheargeo {

long GridSpec::total() const {
  long n = 1;
  for (int c : counts) n *= c;
  return n;
}

Vec GridSpec::point(long flat_index) const {
  const int d = static_cast<int>(counts.size());
  Vec p(d);
  long rem = flat_index;
  for (int k = d - 1; k >= 0; --k) {
    const long i = rem % counts[k];
    rem /= counts[k];
    p[k] = (counts[k] == 1)
               ? lo[k]
               : lo[k] + (hi[k] - lo[k]) * static_cast<double>(i) /
                             static_cast<double>(counts[k] - 1);
  }
  return p;
}

GridSpec GridSpec::over_chart(const Chart& chart,
                              const std::vector<int>& counts) {
  if (static_cast<int>(counts.size()) != chart.dim)
    throw ConfigError("grid axis count does not match chart dimension");
  GridSpec g;
  g.counts = counts;
  g.lo = Vec(chart.dim);
  g.hi = Vec(chart.dim);
  for (int k = 0; k < chart.dim; ++k) {
    g.lo[k] = chart.lo(k);
    g.hi[k] = chart.hi(k);
  }
  return g;
}

std::string GridSpec::describe() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (k) os << "x";
    os << counts[k];
  }
  os << " grid";
  return os.str();
}

int resolve_threads() {
#ifdef SHEARGEO_HAVE_OPENMP
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("SHEARGEO_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
  }
  return n;
#else
  return 1;
#endif
}

void grid_eval(const GridSpec& grid, const std::function<double(const Vec&)>& f,
               std::vector<double>& out, ExecMode mode) {
  const long n = grid.total();
  out.assign(static_cast<std::size_t>(n), 0.0);
  // a throwing point becomes +inf (fails any tolerance) instead of crossing
  // the parallel region
  auto guarded = [&f](const Vec& p) {
    try {
      return f(p);
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  if (mode == ExecMode::Parallel) {
#ifdef SHEARGEO_HAVE_OPENMP
    const int nt = resolve_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (long i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i)] = guarded(grid.point(i));
    return;
#endif
  }
  // serial reference kernel
  for (long i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = guarded(grid.point(i));
}

ResidualStats reduce_stats(const std::vector<double>& values) {
  ResidualStats s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) {
    s.max = std::max(s.max, v);
    sum += v;
  }
  s.mean = sum / static_cast<double>(values.size());
  return s;
}

ResidualStats grid_residual(const GridSpec& grid,
                            const std::function<double(const Vec&)>& f,
                            ExecMode mode) {
  std::vector<double> buf;
  grid_eval(grid, f, buf, mode);
  return reduce_stats(buf);
}

}  // namespace sheargeo
