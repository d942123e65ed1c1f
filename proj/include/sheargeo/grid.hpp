#pragma once

#include <functional>
#include <vector>

#include "sheargeo/chart.hpp"

namespace sheargeo {

enum class ExecMode { Serial, Parallel };

// Rectangular sample grid: counts[k] points per axis, inclusive endpoints.
struct GridSpec {
  Vec lo, hi;
  std::vector<int> counts;

  long total() const;
  Vec point(long flat_index) const;
  static GridSpec over_chart(const Chart& chart, const std::vector<int>& counts);
  std::string describe() const;
};

// Number of threads the parallel kernel may use; honors SHEARGEO_THREADS.
int resolve_threads();

// Evaluate f at every grid point into out (resized to grid.total()).
// Parallel uses the OpenMP kernel; Serial is the reference implementation the
// tests compare against. Both fill the same buffer layout, and all reductions
// happen serially afterwards, so results are identical bit for bit.
void grid_eval(const GridSpec& grid, const std::function<double(const Vec&)>& f,
               std::vector<double>& out, ExecMode mode = ExecMode::Parallel);

struct ResidualStats {
  double max = 0.0;
  double mean = 0.0;
};
ResidualStats reduce_stats(const std::vector<double>& values);

ResidualStats grid_residual(const GridSpec& grid,
                            const std::function<double(const Vec&)>& f,
                            ExecMode mode = ExecMode::Parallel);

}  // namespace sheargeo
