#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "sheargeo/errors.hpp"

namespace sheargeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A named coordinate patch: open box per coordinate plus a margin kept from
// the box boundary (coordinate singularities live on the boundary).
struct Chart {
  std::string name;
  int dim = 0;
  std::vector<std::string> coord_names;
  std::vector<std::pair<double, double>> box;
  double margin = 0.0;

  bool contains(const Vec& p, double extra = 0.0) const;
  void require_inside(const Vec& p, double extra = 0.0) const;

  // Interior sub-box [lo+margin, hi-margin], used by grid builders.
  double lo(int k) const { return box[k].first + margin; }
  double hi(int k) const { return box[k].second - margin; }
};

Chart make_chart(std::string name, std::vector<std::string> coords,
                 std::vector<std::pair<double, double>> box, double margin);

// Chart for the product of two patches, coordinates concatenated.
Chart product_chart(const std::string& name, const Chart& a, const Chart& b);

}  // namespace sheargeo
