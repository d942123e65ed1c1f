#include "sheargeo/chart.hpp"

#include <sstream>

namespace sheargeo {

bool Chart::contains(const Vec& p, double extra) const {
  if (p.size() != dim) return false;
  for (int k = 0; k < dim; ++k) {
    if (p[k] < box[k].first + margin + extra ||
        p[k] > box[k].second - margin - extra)
      return false;
  }
  return true;
}

void Chart::require_inside(const Vec& p, double extra) const {
  if (!contains(p, extra)) {
    std::ostringstream os;
    os << "point outside chart '" << name << "' (margin " << margin
       << ", stencil pad " << extra << ")";
    throw OutOfChart(os.str());
  }
}

Chart make_chart(std::string name, std::vector<std::string> coords,
                 std::vector<std::pair<double, double>> box, double margin) {
  Chart c;
  c.name = std::move(name);
  c.coord_names = std::move(coords);
  c.box = std::move(box);
  c.dim = static_cast<int>(c.coord_names.size());
  c.margin = margin;
  if (c.box.size() != c.coord_names.size())
    throw Error("chart box/coordinate count mismatch");
  return c;
}

Chart product_chart(const std::string& name, const Chart& a, const Chart& b) {
  Chart c;
  c.name = name;
  c.dim = a.dim + b.dim;
  c.margin = std::max(a.margin, b.margin);
  c.coord_names = a.coord_names;
  for (const auto& s : b.coord_names) c.coord_names.push_back(s + "'");
  c.box = a.box;
  c.box.insert(c.box.end(), b.box.begin(), b.box.end());
  return c;
}

}  // namespace sheargeo
