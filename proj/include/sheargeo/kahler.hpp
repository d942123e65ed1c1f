#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sheargeo/forms.hpp"
#include "sheargeo/metric.hpp"

namespace sheargeo {

enum class BaseKind {
  S2Spherical,
  S2Stereographic,
  Torus,
  HyperbolicDisk,
  ProductS2S2,
};

BaseKind base_kind_from_string(const std::string& s);
std::string to_string(BaseKind k);

// Catalog entry: a quantisable Kahler(-Einstein) base (N, J, g_o) on one
// chart, with the Kahler form omega = g_o(., J.), a fixed connection
// primitive eta with d(eta) = omega, and analytic derivatives throughout.
//
// All charts here are either conformally flat (stereographic, torus,
// hyperbolic disk, products) or spherical coordinates on the round sphere.
// Conformally flat charts carry holomorphic coordinates z^a = x^{2a} + i
// x^{2a+1}, recorded in `holo_pairs`.
class KahlerBase {
 public:
  Chart chart;
  BaseKind kind;
  double lambda0 = 0.0;
  std::vector<std::pair<int, int>> holo_pairs;  // (x,y) coordinate index pairs

  int dim() const { return chart.dim; }
  bool has_holo() const { return !holo_pairs.empty(); }

  // metric, first and second partials
  std::function<Mat(const Vec&)> g;
  std::function<Mat(const Vec&, int)> dg;        // d_k g
  std::function<Mat(const Vec&, int, int)> d2g;  // d_k d_l g
  // connection primitive eta and partials
  std::function<Vec(const Vec&)> eta;
  std::function<Mat(const Vec&)> deta;                 // deta(p)(k,l) = d_k eta_l
  std::function<Mat(const Vec&, int)> d2eta;           // d2eta(p,k)(l,m) = d_k d_l eta_m
  // complex structure J^i_j (column j = components of J e_j) and partials
  std::function<Mat(const Vec&)> J;
  std::function<Mat(const Vec&, int)> dJ;

  // Kahler form omega_{ij} = g_o(E_i, J E_j) as a matrix.
  Mat omega(const Vec& x) const;
  MetricField metric_field() const;
  // Coordinate Christoffels of g_o from analytic partials.
  ConnectionCoeffs christoffel(const Vec& x) const;
};

// Construct a catalog base. lambda0 must be > 0 for spheres, = 0 for the
// torus, < 0 for the hyperbolic disk. Throws BadCurvatureSign.
KahlerBase make_base(BaseKind kind, double lambda0);

struct BaseReport {
  double einstein = 0.0;       // max |Ric(g_o) - lambda0 g_o|
  double nabla_J = 0.0;        // max |nabla J|
  double d_omega = 0.0;        // max |d omega|
  double deta_minus_omega = 0.0;
  double J_squared = 0.0;      // max |J^2 + I|
  double compat = 0.0;         // max |omega - g_o(., J.)| (by construction ~0)
};

// Residual report over a sample grid of `samples` points per axis.
BaseReport verify_kahler_einstein(const KahlerBase& base, int samples = 5);

// eta at p (with the invariant d(eta) = omega checked by the caller/tests).
Vec base_eta(const KahlerBase& base, const Vec& p);

}  // namespace sheargeo
