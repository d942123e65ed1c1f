#pragma once

#include <functional>
#include <vector>

#include "sheargeo/chart.hpp"
#include "sheargeo/linalg.hpp"
#include "sheargeo/stencil.hpp"

namespace sheargeo {

// Pointwise symmetric bilinear form on a chart. `comp` returns the dim x dim
// component matrix; `d1`/`d2` are optional analytic partials (d1(p,k) = d_k g,
// d2(p,k,l) = d_k d_l g).
struct MetricField {
  Chart chart;
  std::function<Mat(const Vec&)> comp;
  std::pair<int, int> signature{0, 0};  // (num_negative, num_positive)
  int orientation = +1;
  std::function<Mat(const Vec&, int)> d1;
  std::function<Mat(const Vec&, int, int)> d2;

  bool has_analytic() const { return static_cast<bool>(d1); }
  Mat operator()(const Vec& p) const { return comp(p); }
};

struct VectorField {
  std::function<Vec(const Vec&)> comp;
  // optional analytic Jacobian, jac(p)(l,m) = d_m X^l
  std::function<Mat(const Vec&)> jac;

  Vec operator()(const Vec& p) const { return comp(p); }
};

// Coordinate-basis Christoffel symbols Gamma^l_{mn}, symmetric in (m,n).
struct ConnectionCoeffs {
  int dim = 0;
  std::vector<double> a;  // l*dim*dim + m*dim + n

  explicit ConnectionCoeffs(int d) : dim(d), a(d * d * d, 0.0) {}
  double& at(int l, int m, int n) { return a[(l * dim + m) * dim + n]; }
  double at(int l, int m, int n) const { return a[(l * dim + m) * dim + n]; }
};

// Riemann R^l_{mu nu rho} stored as [l][mu][nu][rho] with the plane indices
// last: R(d_nu, d_rho) d_mu = R^l_{mu nu rho} d_l. Ricci by the contraction
// Ric_{mu nu} = R^l_{nu l mu}.
struct TensorResult {
  int dim = 0;
  std::vector<double> riemann;
  Mat ricci;
  double scalar = 0.0;

  double riem(int l, int mu, int nu, int rho) const {
    return riemann[((l * dim + mu) * dim + nu) * dim + rho];
  }
  double& riem(int l, int mu, int nu, int rho) {
    return riemann[((l * dim + mu) * dim + nu) * dim + rho];
  }
};

// First partials of the metric components, dg[k] = d_k g.
std::vector<Mat> metric_partials(const MetricField& g, const Vec& p,
                                 const DiffScheme& scheme);

ConnectionCoeffs christoffel_coordinate(const MetricField& g, const Vec& p,
                                        const DiffScheme& scheme);

TensorResult curvature_coordinate(const MetricField& g, const Vec& p,
                                  const DiffScheme& scheme);

// Covariant derivative of g reassembled from Gamma; vanishes identically for
// the Levi-Civita connection. Returns max |nabla_l g_mn| (self-test hook).
double nabla_g_residual(const MetricField& g, const Vec& p,
                        const DiffScheme& scheme);

// Lie derivative of a (0,2) tensor field T along X:
// (L_X T)_mn = X^l d_l T_mn + T_ln d_m X^l + T_ml d_n X^l.
Mat lie_derivative(const VectorField& X,
                   const std::function<Mat(const Vec&)>& T, const Vec& p,
                   const DiffScheme& scheme);

// Lie derivative of a covector field eta along X.
Vec lie_derivative_covector(const VectorField& X,
                            const std::function<Vec(const Vec&)>& eta,
                            const Vec& p, const DiffScheme& scheme);

// Lie bracket [X,Y] by directional differentiation of the component functions.
Vec lie_bracket(const VectorField& X, const VectorField& Y, const Vec& p,
                const DiffScheme& scheme);

}  // namespace sheargeo
