#include "sheargeo/metric.hpp"

#include "sheargeo/errors.hpp"

namespace sheargeo {

std::vector<Mat> metric_partials(const MetricField& g, const Vec& p,
                                 const DiffScheme& scheme) {
  const int d = g.chart.dim;
  std::vector<Mat> dg(d);
  if (scheme.kind == DiffScheme::Kind::Analytic) {
    if (!g.d1) throw MissingDerivative("metric has no analytic partials");
    for (int k = 0; k < d; ++k) dg[k] = g.d1(p, k);
  } else {
    g.chart.require_inside(p, 2.0 * scheme.h1);
    for (int k = 0; k < d; ++k) dg[k] = central_diff(g.comp, p, k, scheme.h1);
  }
  return dg;
}

ConnectionCoeffs christoffel_coordinate(const MetricField& g, const Vec& p,
                                        const DiffScheme& scheme) {
  const int d = g.chart.dim;
  const Mat ginv = invert_metric(g.comp(p));
  const std::vector<Mat> dg = metric_partials(g, p, scheme);
  ConnectionCoeffs G(d);
  for (int m = 0; m < d; ++m)
    for (int n = m; n < d; ++n) {
      for (int l = 0; l < d; ++l) {
        double v = 0.0;
        for (int r = 0; r < d; ++r)
          v += ginv(l, r) * (dg[m](n, r) + dg[n](m, r) - dg[r](m, n));
        G.at(l, m, n) = 0.5 * v;
        G.at(l, n, m) = G.at(l, m, n);
      }
    }
  return G;
}

namespace {

// d_a Gamma^l_{mn}, either exact from analytic second partials or by an
// outer 4th-order stencil on the Christoffel evaluation.
std::vector<ConnectionCoeffs> christoffel_partials(const MetricField& g,
                                                   const Vec& p,
                                                   const DiffScheme& scheme) {
  const int d = g.chart.dim;
  std::vector<ConnectionCoeffs> dG(d, ConnectionCoeffs(d));
  if (scheme.kind == DiffScheme::Kind::Analytic && g.d2) {
    const Mat ginv = invert_metric(g.comp(p));
    std::vector<Mat> dg(d), dginv(d);
    for (int k = 0; k < d; ++k) {
      dg[k] = g.d1(p, k);
      dginv[k] = -ginv * dg[k] * ginv;
    }
    for (int a = 0; a < d; ++a) {
      std::vector<Mat> d2a(d);
      for (int k = 0; k < d; ++k) d2a[k] = g.d2(p, a, k);
      for (int m = 0; m < d; ++m)
        for (int n = m; n < d; ++n)
          for (int l = 0; l < d; ++l) {
            double v = 0.0;
            for (int r = 0; r < d; ++r) {
              v += dginv[a](l, r) * (dg[m](n, r) + dg[n](m, r) - dg[r](m, n));
              v += ginv(l, r) * (d2a[m](n, r) + d2a[n](m, r) - d2a[r](m, n));
            }
            dG[a].at(l, m, n) = 0.5 * v;
            dG[a].at(l, n, m) = dG[a].at(l, m, n);
          }
    }
    return dG;
  }
  const double h = scheme.h2;
  g.chart.require_inside(p, 4.0 * h);
  // the outer stencil divides by h2, so the inner first-derivative step must
  // match it or inner roundoff noise is amplified past the curvature tolerance
  DiffScheme inner = scheme;
  inner.h1 = scheme.h2;
  for (int a = 0; a < d; ++a) {
    Vec q1 = p, q2 = p, q3 = p, q4 = p;
    q1[a] -= 2 * h;
    q2[a] -= h;
    q3[a] += h;
    q4[a] += 2 * h;
    const ConnectionCoeffs G1 = christoffel_coordinate(g, q1, inner);
    const ConnectionCoeffs G2 = christoffel_coordinate(g, q2, inner);
    const ConnectionCoeffs G3 = christoffel_coordinate(g, q3, inner);
    const ConnectionCoeffs G4 = christoffel_coordinate(g, q4, inner);
    for (std::size_t i = 0; i < dG[a].a.size(); ++i)
      dG[a].a[i] =
          (G1.a[i] - 8.0 * G2.a[i] + 8.0 * G3.a[i] - G4.a[i]) / (12.0 * h);
  }
  return dG;
}

}  // namespace

TensorResult curvature_coordinate(const MetricField& g, const Vec& p,
                                  const DiffScheme& scheme) {
  const int d = g.chart.dim;
  const ConnectionCoeffs G = christoffel_coordinate(g, p, scheme);
  const std::vector<ConnectionCoeffs> dG = christoffel_partials(g, p, scheme);

  TensorResult out;
  out.dim = d;
  out.riemann.assign(static_cast<std::size_t>(d) * d * d * d, 0.0);
  // R(d_a, d_b) d_c = [d_a G^l_bc - d_b G^l_ac + G^l_as G^s_bc - G^l_bs G^s_ac] d_l
  for (int l = 0; l < d; ++l)
    for (int c = 0; c < d; ++c)
      for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b) {
          double v = dG[a].at(l, b, c) - dG[b].at(l, a, c);
          for (int s = 0; s < d; ++s)
            v += G.at(l, a, s) * G.at(s, b, c) - G.at(l, b, s) * G.at(s, a, c);
          out.riem(l, c, a, b) = v;
          out.riem(l, c, b, a) = -v;
        }
  out.ricci = Mat::Zero(d, d);
  for (int mu = 0; mu < d; ++mu)
    for (int nu = 0; nu < d; ++nu) {
      double v = 0.0;
      for (int l = 0; l < d; ++l) v += out.riem(l, nu, l, mu);
      out.ricci(mu, nu) = v;
    }
  const Mat ginv = invert_metric(g.comp(p));
  out.scalar = (ginv * out.ricci).trace();
  return out;
}

double nabla_g_residual(const MetricField& g, const Vec& p,
                        const DiffScheme& scheme) {
  const int d = g.chart.dim;
  const ConnectionCoeffs G = christoffel_coordinate(g, p, scheme);
  const std::vector<Mat> dg = metric_partials(g, p, scheme);
  const Mat gm = g.comp(p);
  double worst = 0.0;
  for (int l = 0; l < d; ++l)
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n) {
        double v = dg[l](m, n);
        for (int s = 0; s < d; ++s)
          v -= G.at(s, l, m) * gm(s, n) + G.at(s, l, n) * gm(m, s);
        worst = std::max(worst, std::abs(v));
      }
  return worst;
}

Mat lie_derivative(const VectorField& X,
                   const std::function<Mat(const Vec&)>& T, const Vec& p,
                   const DiffScheme& scheme) {
  const int d = static_cast<int>(p.size());
  const Vec Xv = X.comp(p);
  Mat dX(d, d);  // dX(l,m) = d_m X^l
  if (X.jac)
    dX = X.jac(p);
  else
    for (int m = 0; m < d; ++m) dX.col(m) = central_diff(X.comp, p, m, scheme.h1);
  Mat out = Mat::Zero(d, d);
  const Mat Tv = T(p);
  for (int k = 0; k < d; ++k) {
    if (Xv[k] == 0.0) continue;
    out += Xv[k] * central_diff(T, p, k, scheme.h1);
  }
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      double v = 0.0;
      for (int l = 0; l < d; ++l)
        v += Tv(l, n) * dX(l, m) + Tv(m, l) * dX(l, n);
      out(m, n) += v;
    }
  return out;
}

Vec lie_derivative_covector(const VectorField& X,
                            const std::function<Vec(const Vec&)>& eta,
                            const Vec& p, const DiffScheme& scheme) {
  const int d = static_cast<int>(p.size());
  const Vec Xv = X.comp(p);
  Mat dX(d, d);
  if (X.jac)
    dX = X.jac(p);
  else
    for (int m = 0; m < d; ++m) dX.col(m) = central_diff(X.comp, p, m, scheme.h1);
  Vec out = Vec::Zero(d);
  for (int k = 0; k < d; ++k)
    if (Xv[k] != 0.0) out += Xv[k] * central_diff(eta, p, k, scheme.h1);
  const Vec ev = eta(p);
  for (int m = 0; m < d; ++m)
    for (int l = 0; l < d; ++l) out[m] += ev[l] * dX(l, m);
  return out;
}

Vec lie_bracket(const VectorField& X, const VectorField& Y, const Vec& p,
                const DiffScheme& scheme) {
  const int d = static_cast<int>(p.size());
  const Vec Xv = X.comp(p), Yv = Y.comp(p);
  Vec out = Vec::Zero(d);
  for (int k = 0; k < d; ++k) {
    if (Xv[k] != 0.0) out += Xv[k] * central_diff(Y.comp, p, k, scheme.h1);
    if (Yv[k] != 0.0) out -= Yv[k] * central_diff(X.comp, p, k, scheme.h1);
  }
  return out;
}

}  // namespace sheargeo
