#include "sheargeo/wave.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "sheargeo/errors.hpp"
#include "sheargeo/grid.hpp"
#include "sheargeo/linalg.hpp"

namespace sheargeo {

namespace {

// theta pulled back to M as a 1-form field (coordinates t, u, x...)
Form theta_form(const SasakiChart& S, const Vec& p) {
  const int nb = S.base.dim();
  Vec th = Vec::Zero(nb + 2);
  th[1] = 1.0;
  th.tail(nb) = S.base.eta(p.tail(nb));
  return Form::covector(th);
}

}  // namespace

Form WaveForm::star_re(const Vec& p) const {
  return hodge_star(re(p), g->comp(p), g->orientation);
}

Form WaveForm::star_im(const Vec& p) const {
  return hodge_star(im(p), g->comp(p), g->orientation);
}

WaveForm build_wave(const SasakiChart& S, const MetricField& g) {
  if (!S.base.has_holo())
    throw NoHolomorphicChart("base chart '" + to_string(S.base.kind) +
                             "' carries no holomorphic coordinates");
  const int nb = S.base.dim();
  const int d = nb + 2;
  const int k = d / 2;
  const auto pairs = S.base.holo_pairs;
  if (static_cast<int>(pairs.size()) != k - 1)
    throw NoHolomorphicChart("holomorphic pair count does not match degree");

  WaveForm w;
  w.S = &S;
  w.g = &g;
  w.k = k;
  const SasakiChart* Sp = &S;
  auto assemble = [Sp, pairs, d](const Vec& p, bool imag) {
    // dz^1 ^ ... ^ dz^{k-1} expanded as (re, im) by iterating the product
    Form re(d, 0), im(d, 0);
    re.data()[0] = 1.0;
    for (const auto& [xi, yi] : pairs) {
      Vec dx = Vec::Zero(d), dy = Vec::Zero(d);
      dx[2 + xi] = 1.0;
      dy[2 + yi] = 1.0;
      const Form fx = Form::covector(dx), fy = Form::covector(dy);
      // (re + i im) ^ (dx + i dy)
      Form nre = wedge(re, fx) - wedge(im, fy);
      Form nim = wedge(re, fy) + wedge(im, fx);
      re = std::move(nre);
      im = std::move(nim);
    }
    const Form th = theta_form(*Sp, p);
    return imag ? wedge(th, im) : wedge(th, re);
  };
  w.re = FormField{d, k, [assemble](const Vec& p) { return assemble(p, false); }};
  w.im = FormField{d, k, [assemble](const Vec& p) { return assemble(p, true); }};
  w.theta = FormField{d, 1, [Sp](const Vec& p) { return theta_form(*Sp, p); }};

  // invariants: theta ^ F = 0, F nonzero, g^{-1} theta null
  GridSpec probe = GridSpec::over_chart(g.chart, std::vector<int>(d, 2));
  probe.lo[1] = -1.0;
  probe.hi[1] = 1.0;
  for (int a = 2; a < d; ++a) {
    probe.lo[a] = std::max(probe.lo[a], -2.0);
    probe.hi[a] = std::min(probe.hi[a], 2.0);
  }
  for (long i = 0; i < probe.total(); ++i) {
    const Vec p = probe.point(i);
    const Form F = w.re(p);
    if (F.max_abs() < 1e-12) throw NoHolomorphicChart("wave vanishes at a point");
    if (wedge(w.theta(p), F).max_abs() > 1e-12)
      throw NoHolomorphicChart("theta is not a factor of the wave");
    const Mat ginv = invert_metric(g.comp(p));
    Vec thv(d);
    for (int a = 0; a < d; ++a) thv[a] = w.theta(p).data()[a];
    const double null_res = thv.dot(ginv * thv);
    if (std::abs(null_res) > 1e-10)
      throw NoHolomorphicChart("theta dual is not null");
  }
  return w;
}

HarmonicityReport harmonicity_check(const WaveForm& w, const GridSpec& grid,
                                    const DiffScheme& scheme, ExecMode mode) {
  HarmonicityReport rep;
  rep.grid_points = static_cast<int>(grid.total());
  const WaveForm* wp = &w;

  grid_eval(grid,
            [wp, &scheme](const Vec& p) {
              return exterior_derivative(wp->re, p, scheme).max_abs();
            },
            rep.dF_values, mode);
  FormField starF{wp->re.dim, wp->re.dim - wp->k,
                  [wp](const Vec& p) { return wp->star_re(p); }};
  grid_eval(grid,
            [&starF, &scheme](const Vec& p) {
              return exterior_derivative(starF, p, scheme).max_abs();
            },
            rep.dstarF_values, mode);
  rep.max_dF = reduce_stats(rep.dF_values).max;
  rep.max_dstarF = reduce_stats(rep.dstarF_values).max;

  // middle-form eigenrelation *Fc = sign * i^{k-1} Fc with one global sign.
  // i^{k-1} rotates (re, im); compare both orientations of the sign.
  double plus = 0.0, minus = 0.0;
  const long stride = std::max<long>(1, grid.total() / 16);
  for (long i = 0; i < grid.total(); i += stride) {
    const Vec p = grid.point(i);
    const Form sre = w.star_re(p), sim = w.star_im(p);
    const Form fre = w.re(p), fim = w.im(p);
    // i^{k-1} (fre + i fim) = (a re - b im) + i (a im + b re) with
    // i^{k-1} = a + i b
    const int r = (w.k - 1) % 4;
    const double a = (r == 0) ? 1 : (r == 2) ? -1 : 0;
    const double b = (r == 1) ? 1 : (r == 3) ? -1 : 0;
    const Form tre = a * fre - b * fim;
    const Form tim = a * fim + b * fre;
    plus = std::max({plus, (sre - tre).max_abs(), (sim - tim).max_abs()});
    minus = std::max({minus, (sre + tre).max_abs(), (sim + tim).max_abs()});
  }
  if (plus <= minus) {
    rep.eigen_residual = plus;
    rep.eigen_sign = +1;
  } else {
    rep.eigen_residual = minus;
    rep.eigen_sign = -1;
  }
  return rep;
}

FlagLieReport flag_and_lie_check(const WaveForm& w, const Vec& p,
                                 const DiffScheme& scheme) {
  const int d = w.re.dim;
  FlagLieReport rep;

  // joint kernel of (F, *F): stack v -> (v . F, v . *F) columnwise
  const Form F = w.re(p);
  const Form sF = w.star_re(p);
  const std::size_t rows_f = F.data().size() / d;
  const std::size_t rows_s = sF.data().size() / d;
  Mat M(static_cast<int>(rows_f + rows_s), d);
  for (int a = 0; a < d; ++a) {
    Vec e = Vec::Zero(d);
    e[a] = 1.0;
    const Form cf = contract(e, F), cs = contract(e, sF);
    for (std::size_t r = 0; r < rows_f; ++r) M(static_cast<int>(r), a) = cf.data()[r];
    for (std::size_t r = 0; r < rows_s; ++r)
      M(static_cast<int>(rows_f + r), a) = cs.data()[r];
  }
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv[0];
  int null_dim = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] < 1e-8 * smax) ++null_dim;
  rep.kernel_dim = null_dim;
  if (null_dim != 1)
    throw KernelDimensionMismatch("ker F ^ ker *F has dimension " +
                                  std::to_string(null_dim));
  const double s_small = sv[sv.size() - 1];
  const double s_next = sv[sv.size() - 2];
  rep.sv_gap = (s_small > 0.0) ? s_next / s_small
                               : std::numeric_limits<double>::infinity();
  const Vec kernel = svd.matrixV().col(d - 1);
  rep.kernel_alignment = std::abs(kernel[0]) / kernel.norm();

  // Lie derivatives along p_o = d_t by the Cartan formula
  Vec po = Vec::Zero(d);
  po[0] = 1.0;
  VectorField poF{[po](const Vec&) { return po; },
                  [d](const Vec&) { return Mat(Mat::Zero(d, d)); }};
  rep.lie_F = lie_derivative_form(poF, w.re, p, scheme).max_abs();
  FormField starF{d, d - w.k, [&w](const Vec& q) { return w.star_re(q); }};
  rep.lie_starF = lie_derivative_form(poF, starF, p, scheme).max_abs();

  // fit L_{p_o} theta + f theta = 0
  const Form lth = lie_derivative_form(poF, w.theta, p, scheme);
  const Form th = w.theta(p);
  double num = 0.0, den = 0.0;
  for (int a = 0; a < d; ++a) {
    num += lth.data()[a] * th.data()[a];
    den += th.data()[a] * th.data()[a];
  }
  rep.f_fit = -num / den;
  double res = 0.0;
  for (int a = 0; a < d; ++a)
    res = std::max(res, std::abs(lth.data()[a] + rep.f_fit * th.data()[a]));
  rep.f_fit_residual = res;
  return rep;
}

}  // namespace sheargeo
