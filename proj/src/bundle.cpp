#include "sheargeo/bundle.hpp"

#include <cmath>

#include "sheargeo/errors.hpp"
#include "sheargeo/grid.hpp"
#include "sheargeo/linalg.hpp"

namespace sheargeo {

// ---------------------------------------------------------------------------
// Sasaki chart

Vec SasakiChart::theta(const Vec& s_pt) const {
  const int nb = base.dim();
  Vec th = Vec::Zero(nb + 1);
  th[0] = 1.0;
  th.tail(nb) = base.eta(s_pt.tail(nb));
  return th;
}

Vec SasakiChart::reeb() const {
  Vec z = Vec::Zero(dim());
  z[0] = 1.0;
  return z;
}

Mat SasakiChart::sasaki_g(const Vec& s_pt) const {
  const int nb = base.dim();
  const Vec x = s_pt.tail(nb);
  const Vec th = theta(s_pt);
  Mat g = Mat::Zero(nb + 1, nb + 1);
  g.bottomRightCorner(nb, nb) = 0.5 * base.g(x);
  g += th * th.transpose();
  return g;
}

Form SasakiChart::dtheta(const Vec& s_pt) const {
  const int nb = base.dim();
  const Mat de = base.deta(s_pt.tail(nb));
  Form f(nb + 1, 2);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j)
      f.at({1 + i, 1 + j}) = de(i, j) - de(j, i);
  return f;
}

SasakiChart build_sasaki(const KahlerBase& base) {
  SasakiChart S;
  S.base = base;
  Chart u = make_chart("fiber-u", {"u"}, {{-10.0, 10.0}}, 0.0);
  S.chart = product_chart("sasaki-" + to_string(base.kind), u, base.chart);
  S.chart.margin = base.chart.margin;
  S.u_interval = {-10.0, 10.0};
  return S;
}

SasakiReport verify_sasaki(const SasakiChart& S, int samples) {
  SasakiReport rep;
  const int d = S.dim(), nb = S.base.dim();
  const Vec Z = S.reeb();
  const DiffScheme fd = DiffScheme::central();

  VectorField Zf{[Z](const Vec&) { return Z; },
                 [d](const Vec&) { return Mat(Mat::Zero(d, d)); }};

  std::vector<int> counts(d, samples);
  counts[0] = 2;
  GridSpec grid = GridSpec::over_chart(S.chart, counts);
  grid.lo[0] = -1.0;
  grid.hi[0] = 1.0;
  if (S.base.kind != BaseKind::S2Spherical) {
    for (int k = 1; k < d; ++k) {
      grid.lo[k] = std::max(grid.lo[k], -2.0);
      grid.hi[k] = std::min(grid.hi[k], 2.0);
    }
  }
  for (long i = 0; i < grid.total(); ++i) {
    const Vec p = grid.point(i);
    const Vec x = p.tail(nb);
    const Mat g = S.sasaki_g(p);
    const Vec th = S.theta(p);
    const Form dth = S.dtheta(p);

    rep.theta_of_reeb = std::max(rep.theta_of_reeb, std::abs(th.dot(Z) - 1.0));
    rep.unit = std::max(rep.unit, std::abs(Z.dot(g * Z) - 1.0));
    rep.flat_minus_theta =
        std::max(rep.flat_minus_theta, (g * Z - th).cwiseAbs().maxCoeff());
    rep.reeb_hook_dtheta =
        std::max(rep.reeb_hook_dtheta, contract(Z, dth).max_abs());
    rep.killing = std::max(
        rep.killing,
        max_abs(lie_derivative(Zf, [&](const Vec& q) { return S.sasaki_g(q); },
                               p, fd)));

    // J recovered from the metric and dtheta on the horizontal distribution
    Mat hD(nb, nb), Om(nb, nb);
    const Vec eta = S.base.eta(x);
    for (int a = 0; a < nb; ++a)
      for (int b = 0; b < nb; ++b) {
        // E^_a = d_{x_a} - eta_a d_u
        Vec Ea = Vec::Zero(d), Eb = Vec::Zero(d);
        Ea[1 + a] = 1.0;
        Ea[0] = -eta[a];
        Eb[1 + b] = 1.0;
        Eb[0] = -eta[b];
        hD(a, b) = Ea.dot(g * Eb);
        Om(a, b) = form_inner_pair(dth, Ea, Eb);
      }
    const Mat A = invert_metric(hD) * Om;
    const Mat Jrec = A * spd_inverse_sqrt(-(A * A));
    rep.J_recovery = std::max(rep.J_recovery, max_abs(Jrec - S.base.J(x)));

    // dtheta = pullback of the Kahler form
    const Mat om = S.base.omega(x);
    double diff = 0.0;
    for (int a = 0; a < nb; ++a)
      for (int b = 0; b < nb; ++b)
        diff = std::max(diff, std::abs(dth.at({1 + a, 1 + b}) - om(a, b)));
    rep.dtheta_pullback = std::max(rep.dtheta_pullback, diff);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Lorentzian total space, coordinates (t, u, base...)

FirmProfile FirmProfile::constant(double sigma0, double beta0) {
  FirmProfile p;
  p.sigma = {[sigma0](double) { return sigma0; }, [](double) { return 0.0; },
             [](double) { return 0.0; }};
  p.beta_tilde = {[beta0](double) { return beta0; }, [](double) { return 0.0; },
                  [](double) { return 0.0; }};
  return p;
}

namespace {

Chart total_chart(const SasakiChart& S, std::pair<double, double> t_interval) {
  Chart t = make_chart("fiber-t", {"t"}, {t_interval}, 0.0);
  Chart c = product_chart("m-" + to_string(S.base.kind), t, S.chart);
  c.margin = S.chart.margin;
  return c;
}

}  // namespace

MetricField build_lorentz_firm(const SasakiChart& S, const FirmProfile& prof,
                               std::pair<double, double> t_interval) {
  const int nb = S.base.dim();
  const int d = nb + 2;
  const KahlerBase base = S.base;
  const FiberFn sig = prof.sigma, bet = prof.beta_tilde;

  MetricField mf;
  mf.chart = total_chart(S, t_interval);
  mf.signature = {1, d - 1};
  mf.orientation = +1;
  mf.comp = [base, sig, bet, nb, d](const Vec& p) {
    const double t = p[0];
    const Vec x = p.tail(nb);
    const double s = sig(t), b = bet(t);
    Vec th = Vec::Zero(d);  // theta = du + eta
    th[1] = 1.0;
    th.tail(nb) = base.eta(x);
    Vec dt = Vec::Zero(d);
    dt[0] = 1.0;
    Mat g = Mat::Zero(d, d);
    g.bottomRightCorner(nb, nb) = s * base.g(x);
    g += 0.5 * (dt * th.transpose() + th * dt.transpose());
    g += b * th * th.transpose();
    return g;
  };
  mf.d1 = [base, sig, bet, nb, d](const Vec& p, int k) {
    const double t = p[0];
    const Vec x = p.tail(nb);
    Vec th = Vec::Zero(d);
    th[1] = 1.0;
    th.tail(nb) = base.eta(x);
    Mat g = Mat::Zero(d, d);
    if (k == 0) {
      g.bottomRightCorner(nb, nb) = sig.d(t) * base.g(x);
      g += bet.d(t) * th * th.transpose();
      return g;
    }
    if (k == 1) return g;  // u-invariance
    const int kb = k - 2;
    Vec dth = Vec::Zero(d);  // d_k theta components = d_k eta
    const Mat de = base.deta(x);
    for (int m = 0; m < nb; ++m) dth[2 + m] = de(kb, m);
    Vec dt = Vec::Zero(d);
    dt[0] = 1.0;
    g.bottomRightCorner(nb, nb) = sig(t) * base.dg(x, kb);
    g += 0.5 * (dt * dth.transpose() + dth * dt.transpose());
    g += bet(t) * (dth * th.transpose() + th * dth.transpose());
    return g;
  };
  mf.d2 = [base, sig, bet, nb, d](const Vec& p, int k, int l) {
    if (k > l) std::swap(k, l);
    const double t = p[0];
    const Vec x = p.tail(nb);
    Mat g = Mat::Zero(d, d);
    if (k == 1 || l == 1) return g;
    Vec th = Vec::Zero(d);
    th[1] = 1.0;
    th.tail(nb) = base.eta(x);
    const Mat de = base.deta(x);
    auto dth_of = [&](int kb) {
      Vec v = Vec::Zero(d);
      for (int m = 0; m < nb; ++m) v[2 + m] = de(kb, m);
      return v;
    };
    if (k == 0 && l == 0) {
      g.bottomRightCorner(nb, nb) = sig.dd(t) * base.g(x);
      g += bet.dd(t) * th * th.transpose();
      return g;
    }
    if (k == 0) {
      const int lb = l - 2;
      const Vec dth = dth_of(lb);
      g.bottomRightCorner(nb, nb) = sig.d(t) * base.dg(x, lb);
      g += bet.d(t) * (dth * th.transpose() + th * dth.transpose());
      return g;
    }
    const int kb = k - 2, lb = l - 2;
    const Vec dth_k = dth_of(kb), dth_l = dth_of(lb);
    const Mat d2e = base.d2eta(x, kb);  // d2e(l, m) = d_k d_l eta_m
    Vec d2th = Vec::Zero(d);
    for (int m = 0; m < nb; ++m) d2th[2 + m] = d2e(lb, m);
    Vec dt = Vec::Zero(d);
    dt[0] = 1.0;
    g.bottomRightCorner(nb, nb) = sig(t) * base.d2g(x, kb, lb);
    g += 0.5 * (dt * d2th.transpose() + d2th * dt.transpose());
    g += bet(t) * (d2th * th.transpose() + th * d2th.transpose() +
                   dth_k * dth_l.transpose() + dth_l * dth_k.transpose());
    return g;
  };

  // basic health: sigma > 0 and Lorentzian signature at a few points
  GridSpec probe = GridSpec::over_chart(mf.chart, std::vector<int>(d, 2));
  for (long i = 0; i < probe.total(); ++i) {
    const Vec p = probe.point(i);
    if (!(sig(p[0]) > 0.0)) throw SignatureError("sigma <= 0 on t-interval");
    if (signature_of(mf.comp(p)) != std::make_pair(1, d - 1))
      throw SignatureError("metric is not Lorentzian at a sample point");
  }
  return mf;
}

MetricField build_lorentz_general(const SasakiChart& S,
                                  const GeneralProfile& prof,
                                  std::pair<double, double> t_interval) {
  const int nb = S.base.dim();
  const int d = nb + 2;
  const KahlerBase base = S.base;
  if (static_cast<int>(prof.gamma.size()) != nb)
    throw MissingDerivative("gamma must have one entry per base coordinate");

  MetricField mf;
  mf.chart = total_chart(S, t_interval);
  mf.signature = {1, d - 1};
  mf.orientation = +1;
  const GeneralProfile pr = prof;
  mf.comp = [base, pr, nb, d](const Vec& p) {
    const Vec x = p.tail(nb);
    const double s = pr.sigma(p), a = pr.alpha(p), b = pr.beta(p);
    if (std::abs(a) < 1e-8) throw SignatureError("alpha below 1e-8 guard");
    if (!(s > 0.0)) throw SignatureError("sigma <= 0");
    const Mat go = base.g(x);
    Vec th = Vec::Zero(d);
    th[1] = 1.0;
    th.tail(nb) = base.eta(x);
    Vec dt = Vec::Zero(d);
    dt[0] = 1.0;
    Vec rho = Vec::Zero(d);  // gamma^k g_kj dx^j
    for (int j = 0; j < nb; ++j) {
      double v = 0.0;
      for (int k = 0; k < nb; ++k) v += pr.gamma[k](p) * go(k, j);
      rho[2 + j] = v;
    }
    Mat g = Mat::Zero(d, d);
    g.bottomRightCorner(nb, nb) = go;
    const Vec co = a * dt + rho + b * th;
    g += 0.5 * (th * co.transpose() + co * th.transpose());
    g *= s;
    return g;
  };

  GridSpec probe = GridSpec::over_chart(mf.chart, std::vector<int>(d, 2));
  for (long i = 0; i < probe.total(); ++i) {
    const Vec p = probe.point(i);
    const Mat g = mf.comp(p);
    if (signature_of(g) != std::make_pair(1, d - 1))
      throw SignatureError("metric is not Lorentzian at a sample point");
    if (std::abs(g(0, 0)) > 1e-14) throw SignatureError("p_o not null");
  }
  return mf;
}

// ---------------------------------------------------------------------------
// Frame table

double FrameGamma::max_abs_diff(const FrameGamma& o) const {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - o.a[i]));
  return m;
}

Mat frame_matrix(const SasakiChart& S, const Vec& m_pt) {
  const int nb = S.base.dim();
  const int d = nb + 2;
  const Vec eta = S.base.eta(m_pt.tail(nb));
  Mat M = Mat::Zero(d, d);
  M(0, 0) = 1.0;               // p_o = d_t
  for (int i = 0; i < nb; ++i) {
    M(2 + i, 1 + i) = 1.0;     // E^_i = d_{x_i} - eta_i d_u
    M(1, 1 + i) = -eta[i];
  }
  M(1, d - 1) = 1.0;           // q_o = d_u
  return M;
}

SubconformalData subconformal_at(const SasakiChart& S, const FirmProfile& prof,
                                 const Vec& m_pt) {
  const int nb = S.base.dim();
  const int d = nb + 2;
  const Vec x = m_pt.tail(nb);
  const Vec eta = S.base.eta(x);
  SubconformalData out;
  Vec th = Vec::Zero(d);
  th[1] = 1.0;
  th.tail(nb) = eta;
  out.theta = Form::covector(th);
  out.dtheta = Form(d, 2);
  const Mat om = S.base.omega(x);
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b) out.dtheta.at({2 + a, 2 + b}) = om(a, b);
  Vec po = Vec::Zero(d);
  po[0] = 1.0;
  out.basis.push_back(po);
  for (int a = 0; a < nb; ++a) {
    Vec e = Vec::Zero(d);
    e[2 + a] = 1.0;
    e[1] = -eta[a];
    out.basis.push_back(e);
  }
  out.h = Mat::Zero(nb + 1, nb + 1);
  out.h.bottomRightCorner(nb, nb) = prof.sigma(m_pt[0]) * S.base.g(x);
  return out;
}

// shared geometry snapshot at a base point
namespace {
struct BaseAt {
  int nb;
  Mat g, ginv, om, J;
  ConnectionCoeffs gamma;
  BaseAt(const KahlerBase& b, const Vec& x)
      : nb(b.dim()), g(b.g(x)), ginv(invert_metric(g)), om(g * b.J(x)),
        J(b.J(x)), gamma(b.christoffel(x)) {}
  // lowered base Christoffel g_o(nabla_{E_i} E_j, E_k)
  double gamma_low(int i, int j, int k) const {
    double v = 0.0;
    for (int m = 0; m < nb; ++m) v += g(m, k) * gamma.at(m, i, j);
    return v;
  }
};
}  // namespace

FrameGamma christoffel_frame(const SasakiChart& S, const FirmProfile& prof,
                             const Vec& m_pt) {
  const int nb = S.base.dim();
  const int d = nb + 2;
  const double t = m_pt[0];
  const Vec x = m_pt.tail(nb);
  const BaseAt B(S.base, x);
  const double s = prof.sigma(t), sp = prof.sigma.d(t);
  const double b = prof.beta_tilde(t), bp = prof.beta_tilde.d(t);

  // frame slots: 0 = p_o, 1..nb = E^_i, nb+1 = q_o
  const int P = 0, Q = nb + 1;
  FrameGamma T(d);
  for (int i = 0; i < nb; ++i) {
    for (int j = 0; j < nb; ++j) {
      for (int m = 0; m < nb; ++m) T.at(1 + i, 1 + j, 1 + m) = B.gamma.at(m, i, j);
      T.at(1 + i, 1 + j, P) = B.g(i, j) * 2.0 * b * sp;
      T.at(1 + i, 1 + j, Q) = -0.5 * B.om(i, j) - B.g(i, j) * sp;
    }
    for (int m = 0; m < nb; ++m) {
      const double v = -B.J(m, i) / (4.0 * s) + (i == m ? sp / (2.0 * s) : 0.0);
      T.at(1 + i, P, 1 + m) = v;
      T.at(P, 1 + i, 1 + m) = v;
      const double w = -b * B.J(m, i) / (2.0 * s);
      T.at(1 + i, Q, 1 + m) = w;
      T.at(Q, 1 + i, 1 + m) = w;
    }
  }
  T.at(P, Q, P) = bp;
  T.at(Q, P, P) = bp;
  T.at(Q, Q, P) = 2.0 * b * bp;
  T.at(Q, Q, Q) = -bp;
  return T;
}

FrameGamma christoffel_frame(const SasakiChart& S, const GeneralProfile& prof,
                             const Vec& m_pt) {
  const int nb = S.base.dim();
  const int d = nb + 2;
  const Vec x = m_pt.tail(nb);
  const BaseAt B(S.base, x);
  const Vec eta = S.base.eta(x);

  if (!prof.sigma.grad || !prof.alpha.grad || !prof.beta.grad)
    throw MissingDerivative("general profile requires analytic gradients");

  // frame derivatives of a scalar field: p_o = d_t, q_o = d_u,
  // E^_i = d_{x_i} - eta_i d_u
  struct FD {
    double v, p, q;
    Vec e;
  };
  auto fd_of = [&](const ScalarField& f) {
    FD out;
    out.v = f(m_pt);
    const Vec gr = f.grad(m_pt);
    out.p = gr[0];
    out.q = gr[1];
    out.e = Vec(nb);
    for (int i = 0; i < nb; ++i) out.e[i] = gr[2 + i] - eta[i] * gr[1];
    return out;
  };
  const FD sg = fd_of(prof.sigma), al = fd_of(prof.alpha), be = fd_of(prof.beta);
  std::vector<FD> ga(nb);
  for (int i = 0; i < nb; ++i) {
    if (!prof.gamma[i].grad)
      throw MissingDerivative("gamma components require analytic gradients");
    ga[i] = fd_of(prof.gamma[i]);
  }
  const double s = sg.v, a = al.v, b = be.v;

  // gg = gamma^m gamma^k g_mk
  double gg = 0.0;
  for (int m = 0; m < nb; ++m)
    for (int k = 0; k < nb; ++k) gg += ga[m].v * ga[k].v * B.g(m, k);

  // S_{ij|k} = (1/4) gamma^l (om_ik g_lj + om_jk g_li - om_ij g_lk)
  auto S_ijk = [&](int i, int j, int k) {
    double v = 0.0;
    for (int l = 0; l < nb; ++l)
      v += ga[l].v * (B.om(i, k) * B.g(l, j) + B.om(j, k) * B.g(l, i) -
                      B.om(i, j) * B.g(l, k));
    return 0.25 * v;
  };
  // E^_i(gamma^t g_tk): product rule; base metric is u,t independent
  auto Ei_gamma_g = [&](int i, int k) {
    double v = 0.0;
    for (int tt = 0; tt < nb; ++tt)
      v += ga[tt].e[i] * B.g(tt, k) + ga[tt].v * S.base.dg(x, i)(tt, k);
    return v;
  };
  auto po_gamma_g = [&](int k) {  // p_o(gamma^t) g_tk
    double v = 0.0;
    for (int tt = 0; tt < nb; ++tt) v += ga[tt].p * B.g(tt, k);
    return v;
  };
  auto qo_gamma_g = [&](int k) {  // q_o(gamma^t) g_tk
    double v = 0.0;
    for (int tt = 0; tt < nb; ++tt) v += ga[tt].q * B.g(tt, k);
    return v;
  };
  // grad phi components for phi with frame derivatives of sigma
  // (the conformal shift uses phi = (1/2) log sigma)
  auto grad_sigma_E = [&](int m) {  // g^{mk} E^_k(sigma) - (gamma^m / a) p_o(sigma)
    double v = 0.0;
    for (int k = 0; k < nb; ++k) v += B.ginv(m, k) * sg.e[k];
    return v - ga[m].v / a * sg.p;
  };
  const double grad_sigma_P =
      2.0 / a * sg.q + (gg - 4.0 * b) / (a * a) * sg.p -
      [&] {
        double v = 0.0;
        for (int m = 0; m < nb; ++m) v += ga[m].v / a * sg.e[m];
        return v;
      }();

  const int P = 0, Q = nb + 1;
  FrameGamma T(d);

  for (int i = 0; i < nb; ++i) {
    for (int j = 0; j < nb; ++j) {
      for (int m = 0; m < nb; ++m) {
        double v = B.gamma.at(m, i, j) + ga[m].v * B.om(i, j) / 4.0;
        for (int k = 0; k < nb; ++k) v += B.ginv(m, k) * S_ijk(i, j, k);
        v += sg.e[i] / (2 * s) * (j == m ? 1.0 : 0.0);
        v += sg.e[j] / (2 * s) * (i == m ? 1.0 : 0.0);
        v -= B.g(i, j) / (2 * s) * grad_sigma_E(m);
        T.at(1 + i, 1 + j, 1 + m) = v;
      }
      {
        double v = Ei_gamma_g(i, j) / (2 * a) + Ei_gamma_g(j, i) / (2 * a) -
                   gg * B.om(i, j) / (4 * a);
        for (int m = 0; m < nb; ++m)
          v -= ga[m].v / a * (B.gamma_low(i, j, m) + S_ijk(i, j, m));
        v -= B.g(i, j) / (2 * s) * grad_sigma_P;
        T.at(1 + i, 1 + j, P) = v;
      }
      T.at(1 + i, 1 + j, Q) = -0.5 * B.om(i, j) - B.g(i, j) / (a * s) * sg.p;
    }

    for (int m = 0; m < nb; ++m) {
      {
        double v = a / 4.0 *
                   [&] {
                     double w = 0.0;
                     for (int k = 0; k < nb; ++k) w += B.ginv(m, k) * B.om(i, k);
                     return w;
                   }() +
                   (i == m ? sg.p / (2 * s) : 0.0);
        T.at(1 + i, P, 1 + m) = v;
        T.at(P, 1 + i, 1 + m) = v;
      }
      {
        double v = 0.0;
        for (int k = 0; k < nb; ++k)
          v += B.ginv(m, k) * (Ei_gamma_g(i, k) / 4.0 - Ei_gamma_g(k, i) / 4.0 +
                               b * B.om(i, k) / 2.0);
        v += -ga[m].v / (4 * a) * al.e[i] + ga[m].v / (4 * a) * po_gamma_g(i);
        v += (i == m ? sg.q / (2 * s) : 0.0);
        double gt = 0.0;
        for (int tt = 0; tt < nb; ++tt) gt += ga[tt].v * B.g(tt, i);
        v -= gt / (4 * s) * grad_sigma_E(m);
        T.at(1 + i, Q, 1 + m) = v;
        T.at(Q, 1 + i, 1 + m) = v;
      }
    }
    {
      double v = al.e[i] / (2 * a) + po_gamma_g(i) / (2 * a) -
                 [&] {
                   double w = 0.0;
                   for (int m = 0; m < nb; ++m) w += ga[m].v * B.om(i, m);
                   return w;
                 }() / 4.0 +
                 sg.e[i] / (2 * s);
      T.at(1 + i, P, P) = v;
      T.at(P, 1 + i, P) = v;
    }
    {
      double v = be.e[i] / a + gg / (4 * a * a) * al.e[i] -
                 gg / (4 * a * a) * po_gamma_g(i) - b / (a * a) * al.e[i] +
                 b / (a * a) * po_gamma_g(i);
      for (int m = 0; m < nb; ++m) {
        v += -ga[m].v / (4 * a) * Ei_gamma_g(i, m) +
             ga[m].v / (4 * a) * Ei_gamma_g(m, i) -
             ga[m].v / (2 * a) * b * B.om(i, m);
      }
      double gt = 0.0;
      for (int tt = 0; tt < nb; ++tt) gt += ga[tt].v * B.g(tt, i);
      v -= gt / (4 * s) * grad_sigma_P;
      T.at(1 + i, Q, P) = v;
      T.at(Q, 1 + i, P) = v;
    }
    {
      double gt = 0.0;
      for (int tt = 0; tt < nb; ++tt) gt += ga[tt].v * B.g(tt, i);
      const double v = al.e[i] / (2 * a) - po_gamma_g(i) / (2 * a) +
                       sg.e[i] / (2 * s) - gt / (2 * a * s) * sg.p;
      T.at(1 + i, Q, Q) = v;
      T.at(Q, 1 + i, Q) = v;
    }
  }

  T.at(P, P, P) = al.p / a + sg.p / s;  // p_o(log(alpha sigma))
  for (int m = 0; m < nb; ++m) {
    double v = ga[m].p / 4.0;
    for (int k = 0; k < nb; ++k) v -= B.ginv(m, k) * al.e[k] / 4.0;
    v -= a / (4 * s) * grad_sigma_E(m);
    T.at(P, Q, 1 + m) = v;
    T.at(Q, P, 1 + m) = v;
  }
  {
    double v = be.p / a;
    for (int m = 0; m < nb; ++m)
      v += -ga[m].v / (4 * a) * po_gamma_g(m) + ga[m].v / (4 * a) * al.e[m];
    v += sg.q / (2 * s);
    double inner = sg.q + (gg - 4.0 * b) / (2 * a) * sg.p;
    for (int m = 0; m < nb; ++m) inner -= ga[m].v / 2.0 * sg.e[m];
    v -= inner / (2 * s);
    T.at(P, Q, P) = v;
    T.at(Q, P, P) = v;
  }
  for (int m = 0; m < nb; ++m) {
    double v = 0.0;
    for (int k = 0; k < nb; ++k)
      v += B.ginv(m, k) * (qo_gamma_g(k) / 2.0 - be.e[k] / 2.0);
    v += -ga[m].v / (2 * a) * al.q + ga[m].v / (2 * a) * be.p;
    v -= b / (2 * s) * grad_sigma_E(m);
    T.at(Q, Q, 1 + m) = v;
  }
  {
    double v = be.q / a + gg / (2 * a * a) * al.q - gg / (2 * a * a) * be.p -
               2 * b / (a * a) * al.q + 2 * b / (a * a) * be.p;
    for (int m = 0; m < nb; ++m)
      v += -ga[m].v / (2 * a) * qo_gamma_g(m) + ga[m].v / (2 * a) * be.e[m];
    double inner = sg.q / a + (gg - 4.0 * b) / (2 * a * a) * sg.p;
    for (int m = 0; m < nb; ++m) inner -= ga[m].v / (2 * a) * sg.e[m];
    v -= b / s * inner;
    T.at(Q, Q, P) = v;
  }
  T.at(Q, Q, Q) = al.q / a - be.p / a + sg.q / s - b / (a * s) * sg.p;
  return T;
}

namespace {

FrameGamma transport_coordinate_gamma(const SasakiChart& S,
                                      const MetricField& g, const Vec& m_pt,
                                      const DiffScheme& scheme) {
  const int nb = S.base.dim();
  const int d = nb + 2;
  const ConnectionCoeffs G = christoffel_coordinate(g, m_pt, scheme);
  const Mat M = frame_matrix(S, m_pt);
  const Mat Minv = M.inverse();
  const Mat de = S.base.deta(m_pt.tail(nb));

  FrameGamma T(d);
  for (int A = 0; A < d; ++A)
    for (int Bc = 0; Bc < d; ++Bc) {
      const Vec XA = M.col(A), XB = M.col(Bc);
      Vec v = Vec::Zero(d);
      // X_A(X_B^lambda): only the u-component of E^_j varies (-eta_j(x))
      if (Bc >= 1 && Bc <= nb && A >= 1 && A <= nb)
        v[1] -= de(A - 1, Bc - 1);
      for (int l = 0; l < d; ++l) {
        double w = 0.0;
        for (int m = 0; m < d; ++m) {
          if (XA[m] == 0.0) continue;
          for (int n = 0; n < d; ++n)
            if (XB[n] != 0.0) w += XA[m] * XB[n] * G.at(l, m, n);
        }
        v[l] += w;
      }
      const Vec coeff = Minv * v;
      for (int Cc = 0; Cc < d; ++Cc) T.at(A, Bc, Cc) = coeff[Cc];
    }
  return T;
}

}  // namespace

double frame_crosscheck(const SasakiChart& S, const FirmProfile& prof,
                        const MetricField& g, const Vec& m_pt,
                        const DiffScheme& scheme) {
  const FrameGamma table = christoffel_frame(S, prof, m_pt);
  const FrameGamma transported = transport_coordinate_gamma(S, g, m_pt, scheme);
  return table.max_abs_diff(transported);
}

double frame_crosscheck(const SasakiChart& S, const GeneralProfile& prof,
                        const MetricField& g, const Vec& m_pt,
                        const DiffScheme& scheme) {
  const FrameGamma table = christoffel_frame(S, prof, m_pt);
  const FrameGamma transported = transport_coordinate_gamma(S, g, m_pt, scheme);
  return table.max_abs_diff(transported);
}

Mat metric_frame_components(const SasakiChart& S, const FirmProfile& prof,
                            const Vec& m_pt) {
  const int nb = S.base.dim();
  const int d = nb + 2;
  const double t = m_pt[0];
  Mat g = Mat::Zero(d, d);
  g(0, d - 1) = 0.5;
  g(d - 1, 0) = 0.5;
  g(d - 1, d - 1) = prof.beta_tilde(t);
  g.block(1, 1, nb, nb) = prof.sigma(t) * S.base.g(m_pt.tail(nb));
  return g;
}

Mat ricci_frame(const SasakiChart& S, const FirmProfile& prof,
                const Vec& m_pt) {
  const int nb = S.base.dim();
  const int d = nb + 2;
  const int P = 0, Q = nb + 1;
  const BaseAt B(S.base, m_pt.tail(nb));

  auto table_at = [&](const Vec& q) { return christoffel_frame(S, prof, q); };
  const FrameGamma G0 = table_at(m_pt);

  // frame derivatives of the table: p_o = d_t, E^_i = d_{x_i} (entries are
  // u-independent so the -eta_i d_u part drops), q_o = 0
  const double h = 1e-4;
  std::vector<FrameGamma> dT(d, FrameGamma(d));
  auto fd_dir = [&](int coord_axis) {
    Vec q1 = m_pt, q2 = m_pt, q3 = m_pt, q4 = m_pt;
    q1[coord_axis] -= 2 * h;
    q2[coord_axis] -= h;
    q3[coord_axis] += h;
    q4[coord_axis] += 2 * h;
    const FrameGamma g1 = table_at(q1), g2 = table_at(q2), g3 = table_at(q3),
                     g4 = table_at(q4);
    FrameGamma out(d);
    for (std::size_t i = 0; i < out.a.size(); ++i)
      out.a[i] = (g1.a[i] - 8 * g2.a[i] + 8 * g3.a[i] - g4.a[i]) / (12 * h);
    return out;
  };
  dT[P] = fd_dir(0);
  for (int i = 0; i < nb; ++i) dT[1 + i] = fd_dir(2 + i);
  // dT[Q] stays zero

  Mat ric = Mat::Zero(d, d);
  for (int A = 0; A < d; ++A)
    for (int Bc = 0; Bc < d; ++Bc) {
      double v = 0.0;
      for (int D = 0; D < d; ++D) {
        // R_{D A B}^D
        double r = dT[D].at(A, Bc, D) - dT[A].at(D, Bc, D);
        for (int F = 0; F < d; ++F)
          r += -G0.at(D, Bc, F) * G0.at(A, F, D) + G0.at(A, Bc, F) * G0.at(D, F, D);
        // bracket correction for the non-commuting pair (E^_i, E^_j)
        if (D >= 1 && D <= nb && A >= 1 && A <= nb)
          r += B.om(D - 1, A - 1) * G0.at(Q, Bc, D);
        v += r;
      }
      ric(A, Bc) = v;
    }
  return ric;
}

}  // namespace sheargeo
