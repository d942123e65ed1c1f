#include "sheargeo/structures.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>

#include "sheargeo/errors.hpp"
#include "sheargeo/linalg.hpp"

namespace sheargeo {

void SubconformalData::validate() const {
  for (const Vec& b : basis) {
    double tv = 0.0;
    for (int i = 0; i < b.size(); ++i) tv += theta.data()[i] * b[i];
    if (std::abs(tv) > 1e-12)
      throw RankDeficientBasis("basis vector not in ker theta");
  }
  if (max_abs(h - h.transpose()) > 1e-12) throw NotSPD("h not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.eigenvalues().minCoeff() < -1e-12)
    throw NotSPD("h has a negative eigenvalue");
}

int twisting_degree(const SubconformalData& data) {
  data.validate();
  return twisting_degree(data.theta, data.dtheta, data.basis);
}

int twisting_degree(const Form& theta, const Form& dtheta,
                    const std::vector<Vec>& w_basis) {
  const int nb = static_cast<int>(w_basis.size());
  if (nb == 0) throw RankDeficientBasis("empty W basis");
  Mat Wm(w_basis[0].size(), nb);
  for (int a = 0; a < nb; ++a) {
    // basis vectors must lie in ker theta
    double tv = 0.0;
    for (int i = 0; i < w_basis[a].size(); ++i)
      tv += theta.data()[i] * w_basis[a][i];
    if (std::abs(tv) > 1e-10)
      throw RankDeficientBasis("basis vector not in ker theta");
    Wm.col(a) = w_basis[a];
  }
  Eigen::JacobiSVD<Mat> rank_svd(Wm);
  rank_svd.setThreshold(1e-10);
  if (rank_svd.rank() < nb)
    throw RankDeficientBasis("W basis linearly dependent");

  Mat skew(nb, nb);
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b)
      skew(a, b) = form_inner_pair(dtheta, w_basis[a], w_basis[b]);
  Eigen::JacobiSVD<Mat> svd(skew);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv[0] : 0.0;
  if (smax == 0.0) return nb;
  int null_dim = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] < 1e-9 * smax) ++null_dim;
  return null_dim;
}

double form_inner_pair(const Form& two_form, const Vec& a, const Vec& b) {
  double v = 0.0;
  const int d = two_form.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      v += a[i] * b[j] * two_form.at({i, j});
  return v;
}

CRData cr_from_subriemannian(const Mat& h, const Mat& omega) {
  const int d = static_cast<int>(h.rows());
  if (d % 2 != 0) throw DegenerateOmega("odd dimension");
  if (std::abs(omega.determinant()) <= 1e-12)
    throw DegenerateOmega("omega is degenerate");
  if (max_abs(omega + omega.transpose()) > 1e-10)
    throw DegenerateOmega("omega not skew");
  // K = h^{-1} omega is only h-symmetric, so take the square root in the
  // h-orthonormal (whitened) frame where it becomes Euclidean skew.
  const Mat Sh = spd_sqrt(h);
  const Mat Shi = spd_inverse_sqrt(h);
  const Mat Kw = Shi * omega * Shi;
  const Mat Bw = spd_inverse_sqrt(-(Kw * Kw));
  const Mat B = Shi * Bw * Sh;
  Mat J = Shi * (Bw * Kw) * Sh;
  Mat levi = omega * J;  // levi_{ij} = omega(e_i, J e_j) = omega_{ik} J^k_j
  // fix the sign so the Levi form is positive definite
  if (levi(0, 0) < 0.0) {
    J = -J;
    levi = -levi;
  }
  return {J, B, 0.5 * (levi + levi.transpose())};
}

Vec nijenhuis_tensor(const std::function<Mat(const Vec&)>& J,
                     const VectorField& X, const VectorField& Y, const Vec& p,
                     const DiffScheme& scheme) {
  auto JX = VectorField{[&](const Vec& q) { return Vec(J(q) * X.comp(q)); }, {}};
  auto JY = VectorField{[&](const Vec& q) { return Vec(J(q) * Y.comp(q)); }, {}};
  const Vec b1 = lie_bracket(X, Y, p, scheme);
  const Vec b2 = lie_bracket(JX, JY, p, scheme);
  const Vec b3 = lie_bracket(JX, Y, p, scheme);
  const Vec b4 = lie_bracket(X, JY, p, scheme);
  return b1 - b2 + J(p) * (b3 + b4);
}

Vec reeb_field(const Form& theta, const Form& dtheta) {
  const int d = theta.dim();
  Vec th(d);
  for (int i = 0; i < d; ++i) th[i] = theta.data()[i];
  // basis of ker theta
  Eigen::FullPivLU<Mat> lu(th.transpose());
  lu.setThreshold(1e-12);
  Mat kerb = lu.kernel();  // d x (d-1)
  if (kerb.cols() != d - 1) throw NotContact("theta vanishes");
  // contact condition: dtheta restricted to ker theta nondegenerate
  Mat restricted(d - 1, d - 1);
  for (int a = 0; a < d - 1; ++a)
    for (int b = 0; b < d - 1; ++b)
      restricted(a, b) = form_inner_pair(dtheta, kerb.col(a), kerb.col(b));
  Eigen::JacobiSVD<Mat> svd(restricted);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] <= 1e-12 || sv[sv.size() - 1] < 1e-9 * sv[0])
    throw NotContact("d theta degenerate on ker theta");

  // solve theta(Z) = 1, dtheta(Z, e_b) = 0 for all coordinate directions
  Mat A(d + 1, d);
  Vec rhs = Vec::Zero(d + 1);
  A.row(0) = th.transpose();
  rhs[0] = 1.0;
  for (int b = 0; b < d; ++b)
    for (int a = 0; a < d; ++a) A(1 + b, a) = dtheta.at({a, b});
  Vec Z = A.colPivHouseholderQr().solve(rhs);
  if ((A * Z - rhs).cwiseAbs().maxCoeff() > 1e-9)
    throw NotContact("no Reeb solution");
  return Z;
}

AdaptedFrame adapted_frame(const Mat& g, const Vec& p, int q_hint) {
  const int d = static_cast<int>(g.rows());
  const Vec pflat = g * p;
  // transversal direction: prefer the hint, else the largest |p_flat| entry
  int qdir = q_hint;
  if (qdir < 0 || std::abs(pflat[qdir]) < 1e-12) {
    qdir = 0;
    for (int j = 1; j < d; ++j)
      if (std::abs(pflat[j]) > std::abs(pflat[qdir])) qdir = j;
  }
  if (std::abs(pflat[qdir]) < 1e-12)
    throw NoDecomposition("p^flat vanishes; no transversal direction");
  Vec q = Vec::Zero(d);
  q[qdir] = 1.0 / pflat[qdir];   // g(q, p) = 1
  q -= 0.5 * q.dot(g * q) * p;   // make q null (shifts along p keep g(q,p)=1)

  // W = ker p^flat; W' = {w in W : g(q,w) = 0} complementary to <p>
  Eigen::FullPivLU<Mat> lu(pflat.transpose());
  lu.setThreshold(1e-12);
  Mat kerb = lu.kernel();  // d x (d-1), contains p direction
  AdaptedFrame out;
  out.frame.push_back(p);
  const Vec qflat = g * q;
  int taken = 0;
  Mat cand(d, static_cast<int>(kerb.cols()));
  for (int a = 0; a < kerb.cols(); ++a) {
    Vec w = kerb.col(a);
    w -= qflat.dot(w) * p;  // project to g(q,.) = 0 inside W
    cand.col(a) = w;
  }
  // pick d-2 independent candidates not parallel to p
  Mat sel(d, d - 2);
  for (int a = 0; a < kerb.cols() && taken < d - 2; ++a) {
    Mat trial(d, taken + 2);
    trial.col(0) = p;
    for (int j = 0; j < taken; ++j) trial.col(1 + j) = sel.col(j);
    trial.col(taken + 1) = cand.col(a);
    Eigen::JacobiSVD<Mat> svd(trial);
    svd.setThreshold(1e-10);
    if (svd.rank() == taken + 2) sel.col(taken++) = cand.col(a);
  }
  if (taken != d - 2) throw NoDecomposition("could not complete adapted frame");
  for (int j = 0; j < d - 2; ++j) out.frame.push_back(sel.col(j));
  out.frame.push_back(q);
  out.M = Mat(d, d);
  for (int a = 0; a < d; ++a) out.M.col(a) = out.frame[a];
  out.Minv = out.M.inverse();
  return out;
}

ShearfreeDecomposition shearfree_decompose(const MetricField& g,
                                           const VectorField& p_vec,
                                           const Vec& x,
                                           const DiffScheme& scheme) {
  const int d = g.chart.dim;
  const Mat gx = g.comp(x);
  const Vec pv = p_vec.comp(x);
  const double pnorm = pv.dot(gx * pv);
  if (std::abs(pnorm) > 1e-10) throw NotNull("g(p,p) != 0");
  if (pv.cwiseAbs().maxCoeff() < 1e-12) throw NotNull("p vanishes");

  AdaptedFrame fr = adapted_frame(gx, pv, -1);

  const Mat L = lie_derivative(p_vec, g.comp, x, scheme);
  const Mat Lf = fr.M.transpose() * L * fr.M;      // frame components
  const Mat gf = fr.M.transpose() * gx * fr.M;     // g(p,q)=1, g(W',W')=block

  // exact solve in the adapted frame
  const int nw = d - 2;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < nw; ++i)
    for (int j = 0; j < nw; ++j) {
      num += Lf(1 + i, 1 + j) * gf(1 + i, 1 + j);
      den += gf(1 + i, 1 + j) * gf(1 + i, 1 + j);
    }
  const double f = (den > 0.0) ? num / den : 0.0;

  Vec eta = Vec::Zero(d);  // frame components: (p, W', q)
  eta[0] = 2.0 * (Lf(0, d - 1) - f * gf(0, d - 1));      // eta(p)
  for (int i = 0; i < nw; ++i) eta[1 + i] = 2.0 * Lf(d - 1, 1 + i);
  eta[d - 1] = Lf(d - 1, d - 1) - f * gf(d - 1, d - 1);  // eta(q)

  // residual of the fit over the whole frame
  Vec pflat_f = Vec::Zero(d);
  pflat_f[d - 1] = gf(0, d - 1);  // p^flat in frame: only the q slot
  double res = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const double fit = f * gf(a, b) +
                         0.5 * (pflat_f[a] * eta[b] + eta[a] * pflat_f[b]);
      res = std::max(res, std::abs(Lf(a, b) - fit));
    }
  if (res > 1e-4) throw NoDecomposition("least-squares residual > 1e-4");
  ShearfreeDecomposition out;
  out.f = f;
  out.eta = eta;
  out.residual = res;
  return out;
}

GeodesicFactor geodesic_factor(const MetricField& g, const VectorField& p_vec,
                               const Vec& x, const DiffScheme& scheme) {
  const auto dec = shearfree_decompose(g, p_vec, x, scheme);
  const double lambda = dec.f + 0.5 * dec.eta[0];

  const int d = g.chart.dim;
  const Mat gx = g.comp(x);
  const Vec pv = p_vec.comp(x);
  const ConnectionCoeffs G = christoffel_coordinate(g, x, scheme);
  Mat dp(d, d);
  if (p_vec.jac)
    dp = p_vec.jac(x);
  else
    for (int m = 0; m < d; ++m)
      dp.col(m) = central_diff(p_vec.comp, x, m, scheme.h1);
  Vec acc = Vec::Zero(d);
  for (int l = 0; l < d; ++l) {
    double v = 0.0;
    for (int m = 0; m < d; ++m) {
      v += pv[m] * dp(l, m);
      for (int n = 0; n < d; ++n) v += pv[m] * pv[n] * G.at(l, m, n);
    }
    acc[l] = v;
  }
  const Vec dev = gx * (acc - lambda * pv);
  GeodesicFactor out;
  out.lambda = lambda;
  out.residual = dev.cwiseAbs().maxCoeff();
  return out;
}

double PairRescaling::sigma_at(double tq) const {
  if (t.empty()) throw ODEStepError("empty rescaling");
  if (tq <= t.front()) return sigma.front();
  if (tq >= t.back()) return sigma.back();
  const auto it = std::lower_bound(t.begin(), t.end(), tq);
  const std::size_t i = static_cast<std::size_t>(it - t.begin());
  const double w = (tq - t[i - 1]) / (t[i] - t[i - 1]);
  return sigma[i - 1] * (1 - w) + sigma[i] * w;
}

double PairRescaling::tau_at(double tq) const {
  if (t.empty()) throw ODEStepError("empty rescaling");
  if (tq <= t.front()) return tau.front();
  if (tq >= t.back()) return tau.back();
  const auto it = std::lower_bound(t.begin(), t.end(), tq);
  const std::size_t i = static_cast<std::size_t>(it - t.begin());
  const double w = (tq - t[i - 1]) / (t[i] - t[i - 1]);
  return tau[i - 1] * (1 - w) + tau[i] * w;
}

PairRescaling standardize_pair(const std::function<double(double)>& f_fiber,
                               const std::function<double(double)>& etap_fiber,
                               double t_lo, double t_hi, double step) {
  if (!(t_lo < 1.0 && 1.0 < t_hi))
    throw ODEStepError("anchor t=1 must be inside the fiber interval");
  // rhs of the coupled system y = (s, tau). The tau equation is
  // p(tau) = -(1/2) tau eta(p): expanding the conformal shift of the
  // connection from Koszul's formula shows no conformal factor multiplies
  // eta(p) here, and only this form makes the rescaled field autoparallel
  // (checked against geodesic_factor in the tests).
  auto rhs = [&](double t, const Eigen::Vector2d& y) {
    Eigen::Vector2d dy;
    dy[0] = -y[0] * f_fiber(t);
    dy[1] = -0.5 * y[1] * etap_fiber(t);
    return dy;
  };
  auto rk4 = [&](double t, Eigen::Vector2d y, double h) {
    const Eigen::Vector2d k1 = rhs(t, y);
    const Eigen::Vector2d k2 = rhs(t + h / 2, y + h / 2 * k1);
    const Eigen::Vector2d k3 = rhs(t + h / 2, y + h / 2 * k2);
    const Eigen::Vector2d k4 = rhs(t + h, y + h * k3);
    return Eigen::Vector2d(y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4));
  };
  std::vector<double> ts, ss, taus;
  // integrate down from the anchor, then up
  std::vector<std::array<double, 3>> down;
  Eigen::Vector2d y(1.0, 1.0);
  double t = 1.0;
  down.push_back({t, y[0], y[1]});
  while (t - step >= t_lo - 0.5 * step) {
    y = rk4(t, y, -step);
    t -= step;
    down.push_back({t, y[0], y[1]});
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
      throw ODEStepError("integration diverged");
  }
  for (auto it = down.rbegin(); it != down.rend(); ++it) {
    ts.push_back((*it)[0]);
    ss.push_back((*it)[1]);
    taus.push_back((*it)[2]);
  }
  y = Eigen::Vector2d(1.0, 1.0);
  t = 1.0;
  while (t + step <= t_hi + 0.5 * step) {
    y = rk4(t, y, step);
    t += step;
    ts.push_back(t);
    ss.push_back(y[0]);
    taus.push_back(y[1]);
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
      throw ODEStepError("integration diverged");
  }
  PairRescaling out;
  out.t = std::move(ts);
  out.sigma = std::move(ss);
  out.tau = std::move(taus);
  return out;
}

}  // namespace sheargeo
