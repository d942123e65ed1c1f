#pragma once

#include <functional>
#include <memory>

#include "sheargeo/kahler.hpp"
#include "sheargeo/structures.hpp"

namespace sheargeo {

// Sasaki chart S = N x R_u with contact form theta = du + eta, Reeb field
// d_u and Sasaki metric g = theta (x) theta + (1/2) pi*(g_o). Coordinates are
// ordered (u, base...).
struct SasakiChart {
  KahlerBase base;
  Chart chart;  // dim = base.dim + 1
  std::pair<double, double> u_interval{-10.0, 10.0};

  int dim() const { return chart.dim; }
  // theta components on (u, x): (1, eta(x))
  Vec theta(const Vec& s_pt) const;
  Vec reeb() const;  // d_u
  Mat sasaki_g(const Vec& s_pt) const;
  Form dtheta(const Vec& s_pt) const;
};

SasakiChart build_sasaki(const KahlerBase& base);

struct SasakiReport {
  double theta_of_reeb = 0.0;     // |theta(Z) - 1|
  double reeb_hook_dtheta = 0.0;  // max |Z . dtheta|
  double flat_minus_theta = 0.0;  // max |g(Z,.) - theta|
  double killing = 0.0;           // max |L_Z g|
  double unit = 0.0;              // |g(Z,Z) - 1|
  double J_recovery = 0.0;        // |normalize(g^{-1} dtheta|_D) - J|
  double dtheta_pullback = 0.0;   // max |dtheta - pi* omega|
};
SasakiReport verify_sasaki(const SasakiChart& S, int samples = 4);

// Scalar profile of the fiber coordinate with two derivatives.
struct FiberFn {
  std::function<double(double)> v, d, dd;
  double operator()(double t) const { return v(t); }
};

struct FirmProfile {
  FiberFn sigma;       // must stay > 0 on the t-interval
  FiberFn beta_tilde;
  static FirmProfile constant(double sigma0, double beta0);
};

// Scalar field on M with analytic coordinate gradient (t, u, base...).
struct ScalarField {
  std::function<double(const Vec&)> v;
  std::function<Vec(const Vec&)> grad;
  double operator()(const Vec& p) const { return v(p); }
};

struct GeneralProfile {
  ScalarField sigma;               // > 0
  ScalarField alpha;               // != 0
  ScalarField beta;
  std::vector<ScalarField> gamma;  // size base.dim
};

// Lorentzian total space M = S x R_t, coordinates (t, u, base...).
// Firmly compatible metric g = sigma pi*(g_o) + dt v theta + beta~ theta (x)
// theta, with v the symmetric product carrying the factor 1/2.
MetricField build_lorentz_firm(const SasakiChart& S, const FirmProfile& prof,
                               std::pair<double, double> t_interval = {0.05,
                                                                       12.0});

// General compatible metric
// g = sigma ( pi*(g_o) + theta v (alpha dt + gamma^i g_ij dx^j + beta theta) ).
// Throws SignatureError when |alpha| < 1e-8 or sigma <= 0 at a sampled point.
MetricField build_lorentz_general(const SasakiChart& S,
                                  const GeneralProfile& prof,
                                  std::pair<double, double> t_interval = {0.05,
                                                                          12.0});

// Frame Christoffel table Gamma_A{}_B{}^C in the frame (p_o, E^_i, q_o),
// stored as T[A][B][C] with A,B,C in frame order (p_o, E_1..E_{n-2}, q_o).
struct FrameGamma {
  int n = 0;
  std::vector<double> a;
  explicit FrameGamma(int n_) : n(n_), a(n_ * n_ * n_, 0.0) {}
  double& at(int A, int B, int C) { return a[(A * n + B) * n + C]; }
  double at(int A, int B, int C) const { return a[(A * n + B) * n + C]; }
  double max_abs_diff(const FrameGamma& o) const;
};

// Evaluate the frame Christoffel table at a point of M. The FirmProfile
// overload is the reduced table for sigma, beta~ functions of t only (exact
// in t); the GeneralProfile overload is the full (sigma, alpha, beta, gamma)
// table.
FrameGamma christoffel_frame(const SasakiChart& S, const FirmProfile& prof,
                             const Vec& m_pt);
FrameGamma christoffel_frame(const SasakiChart& S, const GeneralProfile& prof,
                             const Vec& m_pt);

// Frame vectors as coordinate components: columns (p_o, E^_i, q_o).
Mat frame_matrix(const SasakiChart& S, const Vec& m_pt);

// Subconformal data on the total space at a point: the pulled-back contact
// form, its differential, the W = ker(theta) basis (p_o, E^_i), and the
// degenerate metric sigma * g_o in that basis (zero row/column for p_o).
SubconformalData subconformal_at(const SasakiChart& S, const FirmProfile& prof,
                                 const Vec& m_pt);

// Transport the coordinate (Koszul) Christoffels into the frame and report
// the max discrepancy against the frame table (dual-route validation).
double frame_crosscheck(const SasakiChart& S, const FirmProfile& prof,
                        const MetricField& g, const Vec& m_pt,
                        const DiffScheme& scheme);
double frame_crosscheck(const SasakiChart& S, const GeneralProfile& prof,
                        const MetricField& g, const Vec& m_pt,
                        const DiffScheme& scheme);

// Ricci in the frame assembled from the frame table, Ric_AB = R_{D A B}{}^D,
// with the bracket correction for the only non-commuting pairs (E^_i, E^_j).
Mat ricci_frame(const SasakiChart& S, const FirmProfile& prof, const Vec& m_pt);

// Frame components of a firmly compatible metric: g(p,q) = 1/2, g(E_i,E_j) =
// sigma g_ij, g(q,q) = beta~.
Mat metric_frame_components(const SasakiChart& S, const FirmProfile& prof,
                            const Vec& m_pt);

}  // namespace sheargeo
