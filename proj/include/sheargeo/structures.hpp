#pragma once

#include <functional>
#include <vector>

#include "sheargeo/forms.hpp"
#include "sheargeo/metric.hpp"

namespace sheargeo {

// Pointwise subconformal data: defining 1-form theta of the distribution,
// its exterior derivative, a basis of ker theta, and the induced (semi)
// definite metric h in that basis.
struct SubconformalData {
  Form theta;
  Form dtheta;
  std::vector<Vec> basis;
  Mat h;

  // theta(b) = 0 to 1e-12 for every basis vector, h symmetric with
  // eigenvalues >= -1e-12; throws RankDeficientBasis / NotSPD.
  void validate() const;
};

// CR data recovered from a sub-Riemannian pair (h, omega) on an even
// dimensional distribution: complex structure J, the positive endomorphism B
// and the Levi form, all in the given basis.
struct CRData {
  Mat J;
  Mat B;
  Mat levi;
};

// Result of fitting L_p g = f g + p^flat v eta in an adapted frame.
struct ShearfreeDecomposition {
  double f = 0.0;
  Vec eta;        // frame components (coefficients on the dual coframe)
  double residual = 0.0;
};

// dim Ker d(theta)|_W at p: count of singular values < 1e-9 * sigma_max of the
// skew matrix d(theta)(b_a, b_b). Throws RankDeficientBasis if the basis does
// not span ker theta.
int twisting_degree(const Form& theta, const Form& dtheta,
                    const std::vector<Vec>& w_basis);
int twisting_degree(const SubconformalData& data);

// K = h^{-1} omega, B = (-K^2)^{-1/2}, J = B K, levi = omega(., J.).
// The sign of K is flipped when needed so the Levi form is positive definite.
CRData cr_from_subriemannian(const Mat& h, const Mat& omega);

// N_J(X,Y) = [X,Y] - [JX,JY] + J([JX,Y] + [X,JY]); J is a pointwise
// endomorphism field applied to coordinate components (extended by zero on
// any complement the caller leaves out of its range).
Vec nijenhuis_tensor(const std::function<Mat(const Vec&)>& J,
                     const VectorField& X, const VectorField& Y, const Vec& p,
                     const DiffScheme& scheme);

// Unique Z with theta(Z) = 1, Z . dtheta = 0. Throws NotContact when
// dtheta restricted to ker theta is degenerate.
Vec reeb_field(const Form& theta, const Form& dtheta);

struct AdaptedFrame {
  std::vector<Vec> frame;    // columns p_o, E_1..E_{n-2}, q_o (coordinate comps)
  Mat M;                     // frame matrix, columns as above
  Mat Minv;                  // dual coframe rows
};

// Decompose L_p g at x against the adapted frame (p, W'-basis, q). Requires
// g(p,p) = 0 at x. Throws NotNull / NoDecomposition.
ShearfreeDecomposition shearfree_decompose(const MetricField& g,
                                           const VectorField& p_vec,
                                           const Vec& x,
                                           const DiffScheme& scheme);

// Geodesic factor lambda = f + eta(p)/2 together with the parallelism
// residual max_e |g(nabla_p p - lambda p, e)| over the adapted frame.
struct GeodesicFactor {
  double lambda = 0.0;
  double residual = 0.0;
};
GeodesicFactor geodesic_factor(const MetricField& g, const VectorField& p_vec,
                               const Vec& x, const DiffScheme& scheme);

// Rescaling functions along the fiber solving p(s) = -s f and p(tau) =
// -(1/2) tau eta(p), integrated by fixed-step RK4 from the anchor t = 1.
// The pair (s g, tau p) is then standard (autoparallel) and distinguished.
struct PairRescaling {
  std::vector<double> t;
  std::vector<double> sigma;  // s(t)
  std::vector<double> tau;    // tau(t)
  double sigma_at(double t) const;
  double tau_at(double t) const;
};
PairRescaling standardize_pair(
    const std::function<double(double)>& f_along_fiber,
    const std::function<double(double)>& eta_p_along_fiber, double t_lo,
    double t_hi, double step = 1e-3);

// Adapted frame (p, W'-basis, q) for a null vector p: q is the null rigging
// with g(p,q) = 1, and W' is a basis of ker(p^flat) with g(q, W') = 0,
// complementary to <p>. q_hint selects the preferred transversal coordinate
// direction (-1 picks the largest |p^flat| component).
AdaptedFrame adapted_frame(const Mat& g, const Vec& p, int q_hint = -1);

// Evaluate a 2-form on a pair of vectors.
double form_inner_pair(const Form& two_form, const Vec& a, const Vec& b);

}  // namespace sheargeo
