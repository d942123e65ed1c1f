#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "sheargeo/bundle.hpp"
#include "sheargeo/grid.hpp"

namespace sheargeo {

using Rational = boost::multiprecision::cpp_rational;

// Exact rational conversion of a double (every finite double is p / 2^k).
Rational to_rational(double x);

// Dense univariate polynomial with exact rational coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs);  // coeffs[k] multiplies t^k
  static Poly constant(const Rational& c);
  static Poly monomial(const Rational& c, int k);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int k) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly derivative() const;
  Rational eval_exact(const Rational& t) const;
  double eval(double t) const;
  bool is_zero() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

struct EinsteinParams {
  int n = 4;           // dim M, even, >= 4
  double Lambda = 0.0;
  double Lambda0 = 1.0;
  double B = 0.0;
  double C = 0.25;
};

// beta~ as an exact rational function numerator / (t^2 + 16 C^2)^{n/2-1}.
// The 1/s^2 term of the integrand integrates to -c/s and cancels the t -> 0
// pole after multiplication by t, which is what makes the profile a
// polynomial quotient finite on all of R.
struct RationalProfile {
  Poly numerator;
  Poly denominator;
  double operator()(double t) const;
  double d(double t) const;    // first derivative
  double dd(double t) const;   // second derivative
  FiberFn fiber_fn() const;
};

// sigma(t) = t^2/(16 C) + C, with derivatives; quadratic with discriminant
// exactly -1/4 for every C > 0.
struct SigmaProfile {
  double C = 0.25;
  double operator()(double t) const { return t * t / (16.0 * C) + C; }
  double d(double t) const { return t / (8.0 * C); }
  double dd() const { return 1.0 / (8.0 * C); }
  // discriminant b^2 - 4 a c of the quadratic, in exact arithmetic
  Rational discriminant_exact() const;
  FiberFn fiber_fn() const;
};

SigmaProfile sigma_profile(double C);
RationalProfile beta_profile(const EinsteinParams& p);
FirmProfile einstein_profile(const EinsteinParams& p);

// Residual of the first order linear ODE for beta~ (t != 0).
double beta_ode_residual(const EinsteinParams& p, double t);

// Residuals of the reduced system: r_base (base equation), r_pq, r_pp.
// r_pp is the inner bracket -2 sigma sigma'' + sigma'^2 + 1/4, identically
// zero for the quadratic sigma.
struct ReducedResiduals {
  double r_base = 0.0;
  double r_pq = 0.0;
  double r_pp = 0.0;
};
ReducedResiduals reduced_einstein_residuals(const EinsteinParams& p, double t);
ReducedResiduals reduced_einstein_residuals(const EinsteinParams& p, double t,
                                            const FiberFn& sigma,
                                            const FiberFn& beta);

// Max / mean of |Ric - Lambda g| over a grid, coordinate route. If
// frame_route is true, additionally assembles Ricci from the frame table and
// reports that discrepancy in `frame_max`.
struct EinsteinReport {
  ResidualStats coordinate;
  double frame_max = -1.0;
  int grid_points = 0;
  std::vector<double> point_residuals;
};
EinsteinReport full_einstein_residual(const SasakiChart& S,
                                      const FirmProfile& prof,
                                      const MetricField& g, double Lambda,
                                      const GridSpec& grid,
                                      const DiffScheme& scheme,
                                      bool frame_route = false,
                                      ExecMode mode = ExecMode::Parallel);

struct TaubNutParams {
  double ell = 0.0;     // sqrt(C)
  double m = 0.0;       // B_check / (32 ell^3)
  double B_check = 0.0;
};

// 4D Taub-NUT coordinate recovery: push the built metric through
// (t,u) -> (tc = t/(4 ell), v = Lambda0 (u + int 1/(2 beta~))) and compare
// against the closed-form expression in (tc, v, psi, phi). Returns the max
// componentwise deviation over the tc grid. Throws HorizonCrossing when
// beta~ vanishes inside the working interval (pre-scan at 1e-3 spacing).
struct TaubNutReport {
  TaubNutParams params;
  double max_component_diff = 0.0;
  int grid_points = 0;
};
TaubNutParams taub_nut_params(const EinsteinParams& p);
TaubNutReport taub_nut_transform(const EinsteinParams& p,
                                 std::pair<double, double> tc_interval,
                                 int tc_samples = 8, int ang_samples = 4);

// Max difference between beta_profile and the 4D closed form parametrized by
// B_check, over a t sample (reported, not asserted; the two expressions are
// known to coincide only for B = 0 or 16 C^2 = 1).
double taub_nut_beta_closed_form(const EinsteinParams& p, double t);
double taub_nut_beta_discrepancy(const EinsteinParams& p);

}  // namespace sheargeo
