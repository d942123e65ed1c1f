#include "sheargeo/einstein.hpp"

#include <cmath>
#include <limits>

#include "sheargeo/errors.hpp"
#include "sheargeo/linalg.hpp"

namespace sheargeo {

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw Error("non-finite value has no rational form");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
  const long long mant = static_cast<long long>(std::ldexp(m, 53));
  Rational r(mant);
  const int shift = exp - 53;
  using Int = boost::multiprecision::cpp_int;
  if (shift >= 0)
    r *= Rational(Int(1) << shift);
  else
    r /= Rational(Int(1) << (-shift));
  return r;
}

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const Rational& c) { return Poly({c}); }

Poly Poly::monomial(const Rational& c, int k) {
  std::vector<Rational> v(static_cast<std::size_t>(k) + 1, Rational(0));
  v.back() = c;
  return Poly(std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Poly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return Rational(0);
  return c_[static_cast<std::size_t>(k)];
}

bool Poly::is_zero() const { return c_.empty(); }

Poly Poly::operator+(const Poly& o) const {
  std::vector<Rational> v(std::max(c_.size(), o.c_.size()), Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) v[i] += o.c_[i];
  return Poly(std::move(v));
}

Poly Poly::operator-(const Poly& o) const {
  std::vector<Rational> v(std::max(c_.size(), o.c_.size()), Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) v[i] -= o.c_[i];
  return Poly(std::move(v));
}

Poly Poly::operator*(const Poly& o) const {
  if (c_.empty() || o.c_.empty()) return Poly();
  std::vector<Rational> v(c_.size() + o.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
  return Poly(std::move(v));
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly();
  std::vector<Rational> v(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i)
    v[i - 1] = c_[i] * Rational(static_cast<long long>(i));
  return Poly(std::move(v));
}

Rational Poly::eval_exact(const Rational& t) const {
  Rational v(0);
  for (std::size_t i = c_.size(); i-- > 0;) v = v * t + c_[i];
  return v;
}

double Poly::eval(double t) const {
  double v = 0.0;
  for (std::size_t i = c_.size(); i-- > 0;)
    v = v * t + c_[i].convert_to<double>();
  return v;
}

// ---------------------------------------------------------------------------
// Profiles

double RationalProfile::operator()(double t) const {
  return numerator.eval(t) / denominator.eval(t);
}

double RationalProfile::d(double t) const {
  const double N = numerator.eval(t), D = denominator.eval(t);
  const double Np = numerator.derivative().eval(t);
  const double Dp = denominator.derivative().eval(t);
  return (Np * D - N * Dp) / (D * D);
}

double RationalProfile::dd(double t) const {
  const Poly Np = numerator.derivative(), Dp = denominator.derivative();
  const double N = numerator.eval(t), D = denominator.eval(t);
  const double np = Np.eval(t), dp = Dp.eval(t);
  const double npp = Np.derivative().eval(t), dpp = Dp.derivative().eval(t);
  // ((N'D - N D')' D - 2 D' (N'D - N D')) / D^3
  const double u = np * D - N * dp;
  const double up = npp * D - N * dpp;
  return (up * D - 2.0 * dp * u) / (D * D * D);
}

FiberFn RationalProfile::fiber_fn() const {
  const RationalProfile self = *this;
  return {[self](double t) { return self(t); },
          [self](double t) { return self.d(t); },
          [self](double t) { return self.dd(t); }};
}

Rational SigmaProfile::discriminant_exact() const {
  const Rational Cr = to_rational(C);
  return -Rational(4) * (Rational(1) / (Rational(16) * Cr)) * Cr;
}

FiberFn SigmaProfile::fiber_fn() const {
  const SigmaProfile self = *this;
  return {[self](double t) { return self(t); },
          [self](double t) { return self.d(t); },
          [self](double) { return self.dd(); }};
}

SigmaProfile sigma_profile(double C) {
  if (!(C > 0)) throw ConfigError("C must be > 0");
  return SigmaProfile{C};
}

RationalProfile beta_profile(const EinsteinParams& p) {
  if (p.n < 4 || p.n % 2 != 0) throw ConfigError("n must be even and >= 4");
  if (!(p.C > 0)) throw ConfigError("C must be > 0");
  const int m = p.n / 2 - 1;
  const Rational C = to_rational(p.C);
  const Rational L = to_rational(p.Lambda);
  const Rational L0 = to_rational(p.Lambda0);
  const Rational Bc = to_rational(p.B);
  const Rational C16 = Rational(16) * C * C;  // 16 C^2

  // (16C^2 + s^2)^m expanded in powers of s^2: A[j] s^{2j}
  std::vector<Rational> A(static_cast<std::size_t>(m) + 1, Rational(0));
  {
    Rational binom(1);
    for (int j = 0; j <= m; ++j) {
      Rational pw(1);
      for (int i = 0; i < m - j; ++i) pw *= C16;
      A[static_cast<std::size_t>(j)] = binom * pw;
      binom = binom * Rational(m - j) / Rational(j + 1);
    }
  }
  // integrand * 4 s^2 = (16C^2+s^2)^m (16 C L0 - L(16C^2+s^2));
  // P[j] = coefficient of s^{2j} of the integrand times s^2
  const Rational c0 = (Rational(16) * C * L0 - C16 * L) / Rational(4);
  const Rational c1 = -L / Rational(4);
  std::vector<Rational> P(static_cast<std::size_t>(m) + 2, Rational(0));
  for (int j = 0; j <= m; ++j) {
    P[static_cast<std::size_t>(j)] += A[static_cast<std::size_t>(j)] * c0;
    P[static_cast<std::size_t>(j) + 1] += A[static_cast<std::size_t>(j)] * c1;
  }
  // antiderivative of P[0] s^{-2} + sum_{j>=1} P[j] s^{2j-2}:
  //   -P[0]/s + R(s),  R odd polynomial
  Poly R;
  for (int j = 1; j <= m + 1; ++j)
    R = R + Poly::monomial(P[static_cast<std::size_t>(j)] /
                               Rational(2 * j - 1),
                           2 * j - 1);
  // beta~ = [P0 + (B + Q(1)) t - t R(t)] / (t^2+16C^2)^m with
  // Q(1) = -P0 + R(1); the 1/s^2 pole of the integrand cancels the t -> 0
  // pole exactly
  const Rational Q1 = -P[0] + R.eval_exact(Rational(1));
  Poly N = Poly::constant(P[0]) + Poly::monomial(Bc + Q1, 1) -
           Poly::monomial(Rational(1), 1) * R;
  Poly D = Poly::constant(Rational(1));
  const Poly quad({C16, Rational(0), Rational(1)});
  for (int i = 0; i < m; ++i) D = D * quad;
  RationalProfile out;
  out.numerator = N;
  out.denominator = D;
  return out;
}

FirmProfile einstein_profile(const EinsteinParams& p) {
  FirmProfile f;
  f.sigma = sigma_profile(p.C).fiber_fn();
  f.beta_tilde = beta_profile(p).fiber_fn();
  return f;
}

double beta_ode_residual(const EinsteinParams& p, double t) {
  if (t == 0.0) throw ConfigError("the reduced equation has a 1/t coefficient");
  const SigmaProfile sig = sigma_profile(p.C);
  const RationalProfile bet = beta_profile(p);
  const double s = sig(t);
  const double coef = (p.n - 4) / s * (t / (8 * p.C)) * (t / (8 * p.C)) -
                      1.0 / (2 * s) + 1.0 / (4 * p.C);
  return t / (4 * p.C) * bet.d(t) + coef * bet(t) - s * p.Lambda + p.Lambda0;
}

ReducedResiduals reduced_einstein_residuals(const EinsteinParams& p, double t) {
  return reduced_einstein_residuals(p, t, sigma_profile(p.C).fiber_fn(),
                                    beta_profile(p).fiber_fn());
}

ReducedResiduals reduced_einstein_residuals(const EinsteinParams& p, double t,
                                            const FiberFn& sigma,
                                            const FiberFn& beta) {
  const double s = sigma(t), sp = sigma.d(t), spp = sigma.dd(t);
  const double b = beta(t), bp = beta.d(t), bpp = beta.dd(t);
  ReducedResiduals r;
  r.r_base = 2 * bp * sp +
             ((p.n - 4) / (2 * s) * sp * sp - 1.0 / (4 * s) + spp) * 2 * b -
             s * p.Lambda + p.Lambda0;
  r.r_pq = 2 * bpp + (p.n - 2) / s * bp * sp + (p.n - 2) / (4 * s * s) * b -
           p.Lambda;
  r.r_pp = -2 * s * spp + sp * sp + 0.25;
  return r;
}

EinsteinReport full_einstein_residual(const SasakiChart& S,
                                      const FirmProfile& prof,
                                      const MetricField& g, double Lambda,
                                      const GridSpec& grid,
                                      const DiffScheme& scheme,
                                      bool frame_route, ExecMode mode) {
  EinsteinReport rep;
  rep.grid_points = static_cast<int>(grid.total());
  auto residual = [&](const Vec& p) {
    const TensorResult tr = curvature_coordinate(g, p, scheme);
    return max_abs(tr.ricci - Lambda * g.comp(p));
  };
  grid_eval(grid, residual, rep.point_residuals, mode);
  rep.coordinate = reduce_stats(rep.point_residuals);

  if (frame_route) {
    const long n = grid.total();
    const long stride = std::max<long>(1, n / 32);
    double worst = 0.0;
    for (long i = 0; i < n; i += stride) {
      const Vec p = grid.point(i);
      const Mat ric = ricci_frame(S, prof, p);
      const Mat gf = metric_frame_components(S, prof, p);
      worst = std::max(worst, max_abs(ric - Lambda * gf));
    }
    rep.frame_max = worst;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Taub-NUT recovery

double taub_nut_beta_closed_form(const EinsteinParams& p, double t) {
  const double C = p.C, L0 = p.Lambda0;
  const double Bck = p.B * (1 + 16 * C * C) / (2 * L0) + 4 * C * (1 - 16 * C * C);
  return L0 * (Bck * t / (t * t + 16 * C * C) -
               4 * C * (t * t - 16 * C * C) / (t * t + 16 * C * C));
}

double taub_nut_beta_discrepancy(const EinsteinParams& p) {
  const RationalProfile bet = beta_profile(p);
  double worst = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double t = 0.25 + i * (4.0 - 0.25) / 40;
    worst = std::max(worst, std::abs(bet(t) - taub_nut_beta_closed_form(p, t)));
  }
  return worst;
}

TaubNutParams taub_nut_params(const EinsteinParams& p) {
  TaubNutParams out;
  out.ell = std::sqrt(p.C);
  out.B_check = p.B * (1 + 16 * p.C * p.C) / (2 * p.Lambda0) +
                4 * p.C * (1 - 16 * p.C * p.C);
  out.m = out.B_check / (32 * out.ell * out.ell * out.ell);
  return out;
}

TaubNutReport taub_nut_transform(const EinsteinParams& p,
                                 std::pair<double, double> tc_interval,
                                 int tc_samples, int ang_samples) {
  if (p.n != 4) throw ConfigError("Taub-NUT recovery requires n = 4");
  if (p.Lambda != 0.0)
    throw ConfigError("Taub-NUT recovery requires Lambda = 0");
  const TaubNutParams tn = taub_nut_params(p);
  const double ell = tn.ell, m = tn.m, L0 = p.Lambda0;
  const RationalProfile bet = beta_profile(p);

  // the fiber change of variables needs 1/(2 beta~); refuse intervals where
  // beta~ crosses zero
  {
    const double t_lo = 4 * ell * tc_interval.first;
    const double t_hi = 4 * ell * tc_interval.second;
    double prev = bet(t_lo);
    for (double t = t_lo; t <= t_hi + 1e-12; t += 1e-3) {
      const double v = bet(t);
      if (v == 0.0 || (v > 0) != (prev > 0))
        throw HorizonCrossing("beta~ vanishes inside the working interval");
      prev = v;
    }
  }

  const KahlerBase base = make_base(BaseKind::S2Spherical, L0);
  const SasakiChart S = build_sasaki(base);
  const MetricField g =
      build_lorentz_firm(S, einstein_profile(p),
                         {4 * ell * tc_interval.first * 0.5,
                          4 * ell * tc_interval.second * 1.5});

  TaubNutReport rep;
  rep.params = tn;
  auto display = [&](double tc, double psi) {
    Mat out = Mat::Zero(4, 4);  // coordinates (tc, v, psi, phi)
    const double f1 = tc * tc + ell * ell;
    const double f2 =
        4 * ell * ell * (2 * m * tc + ell * ell - tc * tc) / (tc * tc + ell * ell);
    Vec dv = Vec::Zero(4);
    dv[1] = 1.0;
    dv[3] = std::cos(psi);
    out(2, 2) = f1 / L0;
    out(3, 3) = f1 * std::sin(psi) * std::sin(psi) / L0;
    out += f2 / L0 * dv * dv.transpose();
    out(0, 0) -= f1 / (2 * m * tc + ell * ell - tc * tc) / L0;
    return out;
  };
  int npts = 0;
  for (int it = 0; it < tc_samples; ++it) {
    const double tc = tc_interval.first +
                      (tc_interval.second - tc_interval.first) *
                          (tc_samples == 1 ? 0.0 : double(it) / (tc_samples - 1));
    for (int ia = 0; ia < ang_samples; ++ia) {
      const double psi = 0.4 + 2.2 * double(ia) / std::max(1, ang_samples - 1);
      const double phi = -0.8 + 0.5 * ia;
      const double t = 4 * ell * tc;
      Vec q(4);
      q << t, 0.0, psi, phi;
      // Jacobian d(t,u,psi,phi)/d(tc,v,psi,phi)
      Mat Jm = Mat::Identity(4, 4);
      Jm(0, 0) = 4 * ell;
      Jm(1, 0) = -4 * ell / (2 * bet(t));
      Jm(1, 1) = 1.0 / L0;
      const Mat pushed = Jm.transpose() * g.comp(q) * Jm;
      rep.max_component_diff = std::max(rep.max_component_diff,
                                        max_abs(pushed - display(tc, psi)));
      ++npts;
    }
  }
  rep.grid_points = npts;
  return rep;
}

}  // namespace sheargeo
