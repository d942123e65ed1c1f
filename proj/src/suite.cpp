#include "sheargeo/suite.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "sheargeo/einstein.hpp"
#include "sheargeo/errors.hpp"
#include "sheargeo/rng.hpp"
#include "sheargeo/structures.hpp"
#include "sheargeo/wave.hpp"

namespace sheargeo {

namespace {

constexpr const char* kVersion = "sheargeo 1.0.0";
constexpr double kFixedU = 0.2;

struct SuiteCtx {
  const RunConfig& cfg;
  Report& rep;

  double tol(const std::string& check, double fallback) const {
    const auto it = cfg.tol_overrides.find("tol-" + check);
    return it == cfg.tol_overrides.end() ? fallback : it->second;
  }
  void record(const std::string& name, const std::string& anchor,
              const std::string& grid, ResidualStats st, double tolerance,
              long points = 0, std::vector<double> values = {}) {
    CheckRecord r;
    r.name = name;
    r.anchor = anchor;
    r.grid = grid;
    r.max_residual = st.max;
    r.mean_residual = st.mean;
    r.tolerance = tolerance;
    r.pass = st.max <= tolerance;
    r.points = points;
    r.point_values = std::move(values);
    rep.add(std::move(r));
  }
  void record1(const std::string& name, const std::string& anchor,
               const std::string& grid, double value, double tolerance) {
    record(name, anchor, grid, ResidualStats{value, value}, tolerance, 1);
  }
};

double effective_lambda0(const std::string& base_kind, double lambda0) {
  const BaseKind kind = base_kind_from_string(base_kind);
  if (kind == BaseKind::Torus) return 0.0;
  if (kind == BaseKind::HyperbolicDisk) return -std::abs(lambda0 == 0 ? 1 : lambda0);
  return lambda0;
}

KahlerBase base_of(const RunConfig& cfg) {
  return make_base(base_kind_from_string(cfg.base_kind),
                   effective_lambda0(cfg.base_kind, cfg.Lambda0));
}

EinsteinParams params_of(const RunConfig& cfg, const KahlerBase& base) {
  EinsteinParams p;
  p.n = base.dim() + 2;
  p.Lambda = cfg.Lambda;
  p.Lambda0 = base.lambda0;
  p.B = cfg.B;
  p.C = cfg.C;
  return p;
}

// grid over (t, u fixed, base...) matching the config counts when they fit
GridSpec total_grid(const RunConfig& cfg, const MetricField& g,
                    std::pair<double, double> t_range) {
  const int d = g.chart.dim;
  std::vector<int> counts(static_cast<std::size_t>(d), 6);
  if (static_cast<int>(cfg.grid.size()) == d - 1) {
    counts[0] = cfg.grid[0];
    counts[1] = 1;
    for (int k = 2; k < d; ++k) counts[k] = cfg.grid[k - 1];
  } else {
    counts.assign(static_cast<std::size_t>(d), cfg.grid[0]);
    counts[1] = 1;
  }
  GridSpec grid = GridSpec::over_chart(g.chart, counts);
  grid.lo[0] = t_range.first;
  grid.hi[0] = t_range.second;
  grid.lo[1] = kFixedU;
  grid.hi[1] = kFixedU;
  // keep the nested FD stencils of the curvature route inside the chart and
  // away from the far conformal tail where 6D determinants degenerate
  const double pad = 6e-3;
  for (int k = 2; k < d; ++k) {
    grid.lo[k] = std::max(grid.lo[k] + pad, -2.0);
    grid.hi[k] = std::min(grid.hi[k] - pad, 2.0);
  }
  return grid;
}

// random interior point of the total chart, same window as total_grid
Vec random_point(SplitMix64& rng, const Chart& chart,
                 std::pair<double, double> t_range) {
  Vec p(chart.dim);
  p[0] = rng.uniform(t_range.first, t_range.second);
  p[1] = rng.uniform(-1.0, 1.0);
  for (int k = 2; k < chart.dim; ++k)
    p[k] = rng.uniform(std::max(chart.lo(k) + 0.1, -2.0),
                       std::min(chart.hi(k) - 0.1, 2.0));
  return p;
}

void run_verify_base(SuiteCtx& ctx) {
  const KahlerBase base = base_of(ctx.cfg);
  const int samples = base.dim() == 2 ? 15 : 4;
  const BaseReport br = verify_kahler_einstein(base, samples);
  std::ostringstream grid;
  grid << samples << "^" << base.dim() << " grid on " << base.chart.name;
  ctx.record1("base.einstein", "kahler-einstein identity Ric = lambda0 g",
              grid.str(), br.einstein, ctx.tol("base.einstein", 1e-6));
  ctx.record1("base.nabla-J", "covariant constancy of the complex structure",
              grid.str(), br.nabla_J, ctx.tol("base.nabla-J", 1e-6));
  ctx.record1("base.d-omega", "closedness of the Kahler form", grid.str(),
              br.d_omega, ctx.tol("base.d-omega", 1e-6));
  ctx.record1("base.deta-omega", "connection primitive d(eta) = omega",
              grid.str(), br.deta_minus_omega, ctx.tol("base.deta-omega", 1e-8));
  ctx.record1("base.J-squared", "J^2 = -I", grid.str(), br.J_squared,
              ctx.tol("base.J-squared", 1e-12));
}

void run_verify_sasaki(SuiteCtx& ctx) {
  const KahlerBase base = base_of(ctx.cfg);
  const SasakiChart S = build_sasaki(base);
  const int samples = base.dim() == 2 ? 6 : 3;
  const SasakiReport sr = verify_sasaki(S, samples);
  std::ostringstream grid;
  grid << "2x" << samples << "^" << base.dim() << " grid on " << S.chart.name;
  ctx.record1("sasaki.theta-reeb", "theta(Z) = 1", grid.str(), sr.theta_of_reeb,
              ctx.tol("sasaki.theta-reeb", 1e-12));
  ctx.record1("sasaki.reeb-dtheta", "Z . dtheta = 0", grid.str(),
              sr.reeb_hook_dtheta, ctx.tol("sasaki.reeb-dtheta", 1e-12));
  ctx.record1("sasaki.unit", "g(Z,Z) = 1", grid.str(), sr.unit,
              ctx.tol("sasaki.unit", 1e-12));
  ctx.record1("sasaki.flat-theta", "g(Z,.) = theta", grid.str(),
              sr.flat_minus_theta, ctx.tol("sasaki.flat-theta", 1e-12));
  ctx.record1("sasaki.killing", "Reeb field is Killing", grid.str(), sr.killing,
              ctx.tol("sasaki.killing", 1e-8));
  ctx.record1("sasaki.J-recovery", "J = normalized g^{-1} dtheta on D",
              grid.str(), sr.J_recovery, ctx.tol("sasaki.J-recovery", 1e-8));
  ctx.record1("sasaki.dtheta-pullback", "dtheta equals the pulled-back form",
              grid.str(), sr.dtheta_pullback,
              ctx.tol("sasaki.dtheta-pullback", 1e-8));
}

void run_einstein(SuiteCtx& ctx) {
  const KahlerBase base = base_of(ctx.cfg);
  const EinsteinParams par = params_of(ctx.cfg, base);
  const SasakiChart S = build_sasaki(base);
  const FirmProfile prof = einstein_profile(par);
  const MetricField g = build_lorentz_firm(S, prof);
  const GridSpec grid = total_grid(ctx.cfg, g, {0.3, 3.0});
  const double tol_coord = ctx.tol("einstein.coordinate",
                                   par.n <= 4 ? 1e-5 : 1e-4);

  const EinsteinReport er = full_einstein_residual(
      S, prof, g, par.Lambda, grid, DiffScheme::central(), true);
  ctx.record("einstein.coordinate", "einstein equation residual |Ric - Lambda g|",
             grid.describe(), er.coordinate, tol_coord, er.grid_points,
             er.point_residuals);
  ctx.record1("einstein.frame-route", "frame-assembled Ricci vs Lambda g",
              "32-point subsample", er.frame_max,
              ctx.tol("einstein.frame-route", tol_coord));

  // dual-route connection agreement on random interior points
  {
    SplitMix64 rng(ctx.cfg.seed ^ 0x9e3779b9ULL);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const Vec p = random_point(rng, g.chart, {0.4, 2.5});
      worst = std::max(worst,
                       frame_crosscheck(S, prof, g, p, DiffScheme::central()));
    }
    ctx.record1("einstein.frame-crosscheck",
                "frame table vs transported coordinate connection",
                "50 random points", worst,
                ctx.tol("einstein.frame-crosscheck", 1e-6));
  }

  // reduced ODE system residuals
  {
    double rb = 0, rpq = 0, rpp = 0;
    for (double t : {0.1, 0.5, 1.0, 2.0, 10.0}) {
      const ReducedResiduals rr = reduced_einstein_residuals(par, t);
      rb = std::max(rb, std::abs(rr.r_base));
      rpq = std::max(rpq, std::abs(rr.r_pq));
      rpp = std::max(rpp, std::abs(rr.r_pp));
    }
    ctx.record1("einstein.ode-base", "reduced base-direction equation",
                "t in {0.1,0.5,1,2,10}", rb, ctx.tol("einstein.ode-base", 1e-9));
    ctx.record1("einstein.ode-pq", "reduced mixed-direction equation",
                "t in {0.1,0.5,1,2,10}", rpq, ctx.tol("einstein.ode-pq", 1e-9));
    ctx.record1("einstein.ode-pp", "sigma equation -2 s s'' + s'^2 + 1/4",
                "t in {0.1,0.5,1,2,10}", rpp, ctx.tol("einstein.ode-pp", 1e-9));
  }
  {
    const Rational disc = sigma_profile(par.C).discriminant_exact() +
                          Rational(1) / Rational(4);
    ctx.record1("einstein.sigma-discriminant",
                "discriminant of sigma equals -1/4 exactly", "exact rational",
                disc == 0 ? 0.0 : 1.0, 0.0);
  }
  // beta~ closed form checks
  {
    const RationalProfile bet = beta_profile(par);
    double worst = 0.0;
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0})
      worst = std::max(worst, std::abs(beta_ode_residual(par, t)));
    ctx.record1("einstein.beta-eqbeta", "closed form solves the linear equation",
                "t in {0.1..10}", worst, ctx.tol("einstein.beta-eqbeta", 1e-10));

    const double b0 = 4 * par.C * (par.Lambda0 - par.C * par.Lambda);
    double worst0 = std::abs(bet(0.0) - b0);
    EinsteinParams pb = par;
    for (double Bv : {-10.0, 0.0, 10.0}) {
      pb.B = Bv;
      worst0 = std::max(worst0, std::abs(beta_profile(pb)(0.0) - b0));
    }
    ctx.record1("einstein.beta-at-zero",
                "beta~(0) = 4C(lambda0 - C Lambda), independent of B",
                "B in {-10,0,10}", worst0, ctx.tol("einstein.beta-at-zero", 1e-12));

    // RK4 integration of the reduced equation from t = 1
    double t = 1.0, y = bet(1.0), worst_rk = 0.0;
    auto rhs = [&](double tt, double yy) {
      const SigmaProfile sg = sigma_profile(par.C);
      const double s = sg(tt);
      const double coef = (par.n - 4) / s * (tt / (8 * par.C)) * (tt / (8 * par.C)) -
                          1.0 / (2 * s) + 1.0 / (4 * par.C);
      return (s * par.Lambda - par.Lambda0 - coef * yy) * (4 * par.C / tt);
    };
    const double h = 1e-3;
    auto step = [&](double tt, double yy, double hh) {
      const double k1 = rhs(tt, yy);
      const double k2 = rhs(tt + hh / 2, yy + hh / 2 * k1);
      const double k3 = rhs(tt + hh / 2, yy + hh / 2 * k2);
      const double k4 = rhs(tt + hh, yy + hh * k3);
      return yy + hh / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    };
    while (t < 10.0 - 1e-12) {
      y = step(t, y, h);
      t += h;
      worst_rk = std::max(worst_rk, std::abs(y - bet(t)));
    }
    t = 1.0;
    y = bet(1.0);
    while (t > 0.1 + 1e-12) {
      y = step(t, y, -h);
      t -= h;
      worst_rk = std::max(worst_rk, std::abs(y - bet(t)));
    }
    ctx.record1("einstein.beta-rk4", "closed form matches RK4 integration",
                "t in [0.1,10], h=1e-3", worst_rk,
                ctx.tol("einstein.beta-rk4", 1e-6));

    // linearity in B at the rational-arithmetic level
    EinsteinParams p0 = par, p1 = par;
    p0.B = 0.0;
    p1.B = 7.0;
    const RationalProfile b0p = beta_profile(p0), b1p = beta_profile(p1);
    Poly diff = b1p.numerator - b0p.numerator -
                Poly::monomial(to_rational(7.0), 1);
    ctx.record1("einstein.beta-linearity",
                "beta~_B - beta~_0 = B t / (t^2+16C^2)^{n/2-1} exactly",
                "rational arithmetic", diff.is_zero() ? 0.0 : 1.0, 0.0);
  }

  // shearfree / geodesic suite on the constructed metric
  {
    VectorField po{[&](const Vec&) {
                     Vec v = Vec::Zero(g.chart.dim);
                     v[0] = 1.0;
                     return v;
                   },
                   [&](const Vec&) {
                     return Mat(Mat::Zero(g.chart.dim, g.chart.dim));
                   }};
    SplitMix64 rng(ctx.cfg.seed ^ 0x51ULL);
    double dres = 0.0, gres = 0.0, fdev = 0.0, twist_dev = 0.0;
    const DiffScheme fd = DiffScheme::central();
    for (int i = 0; i < 25; ++i) {
      const Vec p = random_point(rng, g.chart, {0.4, 2.5});
      const auto dec = shearfree_decompose(g, po, p, fd);
      dres = std::max(dres, dec.residual);
      const SigmaProfile sg = sigma_profile(par.C);
      fdev = std::max(fdev, std::abs(dec.f - sg.d(p[0]) / sg(p[0])));
      const auto gf = geodesic_factor(g, po, p, fd);
      gres = std::max(gres, gf.residual);

      // twisting degree of the pulled-back structure at p
      twist_dev = std::max(
          twist_dev,
          std::abs(twisting_degree(subconformal_at(S, prof, p)) - 1.0));
    }
    ctx.record1("shearfree.decompose", "conformal + null-covector split of L_p g",
                "25 random points", dres, ctx.tol("shearfree.decompose", 1e-8));
    ctx.record1("shearfree.f-value", "conformal factor f = sigma'/sigma",
                "25 random points", fdev, ctx.tol("shearfree.f-value", 1e-8));
    ctx.record1("shearfree.geodesic", "nabla_p p parallel to p at lambda",
                "25 random points", gres, ctx.tol("shearfree.geodesic", 1e-7));
    ctx.record1("shearfree.twisting-degree", "kernel of dtheta on W is a line",
                "25 random points", twist_dev,
                ctx.tol("shearfree.twisting-degree", 0.0));

    // Killing property for constant profiles
    const MetricField gc = build_lorentz_firm(S, FirmProfile::constant(1.0, 0.5));
    double kres = 0.0;
    for (int i = 0; i < 10; ++i) {
      const Vec p = random_point(rng, g.chart, {0.4, 2.5});
      kres = std::max(kres, max_abs(lie_derivative(po, gc.comp, p, fd)));
    }
    ctx.record1("shearfree.killing-const", "p_o Killing for constant profiles",
                "10 random points", kres,
                ctx.tol("shearfree.killing-const", 1e-10));
  }
}

void run_taubnut(SuiteCtx& ctx) {
  const KahlerBase base = make_base(BaseKind::S2Spherical,
                                    effective_lambda0("s2-spherical", ctx.cfg.Lambda0));
  EinsteinParams par = params_of(ctx.cfg, base);
  par.n = 4;
  par.Lambda = 0.0;
  const TaubNutReport tr = taub_nut_transform(par, {0.05, 0.4}, 8, 4);
  std::ostringstream grid;
  grid << "ell=" << format_double(tr.params.ell) << " m=" << format_double(tr.params.m)
       << " tc in (0.05,0.4], " << tr.grid_points << " points";
  ctx.record1("taubnut.component-match",
              "transformed metric equals the closed-form family", grid.str(),
              tr.max_component_diff, ctx.tol("taubnut.component-match", 1e-10));

  const double disc = taub_nut_beta_discrepancy(par);
  const bool region_valid = par.B == 0.0 || std::abs(16 * par.C * par.C - 1) < 1e-12;
  ctx.record1("taubnut.beta-bcheck",
              "closed-form profile vs B-check parametrization (reported; "
              "tight only for B=0 or 16C^2=1)",
              "41 t-samples", disc,
              region_valid ? ctx.tol("taubnut.beta-bcheck", 1e-10)
                           : std::numeric_limits<double>::infinity());
}

void run_wave(SuiteCtx& ctx) {
  RunConfig wc = ctx.cfg;
  // spherical coordinates carry no holomorphic chart; hop to the
  // stereographic chart of the same sphere
  if (base_kind_from_string(wc.base_kind) == BaseKind::S2Spherical)
    wc.base_kind = "s2-stereographic";
  const KahlerBase base = base_of(wc);
  const EinsteinParams par = params_of(wc, base);
  const SasakiChart S = build_sasaki(base);
  const FirmProfile prof = einstein_profile(par);
  const MetricField g = build_lorentz_firm(S, prof);
  const WaveForm w = build_wave(S, g);

  GridSpec grid = total_grid(wc, g, {0.5, 2.0});
  // waves sample a compact window of the conformal charts
  for (int k = 2; k < g.chart.dim; ++k) {
    grid.lo[k] = std::max(grid.lo[k], -1.4);
    grid.hi[k] = std::min(grid.hi[k], 1.4);
  }
  const HarmonicityReport hr =
      harmonicity_check(w, grid, DiffScheme::central());
  ctx.record("wave.dF", "closedness of the plane wave", grid.describe(),
             reduce_stats(hr.dF_values), ctx.tol("wave.dF", 1e-6),
             static_cast<long>(hr.dF_values.size()), hr.dF_values);
  ctx.record("wave.dstarF", "coclosedness of the plane wave", grid.describe(),
             reduce_stats(hr.dstarF_values), ctx.tol("wave.dstarF", 1e-6),
             static_cast<long>(hr.dstarF_values.size()), hr.dstarF_values);
  ctx.record1("wave.eigenrelation",
              "middle form is a (signed) eigenform of the star operator",
              grid.describe(), hr.eigen_residual,
              ctx.tol("wave.eigenrelation", 1e-8));

  SplitMix64 rng(ctx.cfg.seed ^ 0xabcdULL);
  double inv_gap = 0.0, align = 0.0, lie = 0.0, ffit = 0.0, hook = 0.0;
  for (int i = 0; i < 8; ++i) {
    Vec p(g.chart.dim);
    p[0] = rng.uniform(0.5, 2.0);
    p[1] = rng.uniform(-1.0, 1.0);
    for (int k = 2; k < g.chart.dim; ++k) p[k] = rng.uniform(-1.2, 1.2);
    const FlagLieReport fr = flag_and_lie_check(w, p, DiffScheme::central());
    inv_gap = std::max(inv_gap, 1.0 / fr.sv_gap);
    align = std::max(align, std::abs(1.0 - fr.kernel_alignment));
    lie = std::max({lie, fr.lie_F, fr.lie_starF});
    ffit = std::max(ffit, fr.f_fit_residual);
    Vec po = Vec::Zero(g.chart.dim);
    po[0] = 1.0;
    hook = std::max(hook, contract(po, w.re(p)).max_abs());
  }
  ctx.record1("wave.kernel-gap", "joint kernel is one line (1/sv-gap)",
              "8 random points", inv_gap, ctx.tol("wave.kernel-gap", 1e-6));
  ctx.record1("wave.kernel-align", "joint kernel spans the fiber direction",
              "8 random points", align, ctx.tol("wave.kernel-align", 1e-8));
  ctx.record1("wave.lie", "Lie derivatives of F and *F along p_o vanish",
              "8 random points", lie, ctx.tol("wave.lie", 1e-7));
  ctx.record1("wave.theta-fit", "L_{p_o} theta = -f theta fit", "8 random points",
              ffit, ctx.tol("wave.theta-fit", 1e-8));
  ctx.record1("wave.po-hook", "p_o . F = 0", "8 random points", hook,
              ctx.tol("wave.po-hook", 1e-10));
}

void run_cr(SuiteCtx& ctx) {
  SplitMix64 rng(ctx.cfg.seed);
  double j2 = 0.0, spd = 0.0, round = 0.0, scale = 0.0, sqrt_res = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 * (1 + static_cast<int>(rng.next() % 3));  // 2, 4, 6
    Mat A(d, d), W(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        A(i, j) = rng.uniform(-1.0, 1.0);
        W(i, j) = rng.uniform(-1.0, 1.0);
      }
    const Mat h = A * A.transpose() + 0.3 * Mat::Identity(d, d);
    Mat om = W - W.transpose();
    if (std::abs(om.determinant()) < 1e-6) continue;
    const CRData cr = cr_from_subriemannian(h, om);
    j2 = std::max(j2, max_abs(cr.J * cr.J + Mat::Identity(d, d)));
    Eigen::SelfAdjointEigenSolver<Mat> es(cr.levi);
    spd = std::max(spd, std::max(0.0, -es.eigenvalues().minCoeff()));
    round = std::max(round, max_abs(cr.levi * cr.B - h));
    for (double s : {0.1, 10.0}) {
      const CRData cs = cr_from_subriemannian(Mat(s * h), om);
      scale = std::max(scale, max_abs(cs.J - cr.J));
    }
  }
  ctx.record1("cr.J-squared", "recovered complex structure squares to -I",
              "200 random pairs, dim 2/4/6", j2, ctx.tol("cr.J-squared", 1e-10));
  ctx.record1("cr.levi-positive", "Levi form positive definite",
              "200 random pairs", spd, ctx.tol("cr.levi-positive", 0.0));
  ctx.record1("cr.roundtrip", "levi . B recovers the sub-Riemannian metric",
              "200 random pairs", round, ctx.tol("cr.roundtrip", 1e-10));
  ctx.record1("cr.scale-invariance", "J unchanged under h -> s h",
              "s in {0.1, 10}", scale, ctx.tol("cr.scale-invariance", 1e-10));

  for (int trial = 0; trial < 50; ++trial) {
    Mat A(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) A(i, j) = rng.uniform(-1.0, 1.0);
    const Mat S = A * A.transpose() + 1e-3 * Mat::Identity(5, 5);
    const Mat R = spd_inverse_sqrt(S);
    sqrt_res = std::max(sqrt_res, max_abs(R * R * S - Mat::Identity(5, 5)));
  }
  ctx.record1("cr.spd-inverse-sqrt", "R R S = I for the inverse square root",
              "50 random SPD 5x5", sqrt_res, ctx.tol("cr.spd-inverse-sqrt", 1e-10));
}

}  // namespace

Report run_suite(const RunConfig& cfg) {
  cfg.validate();
  Report rep;
  rep.config_echo = cfg.echo();
  rep.seed = cfg.seed;
  rep.version = kVersion;
  SuiteCtx ctx{cfg, rep};

  switch (cfg.command) {
    case Command::VerifyBase: run_verify_base(ctx); break;
    case Command::VerifySasaki: run_verify_sasaki(ctx); break;
    case Command::Einstein: run_einstein(ctx); break;
    case Command::TaubNut: run_taubnut(ctx); break;
    case Command::Wave: run_wave(ctx); break;
    case Command::CrRoundtrip: run_cr(ctx); break;
    case Command::All:
      run_verify_base(ctx);
      run_verify_sasaki(ctx);
      run_einstein(ctx);
      if (base_kind_from_string(cfg.base_kind) == BaseKind::S2Spherical &&
          cfg.Lambda == 0.0)
        run_taubnut(ctx);
      run_wave(ctx);
      run_cr(ctx);
      break;
  }
  rep.sort();
  return rep;
}

}  // namespace sheargeo
