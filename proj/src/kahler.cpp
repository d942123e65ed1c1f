#include "sheargeo/kahler.hpp"

#include <cmath>

#include "sheargeo/errors.hpp"
#include "sheargeo/grid.hpp"
#include "sheargeo/linalg.hpp"

namespace sheargeo {

BaseKind base_kind_from_string(const std::string& s) {
  if (s == "s2-spherical" || s == "s2") return BaseKind::S2Spherical;
  if (s == "s2-stereographic" || s == "s2-stereo")
    return BaseKind::S2Stereographic;
  if (s == "torus") return BaseKind::Torus;
  if (s == "hyperbolic-disk" || s == "hyperbolic")
    return BaseKind::HyperbolicDisk;
  if (s == "product-s2-s2" || s == "product(s2,s2)" || s == "s2xs2")
    return BaseKind::ProductS2S2;
  throw ConfigError("unknown base kind '" + s + "'");
}

std::string to_string(BaseKind k) {
  switch (k) {
    case BaseKind::S2Spherical: return "s2-spherical";
    case BaseKind::S2Stereographic: return "s2-stereographic";
    case BaseKind::Torus: return "torus";
    case BaseKind::HyperbolicDisk: return "hyperbolic-disk";
    case BaseKind::ProductS2S2: return "product-s2-s2";
  }
  return "?";
}

Mat KahlerBase::omega(const Vec& x) const { return g(x) * J(x); }

MetricField KahlerBase::metric_field() const {
  MetricField mf;
  mf.chart = chart;
  mf.comp = g;
  mf.d1 = dg;
  mf.d2 = d2g;
  mf.signature = {0, chart.dim};
  mf.orientation = +1;
  return mf;
}

ConnectionCoeffs KahlerBase::christoffel(const Vec& x) const {
  const int d = chart.dim;
  const Mat ginv = invert_metric(g(x));
  std::vector<Mat> dgm(d);
  for (int k = 0; k < d; ++k) dgm[k] = dg(x, k);
  ConnectionCoeffs G(d);
  for (int m = 0; m < d; ++m)
    for (int n = m; n < d; ++n)
      for (int l = 0; l < d; ++l) {
        double v = 0.0;
        for (int r = 0; r < d; ++r)
          v += ginv(l, r) * (dgm[m](n, r) + dgm[n](m, r) - dgm[r](m, n));
        G.at(l, m, n) = 0.5 * v;
        G.at(l, n, m) = G.at(l, m, n);
      }
  return G;
}

namespace {

KahlerBase make_s2_spherical(double L0) {
  KahlerBase b;
  b.kind = BaseKind::S2Spherical;
  b.lambda0 = L0;
  b.chart = make_chart("s2-spherical", {"psi", "phi"},
                       {{0.0, M_PI}, {-M_PI, M_PI}}, 0.1);
  b.g = [L0](const Vec& x) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = 1.0 / L0;
    m(1, 1) = std::sin(x[0]) * std::sin(x[0]) / L0;
    return m;
  };
  b.dg = [L0](const Vec& x, int k) {
    Mat m = Mat::Zero(2, 2);
    if (k == 0) m(1, 1) = 2.0 * std::sin(x[0]) * std::cos(x[0]) / L0;
    return m;
  };
  b.d2g = [L0](const Vec& x, int k, int l) {
    Mat m = Mat::Zero(2, 2);
    if (k == 0 && l == 0) m(1, 1) = 2.0 * std::cos(2.0 * x[0]) / L0;
    return m;
  };
  b.eta = [L0](const Vec& x) {
    Vec e = Vec::Zero(2);
    e[1] = std::cos(x[0]) / L0;
    return e;
  };
  b.deta = [L0](const Vec& x) {
    Mat m = Mat::Zero(2, 2);
    m(0, 1) = -std::sin(x[0]) / L0;
    return m;
  };
  b.d2eta = [L0](const Vec& x, int k) {
    Mat m = Mat::Zero(2, 2);
    if (k == 0) m(0, 1) = -std::cos(x[0]) / L0;
    return m;
  };
  b.J = [](const Vec& x) {
    Mat m = Mat::Zero(2, 2);
    m(1, 0) = 1.0 / std::sin(x[0]);  // J d_psi = (1/sin) d_phi
    m(0, 1) = -std::sin(x[0]);       // J d_phi = -sin d_psi
    return m;
  };
  b.dJ = [](const Vec& x, int k) {
    Mat m = Mat::Zero(2, 2);
    if (k == 0) {
      const double s = std::sin(x[0]), c = std::cos(x[0]);
      m(1, 0) = -c / (s * s);
      m(0, 1) = -c;
    }
    return m;
  };
  return b;
}

// Conformally flat surface g = c(r^2) I with primitive eta = q(r^2)(x dy - y dx)
// (torus uses the flat gauge eta = x dy instead).
struct ConformalFns {
  std::function<double(double)> c, cp, cpp;   // c(s) and derivatives in s
  std::function<double(double)> q, qp, qpp;   // eta factor, zero for torus
  bool torus_gauge = false;
};

KahlerBase make_conformal(BaseKind kind, double L0, Chart chart,
                          ConformalFns f) {
  KahlerBase b;
  b.kind = kind;
  b.lambda0 = L0;
  b.chart = std::move(chart);
  b.holo_pairs = {{0, 1}};
  auto s_of = [](const Vec& x) { return x[0] * x[0] + x[1] * x[1]; };
  b.g = [f, s_of](const Vec& x) {
    return Mat(f.c(s_of(x)) * Mat::Identity(2, 2));
  };
  b.dg = [f, s_of](const Vec& x, int k) {
    return Mat(f.cp(s_of(x)) * 2.0 * x[k] * Mat::Identity(2, 2));
  };
  b.d2g = [f, s_of](const Vec& x, int k, int l) {
    const double s = s_of(x);
    const double v = f.cpp(s) * 4.0 * x[k] * x[l] + (k == l ? 2.0 * f.cp(s) : 0.0);
    return Mat(v * Mat::Identity(2, 2));
  };
  if (f.torus_gauge) {
    b.eta = [](const Vec& x) {
      Vec e = Vec::Zero(2);
      e[1] = x[0];
      return e;
    };
    b.deta = [](const Vec&) {
      Mat m = Mat::Zero(2, 2);
      m(0, 1) = 1.0;
      return m;
    };
    b.d2eta = [](const Vec&, int) { return Mat(Mat::Zero(2, 2)); };
  } else {
    b.eta = [f, s_of](const Vec& x) {
      const double q = f.q(s_of(x));
      Vec e(2);
      e[0] = -q * x[1];
      e[1] = q * x[0];
      return e;
    };
    b.deta = [f, s_of](const Vec& x) {
      const double s = s_of(x);
      const double q = f.q(s), qp = f.qp(s);
      // d_k eta_m = 2 qp x_k eps_m + q d_k eps_m, eps = (-y, x)
      Mat m(2, 2);
      m(0, 0) = 2 * qp * x[0] * (-x[1]);
      m(1, 0) = 2 * qp * x[1] * (-x[1]) - q;
      m(0, 1) = 2 * qp * x[0] * x[0] + q;
      m(1, 1) = 2 * qp * x[1] * x[0];
      return m;
    };
    b.d2eta = [f, s_of](const Vec& x, int k) {
      const double s = s_of(x);
      const double qp = f.qp(s), qpp = f.qpp(s);
      const double e[2] = {-x[1], x[0]};
      // d_l eps: d_x eps = (0,1), d_y eps = (-1,0)
      const double de[2][2] = {{0.0, 1.0}, {-1.0, 0.0}};
      Mat m(2, 2);
      for (int l = 0; l < 2; ++l)
        for (int mm = 0; mm < 2; ++mm)
          m(l, mm) = 4 * qpp * x[k] * x[l] * e[mm] +
                     2 * qp * ((k == l) ? e[mm] : 0.0) +
                     2 * qp * x[k] * de[l][mm] + 2 * qp * x[l] * de[k][mm];
      return m;
    };
  }
  b.J = [](const Vec&) {
    Mat m = Mat::Zero(2, 2);
    m(1, 0) = -1.0;  // J d_x = -d_y
    m(0, 1) = 1.0;   // J d_y = d_x
    return m;
  };
  b.dJ = [](const Vec&, int) { return Mat(Mat::Zero(2, 2)); };
  return b;
}

KahlerBase make_s2_stereographic(double L0) {
  ConformalFns f;
  f.c = [L0](double s) { return 4.0 / (L0 * (1 + s) * (1 + s)); };
  f.cp = [L0](double s) { return -8.0 / (L0 * std::pow(1 + s, 3)); };
  f.cpp = [L0](double s) { return 24.0 / (L0 * std::pow(1 + s, 4)); };
  f.q = [L0](double s) { return 2.0 / (L0 * (1 + s)); };
  f.qp = [L0](double s) { return -2.0 / (L0 * (1 + s) * (1 + s)); };
  f.qpp = [L0](double s) { return 4.0 / (L0 * std::pow(1 + s, 3)); };
  return make_conformal(
      BaseKind::S2Stereographic, L0,
      make_chart("s2-stereographic", {"x", "y"}, {{-10.0, 10.0}, {-10.0, 10.0}},
                 0.1),
      f);
}

KahlerBase make_torus(double) {
  ConformalFns f;
  f.c = [](double) { return 1.0; };
  f.cp = [](double) { return 0.0; };
  f.cpp = [](double) { return 0.0; };
  f.torus_gauge = true;
  return make_conformal(
      BaseKind::Torus, 0.0,
      make_chart("torus", {"x", "y"}, {{-M_PI, M_PI}, {-M_PI, M_PI}}, 0.1), f);
}

KahlerBase make_hyperbolic(double L0) {
  const double A = 4.0 / std::abs(L0);
  ConformalFns f;
  f.c = [A](double s) { return A / ((1 - s) * (1 - s)); };
  f.cp = [A](double s) { return 2.0 * A / std::pow(1 - s, 3); };
  f.cpp = [A](double s) { return 6.0 * A / std::pow(1 - s, 4); };
  const double Q = 2.0 / std::abs(L0);
  f.q = [Q](double s) { return Q / (1 - s); };
  f.qp = [Q](double s) { return Q / ((1 - s) * (1 - s)); };
  f.qpp = [Q](double s) { return 2.0 * Q / std::pow(1 - s, 3); };
  return make_conformal(
      BaseKind::HyperbolicDisk, L0,
      make_chart("hyperbolic-disk", {"x", "y"}, {{-0.6, 0.6}, {-0.6, 0.6}},
                 0.05),
      f);
}

KahlerBase make_product_s2s2(double L0) {
  const KahlerBase f1 = make_s2_stereographic(L0);
  const KahlerBase f2 = make_s2_stereographic(L0);
  KahlerBase b;
  b.kind = BaseKind::ProductS2S2;
  b.lambda0 = L0;
  b.chart = product_chart("product-s2-s2", f1.chart, f2.chart);
  b.holo_pairs = {{0, 1}, {2, 3}};
  auto split = [](const Vec& x) {
    return std::pair<Vec, Vec>{x.head(2), x.tail(2)};
  };
  auto block = [](const Mat& a, const Mat& b2) {
    Mat m = Mat::Zero(4, 4);
    m.topLeftCorner(2, 2) = a;
    m.bottomRightCorner(2, 2) = b2;
    return m;
  };
  b.g = [=](const Vec& x) {
    auto [x1, x2] = split(x);
    return block(f1.g(x1), f2.g(x2));
  };
  b.dg = [=](const Vec& x, int k) {
    auto [x1, x2] = split(x);
    if (k < 2) return block(f1.dg(x1, k), Mat::Zero(2, 2));
    return block(Mat::Zero(2, 2), f2.dg(x2, k - 2));
  };
  b.d2g = [=](const Vec& x, int k, int l) {
    auto [x1, x2] = split(x);
    if (k < 2 && l < 2) return block(f1.d2g(x1, k, l), Mat::Zero(2, 2));
    if (k >= 2 && l >= 2) return block(Mat::Zero(2, 2), f2.d2g(x2, k - 2, l - 2));
    return Mat(Mat::Zero(4, 4));
  };
  b.eta = [=](const Vec& x) {
    auto [x1, x2] = split(x);
    Vec e(4);
    e.head(2) = f1.eta(x1);
    e.tail(2) = f2.eta(x2);
    return e;
  };
  b.deta = [=](const Vec& x) {
    auto [x1, x2] = split(x);
    return block(f1.deta(x1), f2.deta(x2));
  };
  b.d2eta = [=](const Vec& x, int k) {
    auto [x1, x2] = split(x);
    if (k < 2) return block(f1.d2eta(x1, k), Mat::Zero(2, 2));
    return block(Mat::Zero(2, 2), f2.d2eta(x2, k - 2));
  };
  b.J = [=](const Vec& x) {
    auto [x1, x2] = split(x);
    return block(f1.J(x1), f2.J(x2));
  };
  b.dJ = [=](const Vec&, int) { return Mat(Mat::Zero(4, 4)); };
  return b;
}

}  // namespace

KahlerBase make_base(BaseKind kind, double lambda0) {
  switch (kind) {
    case BaseKind::S2Spherical:
    case BaseKind::S2Stereographic:
    case BaseKind::ProductS2S2:
      if (!(lambda0 > 0))
        throw BadCurvatureSign("sphere bases require lambda0 > 0");
      break;
    case BaseKind::Torus:
      if (lambda0 != 0.0) throw BadCurvatureSign("torus requires lambda0 = 0");
      break;
    case BaseKind::HyperbolicDisk:
      if (!(lambda0 < 0))
        throw BadCurvatureSign("hyperbolic disk requires lambda0 < 0");
      break;
  }
  switch (kind) {
    case BaseKind::S2Spherical: return make_s2_spherical(lambda0);
    case BaseKind::S2Stereographic: return make_s2_stereographic(lambda0);
    case BaseKind::Torus: return make_torus(lambda0);
    case BaseKind::HyperbolicDisk: return make_hyperbolic(lambda0);
    case BaseKind::ProductS2S2: return make_product_s2s2(lambda0);
  }
  throw Error("unreachable");
}

BaseReport verify_kahler_einstein(const KahlerBase& base, int samples) {
  const int d = base.dim();
  const MetricField mf = base.metric_field();
  const DiffScheme an = DiffScheme::analytic();
  const DiffScheme fd = DiffScheme::central();
  BaseReport rep;

  FormField omega_field{d, 2, [&](const Vec& x) {
                          const Mat om = base.omega(x);
                          Form f(d, 2);
                          for (int i = 0; i < d; ++i)
                            for (int j = 0; j < d; ++j) f.at({i, j}) = om(i, j);
                          return f;
                        }};
  FormField eta_field{d, 1,
                      [&](const Vec& x) { return Form::covector(base.eta(x)); }};

  std::vector<int> counts(d, samples);
  GridSpec grid = GridSpec::over_chart(base.chart, counts);
  // on conformal charts, stay in the window where determinants are well away
  // from the singularity guard
  if (base.kind != BaseKind::S2Spherical) {
    for (int k = 0; k < d; ++k) {
      grid.lo[k] = std::max(grid.lo[k], -2.0);
      grid.hi[k] = std::min(grid.hi[k], 2.0);
    }
  }
  for (long i = 0; i < grid.total(); ++i) {
    const Vec x = grid.point(i);
    const Mat g = base.g(x);
    const Mat Jm = base.J(x);
    rep.J_squared = std::max(rep.J_squared, max_abs(Jm * Jm + Mat::Identity(d, d)));
    rep.compat = std::max(rep.compat, max_abs(base.omega(x) - g * Jm));

    const TensorResult tr = curvature_coordinate(mf, x, an);
    rep.einstein =
        std::max(rep.einstein, max_abs(tr.ricci - base.lambda0 * g));

    // nabla J in coordinates
    const ConnectionCoeffs G = base.christoffel(x);
    for (int k = 0; k < d; ++k) {
      const Mat dJk = base.dJ(x, k);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double v = dJk(i, j);
          for (int m = 0; m < d; ++m)
            v += G.at(i, k, m) * Jm(m, j) - G.at(m, k, j) * Jm(i, m);
          rep.nabla_J = std::max(rep.nabla_J, std::abs(v));
        }
    }

    if (base.chart.contains(x, 2.0 * fd.h1)) {
      rep.d_omega = std::max(
          rep.d_omega, exterior_derivative(omega_field, x, fd).max_abs());
      Form de = exterior_derivative(eta_field, x, fd);
      const Mat om = base.omega(x);
      double diff = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          diff = std::max(diff, std::abs(de.at({i, j}) - om(i, j)));
      rep.deta_minus_omega = std::max(rep.deta_minus_omega, diff);
    }
  }
  return rep;
}

Vec base_eta(const KahlerBase& base, const Vec& p) {
  base.chart.require_inside(p);
  return base.eta(p);
}

}  // namespace sheargeo
