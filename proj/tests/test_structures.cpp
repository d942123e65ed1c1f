#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "sheargeo/rng.hpp"
#include "sheargeo/bundle.hpp"
#include "sheargeo/structures.hpp"

using namespace sheargeo;
using fixtures::Canon4;
using fixtures::coordinate_field;
using fixtures::pt4;

TEST_CASE("twisting degree of the 4D bundle chart is 1") {
  Canon4 fx;
  const Vec p = pt4(1.2, 0.1, 1.3, 0.6);
  Vec th = Vec::Zero(4);
  th[1] = 1.0;
  th[3] = std::cos(p[2]);
  Form theta = Form::covector(th);
  Form dth(4, 2);
  const Mat om = fx.base.omega(p.tail(2));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) dth.at({2 + a, 2 + b}) = om(a, b);
  std::vector<Vec> wb;
  Vec e0 = Vec::Zero(4);
  e0[0] = 1.0;
  wb.push_back(e0);
  for (int a = 0; a < 2; ++a) {
    Vec e = Vec::Zero(4);
    e[2 + a] = 1.0;
    e[1] = -fx.base.eta(p.tail(2))[a];
    wb.push_back(e);
  }
  CHECK(twisting_degree(theta, dth, wb) == 1);
}

TEST_CASE("twisting degree with d(theta) = 0 is the full W dimension") {
  Vec th = Vec::Zero(4);
  th[2] = 1.0;  // theta = dx on flat R^4
  Form theta = Form::covector(th);
  Form dth(4, 2);  // zero
  std::vector<Vec> wb;
  for (int k : {0, 1, 3}) {
    Vec e = Vec::Zero(4);
    e[k] = 1.0;
    wb.push_back(e);
  }
  CHECK(twisting_degree(theta, dth, wb) == 3);
}

TEST_CASE("twisting degree of the 6D product chart is 1") {
  const KahlerBase base = make_base(BaseKind::ProductS2S2, 1.0);
  const SasakiChart S = build_sasaki(base);
  const FirmProfile prof = einstein_profile({6, 0.0, 1.0, 0.0, 0.5});
  Vec p(6);
  p << 1.0, 0.2, 0.4, -0.3, 0.2, 0.5;
  const SubconformalData data = subconformal_at(S, prof, p);
  data.validate();
  CHECK(twisting_degree(data) == 1);
  // the brute-force kernel of the restricted skew matrix confirms the count
  Mat skew(5, 5);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      skew(a, b) = form_inner_pair(data.dtheta, data.basis[a], data.basis[b]);
  Eigen::FullPivLU<Mat> lu(skew);
  lu.setThreshold(1e-9);
  CHECK(lu.dimensionOfKernel() == 1);
}

TEST_CASE("twisting degree rejects bad bases") {
  Vec th = Vec::Zero(3);
  th[0] = 1.0;
  Form dth(3, 2);
  std::vector<Vec> bad{Vec::Zero(3)};
  bad[0][0] = 1.0;  // not in ker theta
  CHECK_THROWS_AS(twisting_degree(Form::covector(th), dth, bad),
                  RankDeficientBasis);
}

TEST_CASE("cr_from_subriemannian canonical pair") {
  Mat h = Mat::Identity(2, 2);
  Mat om(2, 2);
  om << 0, 1, -1, 0;
  const CRData cr = cr_from_subriemannian(h, om);
  CHECK(max_abs(cr.B - Mat::Identity(2, 2)) < 1e-12);
  CHECK(max_abs(cr.levi - Mat::Identity(2, 2)) < 1e-12);
  CHECK(max_abs(cr.J * cr.J + Mat::Identity(2, 2)) < 1e-12);
}

TEST_CASE("cr_from_subriemannian hand-computed 2x2 example") {
  Mat h = Mat::Zero(2, 2);
  h.diagonal() << 4.0, 1.0;
  Mat om(2, 2);
  om << 0, 1, -1, 0;
  const CRData cr = cr_from_subriemannian(h, om);
  CHECK(max_abs(cr.B - 2.0 * Mat::Identity(2, 2)) < 1e-12);
  Mat Jexp(2, 2);
  Jexp << 0, -0.5, 2, 0;
  CHECK(max_abs(cr.J - Jexp) < 1e-12);
  Mat lexp = Mat::Zero(2, 2);
  lexp.diagonal() << 2.0, 0.5;
  CHECK(max_abs(cr.levi - lexp) < 1e-12);
  CHECK(max_abs(cr.levi * cr.B - h) < 1e-12);
}

TEST_CASE("cr roundtrip and scale equivariance on random pairs") {
  SplitMix64 rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 * (1 + static_cast<int>(rng.next() % 3));
    Mat A(d, d), W(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        A(i, j) = rng.uniform(-1, 1);
        W(i, j) = rng.uniform(-1, 1);
      }
    const Mat h = A * A.transpose() + 0.4 * Mat::Identity(d, d);
    const Mat om = W - W.transpose();
    if (std::abs(om.determinant()) < 1e-6) continue;
    const CRData cr = cr_from_subriemannian(h, om);
    CHECK(max_abs(cr.J * cr.J + Mat::Identity(d, d)) < 1e-10);
    CHECK(max_abs(cr.levi * cr.B - h) < 1e-10);
    CHECK(max_abs(cr.levi - cr.levi.transpose()) < 1e-10);
    Eigen::SelfAdjointEigenSolver<Mat> es(cr.levi);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    for (double s : {0.1, 1.0, 10.0}) {
      const CRData cs = cr_from_subriemannian(Mat(s * h), om);
      CHECK(max_abs(cs.J - cr.J) < 1e-10);
    }
  }
}

TEST_CASE("cr_from_subriemannian error paths") {
  Mat h = Mat::Identity(2, 2);
  CHECK_THROWS_AS(cr_from_subriemannian(h, Mat::Zero(2, 2)), DegenerateOmega);
  Mat om(2, 2);
  om << 0, 1, -1, 0;
  Mat hneg = Mat::Identity(2, 2);
  hneg(1, 1) = -1.0;
  CHECK_THROWS_AS(cr_from_subriemannian(hneg, om), NotSPD);
}

namespace {

// lifted frame fields E^_i = d_{x_i} - eta_i d_u on the Sasaki chart (u, x),
// together with the lifted J extended by zero on the Reeb direction
struct LiftedCR {
  KahlerBase base;
  int nb;
  VectorField lift(int i) const {
    const KahlerBase* b = &base;
    const int n = nb;
    return VectorField{[b, n, i](const Vec& q) {
                         Vec v = Vec::Zero(n + 1);
                         v[1 + i] = 1.0;
                         v[0] = -b->eta(q.tail(n))[i];
                         return v;
                       },
                       {}};
  }
  std::function<Mat(const Vec&)> Jlift(double eps, unsigned noise_seed) const {
    const KahlerBase* b = &base;
    const int n = nb;
    return [b, n, eps, noise_seed](const Vec& q) {
      const Vec x = q.tail(n);
      Mat Jb = b->J(x);
      if (eps != 0.0) {
        // conjugate by a position-dependent perturbation; (T J T^-1)^2 = -I
        // exactly, but integrability is destroyed when T varies
        SplitMix64 rng(noise_seed);
        Mat N(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            N(i, j) = rng.uniform(-1, 1) * std::sin(1.0 + x[i % n] + 2 * x[j % n]);
        const Mat T = Mat::Identity(n, n) + eps * N;
        Jb = T * Jb * T.inverse();
      }
      Mat out = Mat::Zero(n + 1, n + 1);
      // E^ components: the endomorphism acts on coordinate components of
      // vectors tangent to D = span(E^_i); extended by zero on d_u
      const Vec eta = b->eta(x);
      // matrix mapping coordinate components: J(E^_j) = Jb^i_j E^_i
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(1 + i, 1 + j) = Jb(i, j);
      for (int j = 0; j < n; ++j) {
        double v = 0.0;
        for (int i = 0; i < n; ++i) v += -eta[i] * Jb(i, j);
        out(0, 1 + j) = v;  // u-component of J(E^_j)
        // compensate the u-component of the input: J(d_u) = 0 and
        // J(d_{x_j}) = J(E^_j + eta_j d_u) = J(E^_j)
      }
      return out;
    };
  }
};

}  // namespace

TEST_CASE("nijenhuis tensor vanishes for every integrable base lift") {
  struct Row {
    BaseKind kind;
    double lambda0;
  };
  for (const Row& row : {Row{BaseKind::S2Stereographic, 1.0},
                         Row{BaseKind::Torus, 0.0},
                         Row{BaseKind::HyperbolicDisk, -1.0},
                         Row{BaseKind::ProductS2S2, 1.0}}) {
    CAPTURE(to_string(row.kind));
    const KahlerBase base = make_base(row.kind, row.lambda0);
    const int nb = base.dim();
    LiftedCR L{base, nb};
    const auto J = L.Jlift(0.0, 0);
    Vec p(nb + 1);
    p[0] = 0.1;
    for (int k = 0; k < nb; ++k) p[1 + k] = 0.25 - 0.1 * k;
    double worst = 0.0;
    for (int i = 0; i < nb; ++i)
      for (int j = i + 1; j < nb; ++j) {
        const Vec N =
            nijenhuis_tensor(J, L.lift(i), L.lift(j), p, DiffScheme::central());
        worst = std::max(worst, N.cwiseAbs().maxCoeff());
      }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("nijenhuis tensor is antisymmetric and vanishes on X = Y") {
  LiftedCR L{make_base(BaseKind::ProductS2S2, 1.0), 4};
  const auto J = L.Jlift(0.0, 0);
  Vec p(5);
  p << 0.0, 0.2, 0.1, -0.3, 0.15;
  const Vec Nxx =
      nijenhuis_tensor(J, L.lift(1), L.lift(1), p, DiffScheme::central());
  CHECK(Nxx.cwiseAbs().maxCoeff() < 1e-9);
  const Vec Nxy =
      nijenhuis_tensor(J, L.lift(0), L.lift(2), p, DiffScheme::central());
  const Vec Nyx =
      nijenhuis_tensor(J, L.lift(2), L.lift(0), p, DiffScheme::central());
  CHECK((Nxy + Nyx).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("perturbed J is detected by the nijenhuis tensor") {
  LiftedCR L{make_base(BaseKind::ProductS2S2, 1.0), 4};
  const auto J = L.Jlift(1e-2, 99);
  Vec p(5);
  p << 0.1, 0.3, -0.2, 0.25, 0.4;
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const Vec N =
          nijenhuis_tensor(J, L.lift(i), L.lift(j), p, DiffScheme::central());
      worst = std::max(worst, N.cwiseAbs().maxCoeff());
    }
  CHECK(worst > 1e-3);
}

TEST_CASE("reeb field of the sphere contact form is the fiber direction") {
  // chart (u, psi, phi), theta = du + cos(psi) dphi
  const double psi = 1.2;
  Vec th(3);
  th << 1.0, 0.0, std::cos(psi);
  Form dth(3, 2);
  dth.at({1, 2}) = -std::sin(psi);
  dth.at({2, 1}) = std::sin(psi);
  const Vec Z = reeb_field(Form::covector(th), dth);
  Vec expect = Vec::Zero(3);
  expect[0] = 1.0;
  CHECK((Z - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("reeb field of du + x dy on R^3") {
  Vec th(3);
  th << 1.0, 0.0, 0.4;  // at x = 0.4
  Form dth(3, 2);
  dth.at({1, 2}) = 1.0;
  dth.at({2, 1}) = -1.0;
  const Vec Z = reeb_field(Form::covector(th), dth);
  CHECK(std::abs(Z[0] - 1.0) < 1e-12);
  CHECK(std::abs(Z[1]) < 1e-12);
  CHECK(std::abs(Z[2]) < 1e-12);
}

TEST_CASE("degenerate d(theta) raises NotContact") {
  Vec th = Vec::Zero(3);
  th[0] = 1.0;
  Form dth(3, 2);
  CHECK_THROWS_AS(reeb_field(Form::covector(th), dth), NotContact);
}

TEST_CASE("shearfree decomposition: constant profiles give f = 0, eta = 0") {
  Canon4 fx;
  const MetricField gc = build_lorentz_firm(fx.S, FirmProfile::constant(1.0, 0.4));
  const auto dec = shearfree_decompose(gc, coordinate_field(4, 0),
                                       pt4(1.0, 0.1, 1.2, 0.5),
                                       DiffScheme::central());
  CHECK(std::abs(dec.f) < 1e-10);
  CHECK(dec.eta.cwiseAbs().maxCoeff() < 1e-10);
  CHECK(dec.residual < 1e-10);
}

TEST_CASE("shearfree decomposition on the canonical instance at t = 1") {
  Canon4 fx;
  const auto dec = shearfree_decompose(fx.g, coordinate_field(4, 0),
                                       pt4(1.0, 0.2, 1.1, 0.7),
                                       DiffScheme::central());
  // sigma = t^2/4 + 1/4: f = sigma'(1)/sigma(1) = 1
  CHECK(dec.f == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(dec.residual < 1e-8);
}

TEST_CASE("spacelike direction raises NotNull") {
  Canon4 fx;
  CHECK_THROWS_AS(shearfree_decompose(fx.g, coordinate_field(4, 2),
                                      pt4(1.0, 0.2, 1.1, 0.7),
                                      DiffScheme::central()),
                  NotNull);
}

TEST_CASE("geodesic factor vanishes for the fiber direction") {
  Canon4 fx;
  for (const Vec& p : {pt4(1.0, 0.2, 1.1, 0.7), pt4(1.7, -0.4, 2.1, -0.9)}) {
    const auto gf =
        geodesic_factor(fx.g, coordinate_field(4, 0), p, DiffScheme::central());
    CHECK(std::abs(gf.lambda) < 1e-8);
    CHECK(gf.residual < 1e-7);
  }
}

TEST_CASE("geodesic factor is constant across the base at fixed t") {
  Canon4 fx;
  SplitMix64 rng(55);
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < 20; ++i) {
    const Vec p = pt4(1.4, rng.uniform(-1, 1), rng.uniform(0.4, 2.7),
                      rng.uniform(-2, 2));
    const auto gf =
        geodesic_factor(fx.g, coordinate_field(4, 0), p, DiffScheme::central());
    lo = std::min(lo, gf.lambda);
    hi = std::max(hi, gf.lambda);
  }
  CHECK(hi - lo < 1e-8);
}

TEST_CASE("standardize_pair fixed point and constant-coefficient cases") {
  const auto id = standardize_pair([](double) { return 0.0; },
                                   [](double) { return 0.0; }, 0.2, 3.0);
  CHECK(std::abs(id.sigma_at(2.0) - 1.0) < 1e-12);
  CHECK(std::abs(id.tau_at(0.4) - 1.0) < 1e-12);

  const auto exp_case = standardize_pair([](double) { return 1.0; },
                                         [](double) { return 0.0; }, 0.2, 3.0);
  for (double t : {0.25, 1.0, 2.5})
    CHECK(exp_case.sigma_at(t) ==
          doctest::Approx(std::exp(-(t - 1.0))).epsilon(1e-7));
  CHECK(std::abs(exp_case.tau_at(2.0) - 1.0) < 1e-10);
}

TEST_CASE("standardize_pair reproduces the closed form along the fiber") {
  Canon4 fx;
  const SigmaProfile sg = sigma_profile(0.25);
  auto f_fiber = [&](double t) { return sg.d(t) / sg(t); };
  auto etap_fiber = [&](double t) { return -2.0 * sg.d(t) / sg(t); };
  const auto rs = standardize_pair(f_fiber, etap_fiber, 0.2, 3.0);
  for (double t : {0.25, 0.8, 1.5, 2.9}) {
    CHECK(rs.sigma_at(t) == doctest::Approx(sg(1.0) / sg(t)).epsilon(1e-6));
    CHECK(rs.tau_at(t) == doctest::Approx(sg(t) / sg(1.0)).epsilon(1e-6));
  }

  // the rescaled pair is standard and distinguished: rebuild with the closed
  // forms (smooth in t) and check f~ = 0 and lambda~ = 0
  const KahlerBase base = fx.base;
  const FirmProfile prof = fx.prof;
  MetricField gres = fx.g;
  const MetricField g0 = fx.g;
  gres.comp = [g0, sg](const Vec& p) {
    return Mat((sg(1.0) / sg(p[0])) * g0.comp(p));
  };
  gres.d1 = {};
  gres.d2 = {};
  VectorField ptau{[sg](const Vec& p) {
                     Vec v = Vec::Zero(4);
                     v[0] = sg(p[0]) / sg(1.0);
                     return v;
                   },
                   {}};
  const auto dec = shearfree_decompose(gres, ptau, pt4(1.4, 0.1, 1.2, 0.6),
                                       DiffScheme::central());
  CHECK(std::abs(dec.f) < 1e-6);
  const auto gf =
      geodesic_factor(gres, ptau, pt4(1.4, 0.1, 1.2, 0.6), DiffScheme::central());
  CHECK(std::abs(gf.lambda) < 1e-6);
  CHECK(gf.residual < 1e-6);
}
