#include <cmath>

#include "doctest.h"
#include "sheargeo/kahler.hpp"
#include "sheargeo/metric.hpp"

using namespace sheargeo;

TEST_CASE("catalog invariants hold for every base kind") {
  struct Row {
    BaseKind kind;
    double lambda0;
    double einstein_tol;
  };
  for (const Row& row : {Row{BaseKind::S2Spherical, 1.0, 1e-6},
                         Row{BaseKind::S2Spherical, 2.0, 1e-6},
                         Row{BaseKind::S2Stereographic, 1.0, 1e-6},
                         Row{BaseKind::Torus, 0.0, 1e-12},
                         Row{BaseKind::HyperbolicDisk, -1.0, 1e-6},
                         Row{BaseKind::ProductS2S2, 1.0, 1e-6}}) {
    CAPTURE(to_string(row.kind));
    const KahlerBase b = make_base(row.kind, row.lambda0);
    const int samples = b.dim() == 2 ? 12 : 4;
    const BaseReport rep = verify_kahler_einstein(b, samples);
    CHECK(rep.J_squared < 1e-12);
    CHECK(rep.compat < 1e-12);
    CHECK(rep.einstein < row.einstein_tol);
    CHECK(rep.nabla_J < 1e-6);
    CHECK(rep.d_omega < 1e-6);
    CHECK(rep.deta_minus_omega < 1e-8);
  }
}

TEST_CASE("spherical chart values at the equator") {
  const KahlerBase b = make_base(BaseKind::S2Spherical, 1.0);
  Vec p(2);
  p << M_PI / 2, 0.3;
  CHECK(max_abs(b.g(p) - Mat::Identity(2, 2)) < 1e-14);
  CHECK(base_eta(b, p).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("flat torus chart") {
  const KahlerBase b = make_base(BaseKind::Torus, 0.0);
  Vec p(2);
  p << 0.7, -0.4;
  CHECK(max_abs(b.g(p) - Mat::Identity(2, 2)) < 1e-15);
  const Vec e = base_eta(b, p);
  CHECK(e[0] == 0.0);
  CHECK(e[1] == doctest::Approx(0.7));  // eta = x dy
  Vec origin = Vec::Zero(2);
  CHECK(base_eta(b, origin).cwiseAbs().maxCoeff() == 0.0);
  // omega constant over the chart
  CHECK(max_abs(b.omega(p) - b.omega(origin)) < 1e-15);
}

TEST_CASE("stereographic chart vanishing primitive at the origin") {
  const KahlerBase b = make_base(BaseKind::S2Stereographic, 1.0);
  Vec z0 = Vec::Zero(2);
  CHECK(base_eta(b, z0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(max_abs(b.g(z0) - 4.0 * Mat::Identity(2, 2)) < 1e-14);
}

TEST_CASE("product base is block diagonal and Einstein") {
  const KahlerBase b = make_base(BaseKind::ProductS2S2, 1.0);
  Vec p(4);
  p << 0.3, -0.2, 0.5, 0.1;
  const Mat g = b.g(p);
  CHECK(g.rows() == 4);
  CHECK(max_abs(g.topRightCorner(2, 2)) == 0.0);
  CHECK(max_abs(g.bottomLeftCorner(2, 2)) == 0.0);
  const auto tr = curvature_coordinate(b.metric_field(), p, DiffScheme::analytic());
  CHECK(max_abs(tr.ricci - b.lambda0 * g) < 1e-10);
}

TEST_CASE("curvature sign preconditions") {
  CHECK_THROWS_AS(make_base(BaseKind::S2Spherical, -1.0), BadCurvatureSign);
  CHECK_THROWS_AS(make_base(BaseKind::Torus, 1.0), BadCurvatureSign);
  CHECK_THROWS_AS(make_base(BaseKind::HyperbolicDisk, 1.0), BadCurvatureSign);
}

TEST_CASE("scalar curvature agrees across the two sphere charts") {
  const double lambda0 = 1.7;
  const KahlerBase sph = make_base(BaseKind::S2Spherical, lambda0);
  const KahlerBase ste = make_base(BaseKind::S2Stereographic, lambda0);
  for (double psi : {0.6, 1.3, 2.2}) {
    for (double phi : {-0.5, 1.1}) {
      Vec ps(2);
      ps << psi, phi;
      // stereographic projection z = tan(psi/2) e^{i phi}
      const double r = std::tan(psi / 2);
      Vec pz(2);
      pz << r * std::cos(phi), r * std::sin(phi);
      const double s1 =
          curvature_coordinate(sph.metric_field(), ps, DiffScheme::analytic())
              .scalar;
      const double s2 =
          curvature_coordinate(ste.metric_field(), pz, DiffScheme::analytic())
              .scalar;
      CHECK(s1 == doctest::Approx(2.0 * lambda0).epsilon(1e-6));
      CHECK(std::abs(s1 - s2) < 1e-6);
    }
  }
}

TEST_CASE("base_eta rejects points outside the chart") {
  const KahlerBase b = make_base(BaseKind::HyperbolicDisk, -1.0);
  Vec p(2);
  p << 0.9, 0.0;
  CHECK_THROWS_AS(base_eta(b, p), OutOfChart);
}
