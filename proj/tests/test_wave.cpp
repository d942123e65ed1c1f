#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "sheargeo/structures.hpp"
#include "sheargeo/wave.hpp"

using namespace sheargeo;
using fixtures::pt4;

namespace {

struct TorusWave {
  KahlerBase base = make_base(BaseKind::Torus, 0.0);
  SasakiChart S = build_sasaki(base);
  FirmProfile prof = FirmProfile::constant(1.0, 0.0);
  MetricField g = build_lorentz_firm(S, prof);
  WaveForm w = build_wave(S, g);
};

struct StereoWave {
  KahlerBase base = make_base(BaseKind::S2Stereographic, 1.0);
  SasakiChart S = build_sasaki(base);
  EinsteinParams par{4, 0.0, 1.0, 0.0, 0.25};
  FirmProfile prof = einstein_profile(par);
  MetricField g = build_lorentz_firm(S, prof);
  WaveForm w = build_wave(S, g);
};

GridSpec wave_grid(const MetricField& g, int per_axis) {
  std::vector<int> counts(g.chart.dim, per_axis);
  counts[1] = 1;
  GridSpec grid = GridSpec::over_chart(g.chart, counts);
  grid.lo[0] = 0.5;
  grid.hi[0] = 2.0;
  grid.lo[1] = grid.hi[1] = 0.2;
  for (int k = 2; k < g.chart.dim; ++k) {
    grid.lo[k] = -1.3;
    grid.hi[k] = 1.3;
  }
  return grid;
}

}  // namespace

TEST_CASE("torus wave components: F = Re((du + x dy) ^ (dx + i dy))") {
  TorusWave fx;
  const double x = 0.8;
  const Form F = fx.w.re(pt4(1.0, 0.2, x, -0.4));
  CHECK(F.at({1, 2}) == doctest::Approx(1.0));   // du ^ dx
  CHECK(F.at({2, 3}) == doctest::Approx(-x));    // x dy ^ dx
  CHECK(F.at({0, 2}) == 0.0);
  CHECK(F.at({1, 3}) == 0.0);
  const Form Fim = fx.w.im(pt4(1.0, 0.2, x, -0.4));
  CHECK(Fim.at({1, 3}) == doctest::Approx(1.0));  // du ^ dy
}

TEST_CASE("stereographic wave reduces to du ^ dx at the origin") {
  StereoWave fx;
  const Form F = fx.w.re(pt4(1.3, 0.1, 0.0, 0.0));
  CHECK(F.at({1, 2}) == doctest::Approx(1.0));
  CHECK(std::abs(F.at({2, 3})) < 1e-14);
}

TEST_CASE("6D wave has theta as a wedge factor and is nonzero") {
  const KahlerBase base = make_base(BaseKind::ProductS2S2, 1.0);
  const SasakiChart S = build_sasaki(base);
  const MetricField g =
      build_lorentz_firm(S, einstein_profile({6, 0.0, 1.0, 0.0, 0.5}));
  const WaveForm w = build_wave(S, g);
  Vec p(6);
  p << 1.1, 0.2, 0.3, -0.4, 0.5, 0.6;
  const Form F = w.re(p);
  CHECK(F.deg() == 3);
  CHECK(F.max_abs() > 0.1);
  CHECK(wedge(w.theta(p), F).max_abs() < 1e-14);
  Vec po = Vec::Zero(6);
  po[0] = 1.0;
  CHECK(contract(po, F).max_abs() < 1e-14);
}

TEST_CASE("spherical-coordinate charts carry no holomorphic wave") {
  const KahlerBase base = make_base(BaseKind::S2Spherical, 1.0);
  const SasakiChart S = build_sasaki(base);
  const MetricField g =
      build_lorentz_firm(S, einstein_profile({4, 0.0, 1.0, 0.0, 0.25}));
  CHECK_THROWS_AS(build_wave(S, g), NoHolomorphicChart);
}

TEST_CASE("harmonicity on the flat torus background is exact") {
  TorusWave fx;
  const HarmonicityReport rep =
      harmonicity_check(fx.w, wave_grid(fx.g, 4), DiffScheme::central());
  CHECK(rep.max_dF < 1e-10);
  CHECK(rep.max_dstarF < 1e-10);
  CHECK(rep.eigen_residual < 1e-8);
}

TEST_CASE("harmonicity on the curved family background") {
  StereoWave fx;
  const HarmonicityReport rep =
      harmonicity_check(fx.w, wave_grid(fx.g, 5), DiffScheme::central());
  CHECK(rep.max_dF < 1e-6);
  CHECK(rep.max_dstarF < 1e-6);
  CHECK(rep.eigen_residual < 1e-8);
  CHECK((rep.eigen_sign == 1 || rep.eigen_sign == -1));
}

TEST_CASE("a broken wave fails coclosure visibly") {
  StereoWave fx;
  WaveForm broken = fx.w;
  const FormField re0 = fx.w.re;
  broken.re = FormField{4, 2, [re0](const Vec& p) {
                          Form F = re0(p);
                          Form noise(4, 2);
                          noise.at({1, 2}) = 1e-2 * (1.0 + 0.3 * p[2]);
                          noise.antisymmetrize();
                          return F + noise;
                        }};
  const HarmonicityReport rep =
      harmonicity_check(broken, wave_grid(fx.g, 4), DiffScheme::central());
  CHECK(rep.max_dstarF > 1e-3);
}

TEST_CASE("double star of the middle form is -F") {
  StereoWave fx;
  const Vec p = pt4(1.2, 0.0, 0.4, -0.6);
  const Form F = fx.w.re(p);
  const Mat g = fx.g.comp(p);
  const Form ss = hodge_star(hodge_star(F, g), g);
  CHECK((ss + F).max_abs() < 1e-12);
}

TEST_CASE("flag structure: joint kernel is the fiber line") {
  for (int which : {0, 1}) {
    FlagLieReport rep;
    if (which == 0) {
      TorusWave fx;
      rep = flag_and_lie_check(fx.w, pt4(1.0, 0.2, 0.4, -0.3),
                               DiffScheme::central());
      CHECK(std::abs(rep.f_fit) < 1e-10);
    } else {
      StereoWave fx;
      const Vec p = pt4(1.0, 0.2, 0.4, -0.3);
      rep = flag_and_lie_check(fx.w, p, DiffScheme::central());
      // cross-module consistency: the fitted f equals -lambda of the
      // geodesic factor (both vanish on the family metrics)
      const auto gf = geodesic_factor(fx.g, fixtures::coordinate_field(4, 0),
                                      p, DiffScheme::central());
      CHECK(std::abs(rep.f_fit + gf.lambda) < 1e-8);
      CHECK(std::abs(rep.f_fit) < 1e-8);
    }
    CHECK(rep.kernel_dim == 1);
    CHECK(rep.sv_gap > 1e6);
    CHECK(rep.kernel_alignment == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.lie_F < 1e-7);
    CHECK(rep.lie_starF < 1e-7);
    CHECK(rep.f_fit_residual < 1e-8);
  }
}

TEST_CASE("a kernel-free form raises KernelDimensionMismatch") {
  StereoWave fx;
  WaveForm broken = fx.w;
  broken.re = FormField{4, 2, [](const Vec&) {
                          Form F(4, 2);
                          F.at({0, 1}) = 1.0;  // dt ^ du
                          F.at({2, 3}) = 1.0;  // dx ^ dy
                          F.antisymmetrize();
                          return F;
                        }};
  CHECK_THROWS_AS(flag_and_lie_check(broken, pt4(1.0, 0.2, 0.4, -0.3),
                                     DiffScheme::central()),
                  KernelDimensionMismatch);
}
