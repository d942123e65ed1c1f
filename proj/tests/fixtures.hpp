// Shared test fixtures: the canonical family instances used across suites.
#pragma once

#include "sheargeo/einstein.hpp"

namespace fixtures {

using namespace sheargeo;

// n=4, S^2 base, lambda0=1, Lambda=0, C=1/4, B=0: the canonical instance
// with sigma = t^2/4 + 1/4 and beta~ = -(t^2-1)/(t^2+1).
struct Canon4 {
  KahlerBase base = make_base(BaseKind::S2Spherical, 1.0);
  SasakiChart S = build_sasaki(base);
  EinsteinParams par{4, 0.0, 1.0, 0.0, 0.25};
  FirmProfile prof = einstein_profile(par);
  MetricField g = build_lorentz_firm(S, prof);
};

inline VectorField coordinate_field(int dim, int idx) {
  return VectorField{[dim, idx](const Vec&) {
                       Vec v = Vec::Zero(dim);
                       v[idx] = 1.0;
                       return v;
                     },
                     [dim](const Vec&) { return Mat(Mat::Zero(dim, dim)); }};
}

inline Vec pt4(double t, double u, double psi, double phi) {
  Vec p(4);
  p << t, u, psi, phi;
  return p;
}

}  // namespace fixtures
