#pragma once

#include <functional>
#include <type_traits>

#include "sheargeo/chart.hpp"

namespace sheargeo {

// Differentiation scheme selector. Central differences are 4th order;
// h1 is the step for first derivatives, h2 for outer derivatives in
// curvature-type (second derivative) computations.
struct DiffScheme {
  enum class Kind { Analytic, Central };
  Kind kind = Kind::Central;
  double h1 = 1e-5;
  double h2 = 1e-3;

  static DiffScheme analytic() { return {Kind::Analytic, 1e-5, 1e-3}; }
  static DiffScheme central(double h1 = 1e-5, double h2 = 1e-3) {
    return {Kind::Central, h1, h2};
  }
};

// 4th-order central difference of f along coordinate `k` at p with step h.
// The result is materialized (no dangling expression templates).
template <class F>
auto central_diff(const F& f, const Vec& p, int k, double h) {
  Vec q1 = p, q2 = p, q3 = p, q4 = p;
  q1[k] -= 2 * h;
  q2[k] -= h;
  q3[k] += h;
  q4[k] += 2 * h;
  using R = std::decay_t<decltype(f(p))>;
  R r = f(q1);
  r = (r - 8.0 * f(q2) + 8.0 * f(q3) - f(q4)) * (1.0 / (12.0 * h));
  return r;
}

// 4th-order second derivative along a single coordinate.
template <class F>
auto central_diff2(const F& f, const Vec& p, int k, double h) {
  Vec q1 = p, q2 = p, q3 = p, q4 = p;
  q1[k] -= 2 * h;
  q2[k] -= h;
  q3[k] += h;
  q4[k] += 2 * h;
  using R = std::decay_t<decltype(f(p))>;
  R r = f(q1);
  r = (-r + 16.0 * f(q2) - 30.0 * f(p) + 16.0 * f(q3) - f(q4)) *
      (1.0 / (12.0 * h * h));
  return r;
}

}  // namespace sheargeo
