#pragma once

#include <Eigen/Dense>

#include "sheargeo/chart.hpp"

namespace sheargeo {

// Tolerances used across the library (stated once, reused everywhere).
namespace tol {
inline constexpr double exact = 1e-12;       // exact linear algebra
inline constexpr double first_deriv = 1e-8;  // first-derivative checks
inline constexpr double curvature = 1e-5;    // second-derivative / curvature checks
}  // namespace tol

// Inverse of a nondegenerate symmetric matrix. Throws SingularMetric when
// |det| <= 1e-12. Result is symmetrized to kill roundoff drift.
Mat invert_metric(const Mat& g);

// Inverse positive square root of a symmetric positive definite matrix,
// via eigendecomposition: R = S^{-1/2}, so R*R*S = I. Throws NotSPD when an
// eigenvalue <= 1e-12 or the input is not symmetric to 1e-12.
Mat spd_inverse_sqrt(const Mat& S);

// Positive square root of an SPD matrix (same checks as spd_inverse_sqrt).
Mat spd_sqrt(const Mat& S);

double max_abs(const Mat& m);

// Signature (num_negative, num_positive) of a symmetric matrix.
std::pair<int, int> signature_of(const Mat& g);

}  // namespace sheargeo
