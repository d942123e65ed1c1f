#include "sheargeo/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

#include "sheargeo/errors.hpp"

namespace sheargeo {

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

Mat invert_metric(const Mat& g) {
  const double det = g.determinant();
  if (std::abs(det) <= 1e-12) {
    std::ostringstream os;
    os << "|det g| = " << std::abs(det) << " <= 1e-12";
    throw SingularMetric(os.str());
  }
  Mat inv = g.inverse();
  return 0.5 * (inv + inv.transpose());
}

static Eigen::SelfAdjointEigenSolver<Mat> spd_eigen(const Mat& S) {
  if (S.rows() != S.cols() || max_abs(S - S.transpose()) > 1e-12)
    throw NotSPD("matrix not symmetric to 1e-12");
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  if (es.eigenvalues().minCoeff() <= 1e-12)
    throw NotSPD("eigenvalue <= 1e-12");
  return es;
}

Mat spd_inverse_sqrt(const Mat& S) {
  auto es = spd_eigen(S);
  Vec d = es.eigenvalues().array().rsqrt();
  Mat r = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (r + r.transpose());
}

Mat spd_sqrt(const Mat& S) {
  auto es = spd_eigen(S);
  Vec d = es.eigenvalues().array().sqrt();
  Mat r = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (r + r.transpose());
}

std::pair<int, int> signature_of(const Mat& g) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.transpose()));
  int neg = 0, pos = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] < -1e-12)
      ++neg;
    else if (es.eigenvalues()[i] > 1e-12)
      ++pos;
  }
  return {neg, pos};
}

}  // namespace sheargeo
