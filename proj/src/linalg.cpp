#include "dmdkit/linalg.hpp"

#include "dmdkit/error.hpp"

#include <limits>

namespace dmdkit {

Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& m, double rcond) {
  if (m.size() == 0) throw ValidationError("pseudoinverse of an empty matrix");
  if (!(rcond >= 0.0)) throw ValidationError("rcond must be non-negative");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cutoff = rcond * s(0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double condition_number(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0.0;
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

}  // namespace dmdkit
