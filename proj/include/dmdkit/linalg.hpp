#pragma once

#include <Eigen/Dense>

namespace dmdkit {

/// Moore-Penrose pseudoinverse. Singular values at or below rcond * sigma_max
/// are treated as zero.
Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& m, double rcond = 1e-12);

/// 2-norm condition number sigma_max / sigma_min (infinity when singular).
double condition_number(const Eigen::MatrixXcd& m);

}  // namespace dmdkit
