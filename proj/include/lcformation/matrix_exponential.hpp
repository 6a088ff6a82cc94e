#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace lcf {

/// exp(A) by scaling and squaring around a diagonal [6/6] Pade approximant.
///
/// A is scaled by 2^-j so that ||A/2^j||_inf <= 1/2, where the truncation error of the
/// degree-6 approximant is below double precision; the result is squared j times.
/// Used as an independent oracle for the RK4 integration of linear systems.
inline Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd &A) {
  const auto n = A.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, A.cols());
  const double anorm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (anorm > 0.0) squarings = std::max(0, 1 + static_cast<int>(std::floor(std::log2(anorm))));
  const Eigen::MatrixXd As = A / std::ldexp(1.0, squarings);

  constexpr int q = 6;
  double c = 0.5;
  Eigen::MatrixXd X = As;
  Eigen::MatrixXd num = I + c * As;
  Eigen::MatrixXd den = I - c * As;
  bool positive = true;
  for (int k = 2; k <= q; ++k) {
    c = c * (q - k + 1) / (k * (2.0 * q - k + 1));
    X = As * X;
    num += c * X;
    if (positive) {
      den += c * X;
    } else {
      den -= c * X;
    }
    positive = !positive;
  }
  Eigen::MatrixXd F = den.partialPivLu().solve(num);
  for (int k = 0; k < squarings; ++k) F = F * F;
  return F;
}

}  // namespace lcf
