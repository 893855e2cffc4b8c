#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace proxyzoo {

/// Coordinates of a skew-symmetric matrix: the strictly lower-triangular
/// entries of S in row-major order, (1,0), (2,0), (2,1), (3,0), ...
struct SkewParams {
  int n = 0;
  Eigen::VectorXd theta;

  static SkewParams zero(int n);
  static int size_for(int n) { return n * (n - 1) / 2; }
};

/// S = lower - lower'.
Eigen::MatrixXd skew_matrix(const SkewParams& params);

/// Reads the strictly lower triangle of a (nearly) skew matrix.
SkewParams skew_params(const Eigen::MatrixXd& skew);

/// A point on SO(n) with its skew coordinates.
struct RotationPoint {
  SkewParams params;
  Eigen::MatrixXd matrix;
};

/// O = exp(S) via Pade scaling-and-squaring.
RotationPoint exp_skew(const SkewParams& params);

/// Principal logarithm of a rotation. Throws NumericalError("logarithm branch
/// cut") when O has an eigenvalue at -1 (rotation angle pi), and
/// ValidationError when det(O) is not +1.
SkewParams log_rotation(const Eigen::MatrixXd& rotation);

/// Haar-distributed draw on SO(n): QR of a Gaussian matrix with the R
/// diagonal made positive, last column flipped when the determinant is -1.
RotationPoint random_rotation(int n, std::mt19937_64& rng);
RotationPoint random_rotation(int n, std::uint64_t seed);

/// Gradient of theta -> <G, exp(S(theta))>_F, computed through the Frechet
/// derivative of the exponential (block-triangular exponential).
Eigen::VectorXd exp_skew_gradient(const SkewParams& params, const Eigen::MatrixXd& weight);

/// Nearest orthogonal matrix (polar factor); keeps the determinant sign.
Eigen::MatrixXd reorthonormalize(const Eigen::MatrixXd& nearly_orthogonal);

/// Orthogonal matrix whose first column is `direction` (normalized).
Eigen::MatrixXd complete_basis(const Eigen::VectorXd& direction);

/// diag(1, ..., 1, -1): maps SO(n) onto the reflection sheet of O(n).
Eigen::MatrixXd last_column_flip(int n);

}  // namespace proxyzoo
