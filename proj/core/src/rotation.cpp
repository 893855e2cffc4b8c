#include "proxyzoo/rotation.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "proxyzoo/error.hpp"

namespace proxyzoo {

SkewParams SkewParams::zero(int n) { return SkewParams{n, Eigen::VectorXd::Zero(size_for(n))}; }

Eigen::MatrixXd skew_matrix(const SkewParams& params) {
  const int n = params.n;
  if (params.theta.size() != SkewParams::size_for(n)) throw ValidationError("skew parameter size mismatch");
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  Eigen::Index k = 0;
  for (int a = 1; a < n; ++a) {
    for (int b = 0; b < a; ++b, ++k) {
      S(a, b) = params.theta(k);
      S(b, a) = -params.theta(k);
    }
  }
  return S;
}

SkewParams skew_params(const Eigen::MatrixXd& skew) {
  const int n = static_cast<int>(skew.rows());
  SkewParams p = SkewParams::zero(n);
  Eigen::Index k = 0;
  for (int a = 1; a < n; ++a) {
    for (int b = 0; b < a; ++b, ++k) p.theta(k) = 0.5 * (skew(a, b) - skew(b, a));
  }
  return p;
}

RotationPoint exp_skew(const SkewParams& params) {
  const Eigen::MatrixXd S = skew_matrix(params);
  return RotationPoint{params, S.exp()};
}

SkewParams log_rotation(const Eigen::MatrixXd& rotation) {
  const Eigen::Index n = rotation.rows();
  if (rotation.cols() != n) throw ValidationError("rotation must be square");
  if ((rotation.transpose() * rotation - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-8) {
    throw ValidationError("matrix is not orthogonal");
  }
  if (rotation.determinant() < 0) throw ValidationError("log_rotation requires det(O) = +1");

  // For a normal matrix the real Schur form is block diagonal with 1x1 blocks
  // (+1 or -1) and 2x2 rotation blocks.
  Eigen::RealSchur<Eigen::MatrixXd> schur(rotation);
  const Eigen::MatrixXd& T = schur.matrixT();
  const Eigen::MatrixXd& Q = schur.matrixU();
  Eigen::MatrixXd logT = Eigen::MatrixXd::Zero(n, n);
  constexpr double kBranchTol = 1e-10;
  for (Eigen::Index i = 0; i < n;) {
    if (i + 1 < n && T(i + 1, i) != 0.0) {
      const double c = 0.5 * (T(i, i) + T(i + 1, i + 1));
      const double s = 0.5 * (T(i + 1, i) - T(i, i + 1));
      const double angle = std::atan2(s, c);
      if (std::numbers::pi - std::abs(angle) < kBranchTol) throw NumericalError("logarithm branch cut");
      logT(i + 1, i) = angle;
      logT(i, i + 1) = -angle;
      i += 2;
    } else {
      if (T(i, i) < 0.0) throw NumericalError("logarithm branch cut");
      ++i;
    }
  }
  return skew_params(Q * logT * Q.transpose());
}

RotationPoint random_rotation(int n, std::mt19937_64& rng) {
  if (n < 2) throw ValidationError("random_rotation needs n >= 2");
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    Eigen::MatrixXd G(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) G(i, j) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (R(j, j) < 0) Q.col(j) = -Q.col(j);
    }
    if (Q.determinant() < 0) Q.col(n - 1) = -Q.col(n - 1);
    try {
      SkewParams params = log_rotation(Q);
      return RotationPoint{std::move(params), std::move(Q)};
    } catch (const NumericalError&) {
      // measure-zero event: angle exactly pi; draw again
    }
  }
}

RotationPoint random_rotation(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_rotation(n, rng);
}

Eigen::VectorXd exp_skew_gradient(const SkewParams& params, const Eigen::MatrixXd& weight) {
  const int n = params.n;
  const Eigen::MatrixXd S = skew_matrix(params);
  // <G, L(S, E)> = <L(S', G), E>; L(X, E) is the upper-right block of
  // exp([[X, E], [0, X]]).
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = S.transpose();
  block.bottomRightCorner(n, n) = S.transpose();
  block.topRightCorner(n, n) = weight;
  const Eigen::MatrixXd E = block.exp();
  const Eigen::MatrixXd W = E.topRightCorner(n, n);
  Eigen::VectorXd grad(SkewParams::size_for(n));
  Eigen::Index k = 0;
  for (int a = 1; a < n; ++a)
    for (int b = 0; b < a; ++b, ++k) grad(k) = W(a, b) - W(b, a);
  return grad;
}

Eigen::MatrixXd reorthonormalize(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

Eigen::MatrixXd complete_basis(const Eigen::VectorXd& direction) {
  const Eigen::Index n = direction.size();
  const double norm = direction.norm();
  if (!(norm > 0)) throw ValidationError("complete_basis needs a nonzero direction");
  Eigen::MatrixXd seed = Eigen::MatrixXd::Identity(n, n);
  seed.col(0) = direction / norm;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(seed);
  Eigen::MatrixXd Q = qr.householderQ();
  if (Q.col(0).dot(direction) < 0) Q = -Q;
  if (Q.determinant() < 0 && n > 1) Q.col(n - 1) = -Q.col(n - 1);
  return Q;
}

Eigen::MatrixXd last_column_flip(int n) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Identity(n, n);
  D(n - 1, n - 1) = -1.0;
  return D;
}

}  // namespace proxyzoo
