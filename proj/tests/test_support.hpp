#pragma once

// Test-only oracles and generators. Nothing here calls the synthesis code
// it is used to check.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>

#include <Eigen/Dense>

#include "privctl/linalg.hpp"
#include "privctl/qmi.hpp"

namespace privctl::testing {

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("privctl_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Symmetric PSD square root via eigen-decomposition (negative eigenvalues
/// clamped to zero).
inline Matrix sqrt_psd(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.transpose()));
  Vector d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

inline Matrix inv_sqrt_pd(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.transpose()));
  Vector d = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

/// Random matrix with spectral norm exactly `norm`.
inline Matrix random_with_norm(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                               double norm) {
  Matrix E = rng.normal_matrix(rows, cols);
  const double s = Eigen::JacobiSVD<Matrix>(E).singularValues()(0);
  return E * (norm / s);
}

/// Random contraction: spectral norm uniform in [0, 1], with probability
/// `boundary` exactly 1.
inline Matrix random_contraction(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                                 double boundary = 0.3) {
  const double r = rng.uniform(0.0, 1.0) < boundary ? 1.0 : rng.uniform(0.0, 1.0);
  return random_with_norm(rng, rows, cols, r);
}

/// Member of {Z : (Z - zeta)^T A (Z - zeta) <= Q} built as
/// zeta + A^{-1/2} U Q^{1/2} with a contraction U.
inline Matrix sample_member(Rng& rng, const Matrix& zeta, const Matrix& A_inv_sqrt,
                            const Matrix& Q_sqrt) {
  const Matrix U = random_contraction(rng, zeta.rows(), zeta.cols());
  return zeta + A_inv_sqrt * U * Q_sqrt;
}

/// Splits Z = [A B]^T into the closed loop A + B K.
inline Matrix closed_loop(const Matrix& Z, const Matrix& K) {
  const Eigen::Index n = Z.cols();
  const Matrix AB = Z.transpose();
  return AB.leftCols(n) + AB.rightCols(AB.cols() - n) * K;
}

/// Worst case of |a' + b' k| over the disc ||(a', b') - (a, b)|| <= gamma,
/// evaluated by brute force over `directions` boundary points.
inline double worst_closed_loop_on_disc(double a, double b, double k,
                                        double gamma, int directions = 720) {
  double worst = 0.0;
  for (int i = 0; i < directions; ++i) {
    const double th = 2.0 * M_PI * i / directions;
    worst = std::max(worst, std::abs(a + gamma * std::cos(th) +
                                     (b + gamma * std::sin(th)) * k));
  }
  return worst;
}

/// Scalar (n = m = 1) robust-stabilization radius around (a, b): the largest
/// gamma for which some gain k keeps |a' + b' k| < 1 on the whole disc.
/// 2-D search: a grid over k, and for each k a bisection over gamma whose
/// inner test is the brute-force disc maximum above.
inline double scalar_ball_radius_oracle(double a, double b, double k_lo,
                                        double k_hi, int k_steps = 4000) {
  double best = 0.0;
  for (int i = 0; i <= k_steps; ++i) {
    const double k = k_lo + (k_hi - k_lo) * i / k_steps;
    if (std::abs(a + b * k) >= 1.0) continue;
    double lo = 0.0, hi = 2.0;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      (worst_closed_loop_on_disc(a, b, k, mid, 256) < 1.0 ? lo : hi) = mid;
    }
    best = std::max(best, lo);
  }
  return best;
}

/// Same question for an ellipse {z : (z - zeta)^T A (z - zeta) <= r^2}
/// with r = gamma * sqrt(lambda_max(A)): the worst |z^T [1; k]| is
/// |zeta^T v| + r sqrt(v^T A^{-1} v). Grid over k.
inline double scalar_ellipse_radius_oracle(const Matrix& A, const Vector& zeta,
                                           double k_lo, double k_hi,
                                           int k_steps = 200000) {
  const Matrix A_inv = A.inverse();
  const double lmax = Eigen::SelfAdjointEigenSolver<Matrix>(A).eigenvalues().maxCoeff();
  double best = 0.0;
  for (int i = 0; i <= k_steps; ++i) {
    const double k = k_lo + (k_hi - k_lo) * i / k_steps;
    Vector v(2);
    v << 1.0, k;
    const double center = std::abs(zeta.dot(v));
    if (center >= 1.0) continue;
    best = std::max(best, (1.0 - center) / std::sqrt(lmax * v.dot(A_inv * v)));
  }
  return best;
}

/// Random QMI set in center form with a well-conditioned A and small Q.
inline QmiSet random_center_set(Rng& rng, Eigen::Index n, Eigen::Index m,
                                double q_scale, double center_scale = 0.5) {
  const Eigen::Index p = n + m;
  const Matrix W = rng.normal_matrix(p, p);
  const Matrix A = W * W.transpose() / static_cast<double>(p) + Matrix::Identity(p, p);
  const Matrix zeta = center_scale * rng.normal_matrix(p, n);
  const Matrix R = rng.normal_matrix(n, n);
  const Matrix Q = q_scale * (R * R.transpose() / static_cast<double>(n) +
                              0.1 * Matrix::Identity(n, n));
  return from_center_form({zeta, Q, A});
}

/// Independent eigenvalue check of the stabilization block
///   [[-P - C, 0, B^T], [0, -P, [P; Y]^T], [B, [P; Y], -A]]
/// assembled here from scratch.
inline double block_lambda_max(const QmiSet& set, const Matrix& P, const Matrix& Y) {
  const Eigen::Index n = set.n(), m = set.m(), p = n + m;
  Matrix M = Matrix::Zero(2 * n + p, 2 * n + p);
  Matrix PY(p, n);
  PY << P, Y;
  M.block(0, 0, n, n) = -P - set.Cbold;
  M.block(0, 2 * n, n, p) = set.Bbold.transpose();
  M.block(n, n, n, n) = -P;
  M.block(n, 2 * n, n, p) = PY.transpose();
  M.block(2 * n, 0, p, n) = set.Bbold;
  M.block(2 * n, n, p, n) = PY;
  M.block(2 * n, 2 * n, p, p) = -set.Abold;
  return Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (M + M.transpose()))
      .eigenvalues()
      .maxCoeff();
}

}  // namespace privctl::testing
