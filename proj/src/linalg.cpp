#include "privctl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace privctl {

void require_dims(bool ok, const std::string& what) {
  if (!ok) throw DimensionError("dimension mismatch: " + what);
}

double spectral_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

double spectral_radius(const Matrix& M) {
  require_dims(M.rows() == M.cols(), "spectral_radius needs a square matrix");
  if (M.size() == 0) return 0.0;
  return M.eigenvalues().cwiseAbs().maxCoeff();
}

double lambda_max_sym(const Matrix& M) {
  require_dims(M.rows() == M.cols(), "lambda_max_sym needs a square matrix");
  const Matrix S = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(S, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

double lambda_min_sym(const Matrix& M) {
  require_dims(M.rows() == M.cols(), "lambda_min_sym needs a square matrix");
  const Matrix S = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(S, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

int numerical_rank(const Matrix& M) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  if (smax == 0.0) return 0;
  return static_cast<int>((sv.array() > kRankTolerance * smax).count());
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  require_dims(top.cols() == bottom.cols(), "vstack column counts differ");
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

Matrix hstack(const Matrix& left, const Matrix& right) {
  require_dims(left.rows() == right.rows(), "hstack row counts differ");
  Matrix out(left.rows(), left.cols() + right.cols());
  out << left, right;
  return out;
}

double relative_gap(const Matrix& a, const Matrix& b) {
  return spectral_norm(a - b) / (1.0 + spectral_norm(b));
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream & 0xffffffffu),
                    static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double Rng::normal() {
  double u1 = uniform(0.0, 1.0);
  while (u1 <= 0.0) u1 = uniform(0.0, 1.0);
  const double u2 = uniform(0.0, 1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Matrix Rng::uniform_matrix(Eigen::Index rows, Eigen::Index cols, double lo,
                           double hi) {
  Matrix M(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = uniform(lo, hi);
  return M;
}

Matrix Rng::normal_matrix(Eigen::Index rows, Eigen::Index cols) {
  Matrix M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = normal();
  return M;
}

}  // namespace privctl
