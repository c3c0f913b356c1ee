#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace privctl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Singular values below kRankTolerance * sigma_max count as zero.
inline constexpr double kRankTolerance = 1e-9;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class RankError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Throws DimensionError with `what` if `ok` is false.
void require_dims(bool ok, const std::string& what);

double spectral_norm(const Matrix& M);
double spectral_radius(const Matrix& M);

/// Largest eigenvalue of the symmetric part (M + M^T) / 2.
double lambda_max_sym(const Matrix& M);
double lambda_min_sym(const Matrix& M);

/// Numerical rank with the kRankTolerance relative threshold.
int numerical_rank(const Matrix& M);

/// Returns [top; bottom].
Matrix vstack(const Matrix& top, const Matrix& bottom);
/// Returns [left, right].
Matrix hstack(const Matrix& left, const Matrix& right);

/// Relative residual ||a - b|| / (1 + ||b||) in the spectral norm.
double relative_gap(const Matrix& a, const Matrix& b);

/// Seeded random source. Uniform draws are built from the raw 64-bit engine
/// output so that streams are identical across standard library vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller.
  double normal();

  Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double lo,
                        double hi);
  Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols);

 private:
  std::mt19937_64 engine_;
};

}  // namespace privctl
