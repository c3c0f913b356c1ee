#pragma once

#include <cstdint>
#include <optional>

#include "privctl/linalg.hpp"

namespace privctl {

/// True system x(t+1) = A x(t) + B u(t) (+ d(t)). Ground truth: only the data
/// collection step, tests and audits may look inside.
struct Plant {
  Matrix A;
  Matrix B;

  Plant() = default;
  /// Validates shapes and that B has full column rank.
  Plant(Matrix A_star, Matrix B_star);

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index m() const { return B.cols(); }
};

/// Discretized batch reactor used throughout the case study.
Plant batch_reactor();

/// Experiment data. D0 is the realized disturbance; it is kept for tests and
/// audits and is never written to the cloud exchange.
struct DataSet {
  Matrix X0;  // n x T
  Matrix X1;  // n x T
  Matrix U0;  // m x T
  Matrix D0;  // n x T, zero for clean data

  Eigen::Index n() const { return X0.rows(); }
  Eigen::Index m() const { return U0.rows(); }
  Eigen::Index horizon() const { return X0.cols(); }
};

/// Bounded disturbance class {D : D D^T <= Delta Delta^T}.
struct DisturbanceModel {
  Matrix Delta;  // n x n
  double d_max = 0.0;
};

/// Runs the plant from x0 under `inputs` (m x T), optionally adding the
/// disturbance columns, and returns the stacked data matrices.
DataSet simulate_collect(const Plant& plant, const Vector& x0,
                         const Matrix& inputs,
                         const std::optional<Matrix>& disturbance = std::nullopt);

/// True iff [X0; U0] has full row rank n + m.
bool check_rank_assumption(const DataSet& data);

struct UniformDisturbance {
  Matrix D0;
  DisturbanceModel model;
};

/// i.i.d. U(-d_max, d_max) entries with Delta = sqrt(n d_max^2 T) I_n.
UniformDisturbance generate_uniform_disturbance(Eigen::Index n, Eigen::Index T,
                                                double d_max,
                                                std::uint64_t seed);

}  // namespace privctl
