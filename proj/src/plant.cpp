#include "privctl/plant.hpp"

#include <cmath>

namespace privctl {

Plant::Plant(Matrix A_star, Matrix B_star)
    : A(std::move(A_star)), B(std::move(B_star)) {
  require_dims(A.rows() >= 1 && A.rows() == A.cols(), "A must be square, n >= 1");
  require_dims(B.rows() == A.rows() && B.cols() >= 1,
               "B must have n rows and m >= 1 columns");
  if (numerical_rank(B) != B.cols())
    throw RankError("input matrix B must have full column rank");
}

Plant batch_reactor() {
  Matrix A(4, 4), B(4, 2);
  A << 1178, 1, 511, -403,
       -51, 661, -11, 61,
       76, 335, 560, 382,
       0, 335, 89, 849;
  B << 4, -87,
       467, 1,
       213, -235,
       213, -16;
  return Plant(A * 1e-3, B * 1e-3);
}

DataSet simulate_collect(const Plant& plant, const Vector& x0,
                         const Matrix& inputs,
                         const std::optional<Matrix>& disturbance) {
  const Eigen::Index n = plant.n();
  const Eigen::Index T = inputs.cols();
  require_dims(x0.size() == n, "x0 length must equal n");
  require_dims(inputs.rows() == plant.m(), "inputs must have m rows");
  require_dims(T >= 1, "inputs must have at least one column");
  if (disturbance)
    require_dims(disturbance->rows() == n && disturbance->cols() == T,
                 "disturbance must be n x T");

  DataSet data;
  data.X0.resize(n, T);
  data.X1.resize(n, T);
  data.U0 = inputs;
  data.D0 = disturbance ? *disturbance : Matrix::Zero(n, T);

  Vector x = x0;
  for (Eigen::Index t = 0; t < T; ++t) {
    data.X0.col(t) = x;
    x = plant.A * x + plant.B * inputs.col(t) + data.D0.col(t);
    data.X1.col(t) = x;
  }
  return data;
}

bool check_rank_assumption(const DataSet& data) {
  const Matrix W = vstack(data.X0, data.U0);
  return numerical_rank(W) == W.rows();
}

UniformDisturbance generate_uniform_disturbance(Eigen::Index n, Eigen::Index T,
                                                double d_max,
                                                std::uint64_t seed) {
  if (!(d_max >= 0.0)) throw Error("d_max must be non-negative");
  require_dims(n >= 1 && T >= 1, "n and T must be positive");
  Rng rng(seed, /*stream=*/0xD157);
  UniformDisturbance out;
  out.D0 = d_max > 0.0 ? rng.uniform_matrix(n, T, -d_max, d_max)
                       : Matrix::Zero(n, T);
  const double scale = std::sqrt(static_cast<double>(n) * d_max * d_max *
                                 static_cast<double>(T));
  out.model.Delta = scale * Matrix::Identity(n, n);
  out.model.d_max = d_max;
  return out;
}

}  // namespace privctl
