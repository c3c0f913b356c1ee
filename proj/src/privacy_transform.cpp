#include "privctl/privacy_transform.hpp"

#include <cmath>
#include <limits>

namespace privctl {

namespace {

double condition_number(const Matrix& M) {
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

Matrix stacked_identity_gain(const Matrix& K) {
  const Eigen::Index n = K.cols();
  return vstack(Matrix::Identity(n, n), K);
}

}  // namespace

bool is_admissible_mask_gain(const Matrix& G1) {
  if (G1.rows() != G1.cols() || G1.rows() == 0) return false;
  const Matrix IG = Matrix::Identity(G1.rows(), G1.rows()) + G1;
  return condition_number(IG) < kMaxMaskConditionNumber;
}

StageOneKeys generate_stage1_keys(Eigen::Index n, Eigen::Index m,
                                  const MatrixSampler& draw) {
  require_dims(n >= 1 && m >= 1, "key dimensions must be positive");
  for (int attempt = 0; attempt < kMaxKeyAttempts; ++attempt) {
    StageOneKeys keys{draw(m, n), draw(m, m)};
    require_dims(keys.F1.rows() == m && keys.F1.cols() == n &&
                     keys.G1.rows() == m && keys.G1.cols() == m,
                 "sampler returned a matrix of the wrong shape");
    if (is_admissible_mask_gain(keys.G1)) return keys;
  }
  throw KeyGenerationError("could not draw G1 with I + G1 well conditioned");
}

StageOneKeys generate_stage1_keys(Eigen::Index n, Eigen::Index m,
                                  std::uint64_t seed, double lo, double hi) {
  if (!(lo < hi)) throw Error("key entry range must satisfy lo < hi");
  Rng rng(seed, /*stream=*/0xF1);
  return generate_stage1_keys(n, m, [&](Eigen::Index r, Eigen::Index c) {
    return rng.uniform_matrix(r, c, lo, hi);
  });
}

MaskedData pre_process(const DataSet& data, const Matrix& F1,
                       const Matrix& G1) {
  const Eigen::Index n = data.n(), m = data.m();
  require_dims(F1.rows() == m && F1.cols() == n, "F1 must be m x n");
  require_dims(G1.rows() == m && G1.cols() == m, "G1 must be m x m");
  require_dims(data.X1.rows() == n && data.X1.cols() == data.horizon() &&
                   data.U0.cols() == data.horizon(),
               "data matrices must share the horizon");

  const Matrix IG = Matrix::Identity(m, m) + G1;
  Eigen::FullPivLU<Matrix> lu(IG);
  if (!lu.isInvertible())
    throw SingularMatrixError("I + G1 is singular; redraw the stage-1 keys");

  MaskedData out;
  out.X0 = data.X0;
  out.X1 = data.X1;
  out.V0 = lu.solve(data.U0 - F1 * data.X0);
  out.D0 = data.D0;
  return out;
}

Matrix key_difference(const Matrix& F1, const Matrix& G1, const Matrix& F2,
                      const Matrix& G2) {
  require_dims(F1.rows() == F2.rows() && F1.cols() == F2.cols() &&
                   G1.rows() == G2.rows() && G1.cols() == G2.cols() &&
                   F1.rows() == G1.rows(),
               "stage-1 and stage-2 keys must have matching shapes");
  return hstack(F2 - F1, G2 - G1);
}

bool within_privacy_budget(const Matrix& F1, const Matrix& G1,
                           const Matrix& F2, const Matrix& G2,
                           double gamma_bar, double B_norm_bound) {
  const double radius = gamma_bar / B_norm_bound;
  return spectral_norm(key_difference(F1, G1, F2, G2)) <=
         radius * (1.0 + 1e-12);
}

bool changes_closed_loop(const Matrix& F1, const Matrix& G1, const Matrix& F2,
                         const Matrix& G2, const Matrix& K_bar) {
  const Matrix diff = key_difference(F1, G1, F2, G2);
  require_dims(K_bar.rows() == F1.rows() && K_bar.cols() == F1.cols(),
               "K_bar must be m x n");
  const double dnorm = spectral_norm(diff);
  if (dnorm == 0.0) return false;
  return spectral_norm(diff * stacked_identity_gain(K_bar)) >=
         kClosedLoopChangeThreshold * dnorm;
}

StageTwoKeys generate_stage2_keys(const Matrix& F1, const Matrix& G1,
                                  const Matrix& K_bar, double gamma_bar,
                                  double B_norm_bound, std::uint64_t seed,
                                  const StageTwoOptions& options) {
  if (!(gamma_bar > 0.0))
    throw KeyGenerationError("no privacy budget: gamma_bar must be positive");
  if (!(B_norm_bound > 0.0))
    throw KeyGenerationError("B_norm_bound must be positive");
  if (!(options.fill > 0.0 && options.fill <= 1.0))
    throw KeyGenerationError("fill factor must lie in (0, 1]");
  const Eigen::Index m = F1.rows(), n = F1.cols();
  require_dims(G1.rows() == m && G1.cols() == m, "G1 must be m x m");
  require_dims(K_bar.rows() == m && K_bar.cols() == n, "K_bar must be m x n");

  const double radius = options.fill * gamma_bar / B_norm_bound;
  Rng rng(seed, /*stream=*/0xF2);
  for (int attempt = 0; attempt < kMaxKeyAttempts; ++attempt) {
    Matrix diff = rng.uniform_matrix(m, n + m, options.lo, options.hi);
    const double norm = spectral_norm(diff);
    if (norm == 0.0) continue;
    diff *= radius / norm;
    StageTwoKeys keys{F1 + diff.leftCols(n), G1 + diff.rightCols(m)};
    if (changes_closed_loop(F1, G1, keys.F2, keys.G2, K_bar)) return keys;
  }
  throw KeyGenerationError(
      "could not draw stage-2 keys that change the closed loop");
}

Matrix post_process(const Matrix& F2, const Matrix& G2, const Matrix& K_bar) {
  const Eigen::Index m = F2.rows();
  require_dims(G2.rows() == m && G2.cols() == m, "G2 must be m x m");
  require_dims(K_bar.rows() == m && K_bar.cols() == F2.cols(),
               "K_bar must match F2");
  return F2 + (Matrix::Identity(m, m) + G2) * K_bar;
}

}  // namespace privctl
