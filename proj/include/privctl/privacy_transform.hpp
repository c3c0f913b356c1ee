#pragma once

#include <cstdint>
#include <functional>

#include "privctl/linalg.hpp"
#include "privctl/plant.hpp"

namespace privctl {

class KeyGenerationError : public Error {
 public:
  using Error::Error;
};

// Client-side masking. The stage-1 pair (F1, G1) masks the input data before
// it leaves the client; the stage-2 pair (F2, G2) unmasks the controller the
// cloud returns while perturbing the closed loop the cloud could otherwise
// reconstruct.

struct StageOneKeys {
  Matrix F1;  // m x n
  Matrix G1;  // m x m, I + G1 invertible
};

struct StageTwoKeys {
  Matrix F2;  // m x n
  Matrix G2;  // m x m
};

/// Everything secret the client holds for one synthesis round.
struct TransformKeys {
  Matrix F1, G1, F2, G2;
  double B_norm_bound = 0.0;
};

/// Data after masking: V0 replaces U0. D0 is carried along for tests only.
struct MaskedData {
  Matrix X0;
  Matrix X1;
  Matrix V0;
  Matrix D0;

  Eigen::Index n() const { return X0.rows(); }
  Eigen::Index m() const { return V0.rows(); }
};

inline constexpr double kMaxMaskConditionNumber = 1e8;
inline constexpr int kMaxKeyAttempts = 100;
// Relative threshold below which [F2-F1, G2-G1][I; K] counts as zero.
inline constexpr double kClosedLoopChangeThreshold = 1e-8;

/// Draws a rows x cols matrix. Used to inject fixed draws in tests.
using MatrixSampler = std::function<Matrix(Eigen::Index, Eigen::Index)>;

/// cond(I + G1) < kMaxMaskConditionNumber.
bool is_admissible_mask_gain(const Matrix& G1);

StageOneKeys generate_stage1_keys(Eigen::Index n, Eigen::Index m,
                                  std::uint64_t seed, double lo = -1.0,
                                  double hi = 1.0);
/// Same as above with an explicit sampler; F1 is drawn before G1 on every
/// attempt.
StageOneKeys generate_stage1_keys(Eigen::Index n, Eigen::Index m,
                                  const MatrixSampler& draw);

/// V0 = (I + G1)^{-1} (U0 - F1 X0).
MaskedData pre_process(const DataSet& data, const Matrix& F1, const Matrix& G1);

struct StageTwoOptions {
  double fill = 0.9;  // fraction of the admissible radius to use, in (0, 1]
  double lo = -1.0;
  double hi = 1.0;
};

/// Draws (F2, G2) with ||[F2-F1, G2-G1]|| = fill * gamma_bar / B_norm_bound
/// and [F2-F1, G2-G1][I; K_bar] != 0.
StageTwoKeys generate_stage2_keys(const Matrix& F1, const Matrix& G1,
                                  const Matrix& K_bar, double gamma_bar,
                                  double B_norm_bound, std::uint64_t seed,
                                  const StageTwoOptions& options = {});

/// K_star = F2 + (I + G2) K_bar.
Matrix post_process(const Matrix& F2, const Matrix& G2, const Matrix& K_bar);

/// [F2-F1, G2-G1].
Matrix key_difference(const Matrix& F1, const Matrix& G1, const Matrix& F2,
                      const Matrix& G2);

/// ||[F2-F1, G2-G1]|| <= gamma_bar / B_norm_bound (with relative slack).
bool within_privacy_budget(const Matrix& F1, const Matrix& G1,
                           const Matrix& F2, const Matrix& G2,
                           double gamma_bar, double B_norm_bound);

/// ||[F2-F1, G2-G1][I; K_bar]|| >= kClosedLoopChangeThreshold * ||[F2-F1, G2-G1]||.
bool changes_closed_loop(const Matrix& F1, const Matrix& G1, const Matrix& F2,
                         const Matrix& G2, const Matrix& K_bar);

}  // namespace privctl
