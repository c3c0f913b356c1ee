#pragma once

#include <optional>

#include "privctl/linalg.hpp"
#include "privctl/plant.hpp"
#include "privctl/privacy_transform.hpp"

namespace privctl {

/// What the cloud (and anyone it colludes with) sees: the masked data, the
/// disturbance bound when one is used, and the published synthesis result.
/// No key material, no ground truth.
struct CloudView {
  Matrix X0;
  Matrix X1;
  Matrix V0;
  std::optional<Matrix> Delta;
  double gamma_bar = 0.0;
  Matrix K_bar;
};

struct SystemPair {
  Matrix A;  // n x n
  Matrix B;  // n x m
};

/// The unique (A, B) with X1 = A X0 + B V0; throws RankError when [X0; V0]
/// is rank deficient (the pair is then not unique).
SystemPair identify_transformed_pair(const CloudView& view);

/// A system together with masking keys that reproduce the transformed pair.
struct AlternativeSystem {
  Matrix A_hat;
  Matrix B_hat;
  Matrix F1_hat;
  Matrix G1_hat;
};

/// Builds A_hat = A_bar - B_c F_tilde, B_hat = B_c G_tilde, and keys
/// F1_hat = G_tilde^{-1} F_tilde, I + G1_hat = G_tilde^{-1} B_c^+ B_bar, so
/// that A_hat + B_hat F1_hat = A_bar and B_hat (I + G1_hat) = B_bar.
/// Requires B_bar to lie in the range of B_candidate.
AlternativeSystem construct_alternative_system(const Matrix& A_bar,
                                               const Matrix& B_bar,
                                               const Matrix& B_candidate,
                                               const Matrix& F_tilde,
                                               const Matrix& G_tilde);

struct ClosedLoopGap {
  Matrix A_cl_bar;  // closed loop the cloud can reconstruct
  Matrix Delta;     // hidden offset to the true closed loop
};

/// A_cl_bar = A + B F1 + (B + B G1) K_bar and
/// Delta = B (F2 - F1) + B (G2 - G1) K_bar for the true plant (A, B).
ClosedLoopGap closed_loop_gap(const Plant& plant, const TransformKeys& keys,
                              const Matrix& K_bar);

/// Lower limit below which the audit treats ||Delta|| as zero.
double closed_loop_gap_threshold(const Plant& plant, const TransformKeys& keys);

/// Relative residual of X1 - (A X0 + B V0).
double data_consistency_residual(const Matrix& X0, const Matrix& X1,
                                 const Matrix& V0, const Matrix& A,
                                 const Matrix& B);

}  // namespace privctl
