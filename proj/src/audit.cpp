#include "privctl/audit.hpp"

#include "privctl/qmi.hpp"

namespace privctl {

SystemPair identify_transformed_pair(const CloudView& view) {
  const Matrix Z = least_squares_pair(view.X0, view.X1, view.V0);
  const Eigen::Index n = view.X0.rows();
  const Matrix AB = Z.transpose();
  return {AB.leftCols(n), AB.rightCols(AB.cols() - n)};
}

AlternativeSystem construct_alternative_system(const Matrix& A_bar,
                                               const Matrix& B_bar,
                                               const Matrix& B_candidate,
                                               const Matrix& F_tilde,
                                               const Matrix& G_tilde) {
  const Eigen::Index n = A_bar.rows(), m = B_bar.cols();
  require_dims(A_bar.cols() == n && B_bar.rows() == n, "A_bar, B_bar shapes");
  require_dims(B_candidate.rows() == n && B_candidate.cols() == m,
               "B_candidate must be n x m");
  require_dims(F_tilde.rows() == m && F_tilde.cols() == n, "F_tilde must be m x n");
  require_dims(G_tilde.rows() == m && G_tilde.cols() == m, "G_tilde must be m x m");

  Eigen::FullPivLU<Matrix> g_lu(G_tilde);
  if (!g_lu.isInvertible())
    throw SingularMatrixError("G_tilde must be invertible");
  if (numerical_rank(B_candidate) != m)
    throw RankError("B_candidate must have full column rank");

  // B_c^+ B_bar; exact when B_bar lies in the range of B_c.
  const Matrix coeff = B_candidate.householderQr().solve(B_bar);
  const double range_gap =
      spectral_norm(B_candidate * coeff - B_bar) / (1.0 + spectral_norm(B_bar));
  if (range_gap > 1e-9)
    throw Error("B_bar is not in the range of B_candidate");

  AlternativeSystem alt;
  alt.A_hat = A_bar - B_candidate * F_tilde;
  alt.B_hat = B_candidate * G_tilde;
  alt.F1_hat = g_lu.solve(F_tilde);
  alt.G1_hat = g_lu.solve(coeff) - Matrix::Identity(m, m);
  return alt;
}

ClosedLoopGap closed_loop_gap(const Plant& plant, const TransformKeys& keys,
                              const Matrix& K_bar) {
  const Matrix& A = plant.A;
  const Matrix& B = plant.B;
  require_dims(K_bar.rows() == plant.m() && K_bar.cols() == plant.n(),
               "K_bar must be m x n");
  ClosedLoopGap gap;
  gap.A_cl_bar = A + B * keys.F1 + (B + B * keys.G1) * K_bar;
  gap.Delta = B * (keys.F2 - keys.F1) + B * (keys.G2 - keys.G1) * K_bar;
  return gap;
}

double closed_loop_gap_threshold(const Plant& plant, const TransformKeys& keys) {
  return kClosedLoopChangeThreshold * spectral_norm(plant.B) *
         spectral_norm(key_difference(keys.F1, keys.G1, keys.F2, keys.G2));
}

double data_consistency_residual(const Matrix& X0, const Matrix& X1,
                                 const Matrix& V0, const Matrix& A,
                                 const Matrix& B) {
  return spectral_norm(X1 - A * X0 - B * V0) / (1.0 + spectral_norm(X1));
}

}  // namespace privctl
