#include "privctl/qmi.hpp"

#include "privctl/matrix_io.hpp"

#include <algorithm>
#include <cmath>

namespace privctl {

namespace {

Matrix symmetrize(const Matrix& M) { return 0.5 * (M + M.transpose()); }

void check_data_shapes(const Matrix& X0, const Matrix& X1, const Matrix& V0) {
  require_dims(X0.cols() == X1.cols() && X0.cols() == V0.cols(),
               "X0, X1 and V0 must share the horizon");
  require_dims(X0.rows() == X1.rows(), "X0 and X1 must have n rows");
  require_dims(X0.rows() >= 1 && V0.rows() >= 1, "n and m must be positive");
}

Matrix stacked_data(const Matrix& X0, const Matrix& V0) {
  const Matrix W = vstack(X0, V0);
  if (numerical_rank(W) != W.rows())
    throw RankError(
        "[X0; V0] is not full row rank; collect a longer or richer experiment");
  return W;
}

// Tolerance scale for PSD tests on n x n blocks built from the set matrices.
double psd_tolerance(const Matrix& BtAinvB, const Matrix& C) {
  return 1e-9 * (1.0 + std::max(spectral_norm(BtAinvB), spectral_norm(C)));
}

}  // namespace

Matrix least_squares_pair(const Matrix& X0, const Matrix& X1,
                          const Matrix& V0) {
  check_data_shapes(X0, X1, V0);
  const Matrix W = stacked_data(X0, V0);
  // W^T Z = X1^T: W^T is tall with full column rank, so Householder QR gives
  // the right-inverse solution Z^T = X1 W^+.
  return W.transpose().householderQr().solve(X1.transpose());
}

QmiSet clean_singleton_set(const Matrix& X0, const Matrix& X1,
                           const Matrix& V0) {
  const Matrix Zbar = least_squares_pair(X0, X1, V0);
  const Eigen::Index k = Zbar.rows();
  QmiSet set;
  set.Abold = Matrix::Identity(k, k);
  set.Bbold = -Zbar;
  set.Cbold = set.Bbold.transpose() * set.Bbold;
  return set;
}

QmiSet clean_gamma_set(const Matrix& X0, const Matrix& X1, const Matrix& V0,
                       double gamma) {
  if (!(gamma >= 0.0)) throw Error("gamma must be non-negative");
  QmiSet set = clean_singleton_set(X0, X1, V0);
  set.Cbold -= gamma * gamma * Matrix::Identity(set.n(), set.n());
  return set;
}

QmiSet noisy_consistency_set(const Matrix& X0, const Matrix& X1,
                             const Matrix& V0, const Matrix& Delta) {
  check_data_shapes(X0, X1, V0);
  require_dims(Delta.rows() == X0.rows(), "Delta must have n rows");
  const Matrix W = stacked_data(X0, V0);
  QmiSet set;
  set.Abold = symmetrize(W * W.transpose());
  set.Bbold = -W * X1.transpose();
  set.Cbold = symmetrize(X1 * X1.transpose() - Delta * Delta.transpose());

  Eigen::LLT<Matrix> llt(set.Abold);
  if (llt.info() != Eigen::Success)
    throw RankError("data Gram matrix is not positive definite");
  const Matrix BtAinvB =
      symmetrize(set.Bbold.transpose() * llt.solve(set.Bbold));
  if (lambda_min_sym(BtAinvB - set.Cbold) < -psd_tolerance(BtAinvB, set.Cbold))
    throw InconsistentDataError(
        "data are inconsistent with the disturbance bound; enlarge Delta");
  return set;
}

void validate(const QmiSet& set) {
  const Eigen::Index k = set.Abold.rows();
  const Eigen::Index n = set.Cbold.rows();
  require_dims(set.Abold.cols() == k && set.Cbold.cols() == n &&
                   set.Bbold.rows() == k && set.Bbold.cols() == n && k > n,
               "QMI matrices must be (n+m)x(n+m), (n+m)xn, nxn");
  Eigen::LLT<Matrix> llt(symmetrize(set.Abold));
  if (llt.info() != Eigen::Success || lambda_min_sym(set.Abold) <= 0.0)
    throw SingularMatrixError("QMI matrix A must be positive definite");
  const Matrix BtAinvB =
      symmetrize(set.Bbold.transpose() * llt.solve(set.Bbold));
  if (lambda_min_sym(BtAinvB - set.Cbold) < -psd_tolerance(BtAinvB, set.Cbold))
    throw InconsistentDataError("QMI set is empty");
}

CenterFormQmi to_center_form(const QmiSet& set) {
  require_dims(set.Abold.rows() == set.Abold.cols() &&
                   set.Bbold.rows() == set.Abold.rows() &&
                   set.Cbold.rows() == set.Bbold.cols(),
               "QMI matrices have inconsistent shapes");
  Eigen::LLT<Matrix> llt(symmetrize(set.Abold));
  if (llt.info() != Eigen::Success)
    throw SingularMatrixError("QMI matrix A is not positive definite");
  CenterFormQmi out;
  out.zeta = -llt.solve(set.Bbold);
  out.Q = symmetrize(-set.Bbold.transpose() * out.zeta - set.Cbold);
  out.Abold = set.Abold;
  return out;
}

QmiSet from_center_form(const CenterFormQmi& center) {
  QmiSet set;
  set.Abold = center.Abold;
  set.Bbold = -center.Abold * center.zeta;
  set.Cbold = symmetrize(center.zeta.transpose() * center.Abold * center.zeta -
                         center.Q);
  return set;
}

QmiSet overapproximate_inflated(const QmiSet& set, double gamma) {
  if (!(gamma >= 0.0)) throw Error("gamma must be non-negative");
  if (gamma == 0.0) return set;
  const CenterFormQmi center = to_center_form(set);
  // ||A^{1/2}|| = sqrt(lambda_max(A)) and likewise for Q; rounding can leave
  // Q with a tiny negative top eigenvalue only when Q ~ 0, so clamp.
  const double a_norm = std::max(lambda_max_sym(set.Abold), 0.0);
  const double q_norm = std::max(lambda_max_sym(center.Q), 0.0);
  const double shift =
      2.0 * gamma * std::sqrt(a_norm) * std::sqrt(q_norm) + gamma * gamma * a_norm;
  QmiSet out = set;
  out.Cbold -= shift * Matrix::Identity(set.n(), set.n());
  return out;
}

double membership(const QmiSet& set, const Matrix& Z) {
  require_dims(Z.rows() == set.Abold.rows() && Z.cols() == set.Cbold.rows(),
               "Z must be (n+m) x n");
  const Matrix BtZ = set.Bbold.transpose() * Z;
  const Matrix R = set.Cbold + BtZ + BtZ.transpose() +
                   Z.transpose() * set.Abold * Z;
  return lambda_max_sym(R);
}

double membership(const CenterFormQmi& center, const Matrix& Z) {
  require_dims(Z.rows() == center.zeta.rows() && Z.cols() == center.zeta.cols(),
               "Z must be (n+m) x n");
  const Matrix D = Z - center.zeta;
  return lambda_max_sym(D.transpose() * center.Abold * D - center.Q);
}

void write_qmi_set(const std::filesystem::path& dir, const QmiSet& set) {
  std::filesystem::create_directories(dir);
  write_matrix_csv(dir / "A.csv", "A", set.Abold);
  write_matrix_csv(dir / "B.csv", "B", set.Bbold);
  write_matrix_csv(dir / "C.csv", "C", set.Cbold);
  write_key_values(dir / "manifest.txt", {{"n", std::to_string(set.n())},
                                          {"m", std::to_string(set.m())}});
}

QmiSet read_qmi_set(const std::filesystem::path& dir) {
  const KeyValues manifest = read_key_values(dir / "manifest.txt");
  QmiSet set{read_matrix_csv(dir / "A.csv"), read_matrix_csv(dir / "B.csv"),
             read_matrix_csv(dir / "C.csv")};
  const auto n = manifest.find("n"), m = manifest.find("m");
  if (n == manifest.end() || m == manifest.end() ||
      std::stol(n->second) != set.n() || std::stol(m->second) != set.m())
    throw FormatError("QMI manifest disagrees with the matrix files");
  require_dims(set.Abold.rows() == set.n() + set.m() &&
                   set.Abold.cols() == set.Abold.rows() &&
                   set.Bbold.rows() == set.Abold.rows() &&
                   set.Bbold.cols() == set.n() && set.Cbold.cols() == set.n(),
               "QMI matrix shapes");
  return set;
}

}  // namespace privctl
