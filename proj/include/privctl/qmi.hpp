#pragma once

#include <filesystem>

#include "privctl/linalg.hpp"

namespace privctl {

class InconsistentDataError : public Error {
 public:
  using Error::Error;
};

/// Set of systems Z = [A B]^T satisfying
///   C + B^T Z + Z^T B + Z^T A Z <= 0
/// with A > 0 and B^T A^{-1} B - C >= 0. Members are (n+m) x n matrices.
struct QmiSet {
  Matrix Abold;  // (n+m) x (n+m), symmetric positive definite
  Matrix Bbold;  // (n+m) x n
  Matrix Cbold;  // n x n, symmetric

  Eigen::Index n() const { return Cbold.rows(); }
  Eigen::Index m() const { return Abold.rows() - Cbold.rows(); }
};

/// Matrix-ellipsoid form (Z - zeta)^T A (Z - zeta) <= Q of the same set.
struct CenterFormQmi {
  Matrix zeta;   // (n+m) x n, center
  Matrix Q;      // n x n, positive semidefinite
  Matrix Abold;
};

/// Exact-data set: the single pair solving X1 = A X0 + B V0.
QmiSet clean_singleton_set(const Matrix& X0, const Matrix& X1,
                           const Matrix& V0);

/// Ball of spectral-norm radius gamma around the exact-data pair.
QmiSet clean_gamma_set(const Matrix& X0, const Matrix& X1, const Matrix& V0,
                       double gamma);

/// Pairs consistent with X1 = A X0 + B V0 + D for some D D^T <= Delta Delta^T.
QmiSet noisy_consistency_set(const Matrix& X0, const Matrix& X1,
                             const Matrix& V0, const Matrix& Delta);

CenterFormQmi to_center_form(const QmiSet& set);
QmiSet from_center_form(const CenterFormQmi& center);

/// QMI whose set contains every point within distance gamma of `set`.
QmiSet overapproximate_inflated(const QmiSet& set, double gamma);

/// Largest eigenvalue of the QMI residual at Z; <= 0 means Z is a member.
double membership(const QmiSet& set, const Matrix& Z);

/// Largest eigenvalue of (Z - zeta)^T A (Z - zeta) - Q.
double membership(const CenterFormQmi& center, const Matrix& Z);

/// Least-squares pair Z = [A B]^T with X1 ~ A X0 + B V0; throws RankError
/// unless [X0; V0] has full row rank.
Matrix least_squares_pair(const Matrix& X0, const Matrix& X1, const Matrix& V0);

/// Writes A.csv, B.csv, C.csv and manifest.txt (n, m) into `dir`.
void write_qmi_set(const std::filesystem::path& dir, const QmiSet& set);
QmiSet read_qmi_set(const std::filesystem::path& dir);

/// Checks the set invariants (A > 0 and nonempty); throws on violation.
void validate(const QmiSet& set);

}  // namespace privctl
