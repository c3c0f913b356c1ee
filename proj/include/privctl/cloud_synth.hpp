#pragma once

#include <string>
#include <utility>
#include <vector>

#include "privctl/linalg.hpp"
#include "privctl/qmi.hpp"

namespace privctl {

// Cloud-side synthesis. Given a QMI set of systems, find P > 0 and Y with
//
//   [ -P - C    0     B^T      ]
//   [   0      -P   [P; Y]^T   ]  < 0
//   [   B    [P; Y]   -A       ]
//
// so that K = Y P^{-1} makes A + B K Schur stable for every member, and
// maximize the radius gamma of the set the controller must cover.

enum class SynthesisStatus { kFeasible, kInfeasible, kNumericalFailure };

std::string to_string(SynthesisStatus status);

struct SynthesisOutcome {
  Matrix P;  // n x n
  Matrix Y;  // m x n
  Matrix K;  // m x n, Y P^{-1}
  double gamma_bar = 0.0;
  SynthesisStatus status = SynthesisStatus::kInfeasible;
  /// -lambda_max of the LMI block at (P, Y), recomputed from scratch.
  double margin = 0.0;
  double eps_strict = 0.0;
  /// (gamma, feasible) for every feasibility test the bisection ran.
  std::vector<std::pair<double, bool>> trace;

  bool feasible() const { return status == SynthesisStatus::kFeasible; }
};

inline constexpr double kEpsP = 1e-8;
inline constexpr double kGammaTolerance = 1e-4;

/// Solver-agnostic description of the LMI for one QMI set.
struct ConeProblem {
  QmiSet set;
  double eps_strict = 0.0;  // 1e-7 (1 + ||C||)
  double eps_P = kEpsP;

  Eigen::Index n() const { return set.n(); }
  Eigen::Index m() const { return set.m(); }
  /// The (2n + n + m) square block matrix at (P, Y); linear in (P, Y).
  Matrix block(const Matrix& P, const Matrix& Y) const;
};

ConeProblem assemble_lmi(const QmiSet& set);

struct FeasibilityOptions {
  /// Stop as soon as a point with the required margin is found (or
  /// infeasibility is certified) instead of maximizing the margin.
  bool early_exit = false;
};

/// Searches for a strictly feasible (P, Y). The returned status is decided
/// by an eigenvalue check of the assembled block, not by the solver.
SynthesisOutcome solve_feasibility(const ConeProblem& problem,
                                   const FeasibilityOptions& options = {});

/// Independent certificate check: P >= eps_P I, K P = Y, and
/// lambda_max(block) <= -eps_strict.
bool certificate_holds(const ConeProblem& problem, const SynthesisOutcome& out);

struct BisectionOptions {
  double tolerance = kGammaTolerance;
  int max_doublings = 40;
};

/// Largest gamma for which one controller stabilizes the gamma-ball around
/// the exact-data pair.
SynthesisOutcome maximize_gamma_clean(const Matrix& X0, const Matrix& X1,
                                      const Matrix& V0,
                                      const BisectionOptions& options = {});

/// Same for disturbed data, using the over-approximated inflated
/// consistency set.
SynthesisOutcome maximize_gamma_noisy(const Matrix& X0, const Matrix& X1,
                                      const Matrix& V0, const Matrix& Delta,
                                      const BisectionOptions& options = {});

/// True when feasibility along the recorded trace is non-increasing in gamma.
bool trace_is_monotone(const std::vector<std::pair<double, bool>>& trace);

}  // namespace privctl
