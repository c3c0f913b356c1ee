#pragma once

#include <optional>
#include <vector>

#include "privctl/linalg.hpp"

namespace privctl::lmi {

// Log-barrier interior-point method for small dense problems
//
//   minimize  c^T z   subject to  S_k(z) = S_k0 + sum_i z_i D_ki  > 0
//
// with every S_k symmetric. Coefficient matrices are stored sparsely since
// each decision variable touches only a handful of entries.

struct Entry {
  int row;
  int col;
  double value;
};

struct AffineBlock {
  Matrix constant;
  std::vector<std::vector<Entry>> coeffs;  // one list per decision variable

  AffineBlock(int size, int num_vars);
  int size() const { return static_cast<int>(constant.rows()); }
  /// Adds v at (r, c) and, off the diagonal, at (c, r) too.
  void add_symmetric(int var, int r, int c, double v);
};

struct Problem {
  int num_vars = 0;
  Vector objective;
  std::vector<AffineBlock> blocks;
};

struct Options {
  double t0 = 1.0;
  double mu = 20.0;
  double gap_tol = 1e-9;          // stop when barrier_dim / t < gap_tol
  double newton_tol = 1e-9;       // half squared Newton decrement
  int max_newton_steps = 4000;
  int max_centering_steps = 200;  // per value of t
  std::optional<double> stop_below;            // objective reached
  std::optional<double> stop_lower_bound_above;  // certified bound reached
};

/// kStalled: centering stopped making progress (typically at large t near
/// the optimum); `z` is the last strictly feasible iterate.
enum class Status { kConverged, kReachedTarget, kBoundExceeded, kStalled, kFailed };

struct Result {
  Vector z;
  double objective = 0.0;
  double lower_bound = 0.0;  // valid at the last completed centering
  Status status = Status::kFailed;
  int newton_steps = 0;
};

Matrix evaluate(const AffineBlock& block, const Vector& z);

/// z0 must be strictly feasible.
Result minimize(const Problem& problem, const Vector& z0,
                const Options& options = {});

}  // namespace privctl::lmi
