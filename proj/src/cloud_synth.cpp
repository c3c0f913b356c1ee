#include "privctl/cloud_synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "privctl/lmi_solver.hpp"

namespace privctl {

namespace {

// Radius of the box the barrier solver may roam in, in normalized units.
constexpr double kSearchRadius = 1e4;

struct Layout {
  int n, m, k;     // k = n + m
  int num_p, num_y;
  int s_index;     // margin variable
  int num_vars;

  Layout(int n_, int m_)
      : n(n_), m(m_), k(n_ + m_), num_p(n_ * (n_ + 1) / 2), num_y(m_ * n_),
        s_index(num_p + num_y), num_vars(num_p + num_y + 1) {}

  int p_var(int i, int j) const {  // i <= j, packed upper triangle
    return i * n - i * (i - 1) / 2 + (j - i);
  }
  int y_var(int i, int j) const { return num_p + i * n + j; }
};

Matrix unpack_p(const Layout& L, const Vector& z) {
  Matrix P(L.n, L.n);
  for (int i = 0; i < L.n; ++i)
    for (int j = i; j < L.n; ++j) P(i, j) = P(j, i) = z(L.p_var(i, j));
  return P;
}

Matrix unpack_y(const Layout& L, const Vector& z) {
  Matrix Y(L.m, L.n);
  for (int i = 0; i < L.m; ++i)
    for (int j = 0; j < L.n; ++j) Y(i, j) = z(L.y_var(i, j));
  return Y;
}

// Builds:  s I - blkdiag(M(P, Y), eps_P I - P) > 0   (margin block)
//          [R, x^T; x, R I] > 0                      (search box)
// for the set scaled by 1/alpha. Minimizing s maximizes the margin.
lmi::Problem build_barrier_problem(const Layout& L, const QmiSet& set,
                                   double eps_P) {
  const int n = L.n, k = L.k;
  const int main_size = 2 * n + k + n;
  lmi::AffineBlock main(main_size, L.num_vars);

  // -F0: constant part of blkdiag(M, eps_P I - P) negated.
  Matrix F0 = Matrix::Zero(main_size, main_size);
  F0.block(0, 0, n, n) = -set.Cbold;
  F0.block(2 * n, 0, k, n) = set.Bbold;
  F0.block(0, 2 * n, n, k) = set.Bbold.transpose();
  F0.block(2 * n, 2 * n, k, k) = -set.Abold;
  F0.block(2 * n + k, 2 * n + k, n, n) = eps_P * Matrix::Identity(n, n);
  main.constant = -F0;

  const int row_p = 2 * n;       // rows of the [P; Y] block
  const int row_y = 2 * n + n;
  const int col_pw = n;          // its column offset
  const int eps_off = 2 * n + k;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const int v = L.p_var(i, j);
      // M contains -P twice and P in the off-diagonal block; eps block -P.
      // The barrier block is the negation.
      main.add_symmetric(v, i, j, 1.0);
      main.add_symmetric(v, n + i, n + j, 1.0);
      main.add_symmetric(v, eps_off + i, eps_off + j, 1.0);
      main.add_symmetric(v, row_p + i, col_pw + j, -1.0);
      if (i != j) main.add_symmetric(v, row_p + j, col_pw + i, -1.0);
    }
  }
  for (int i = 0; i < L.m; ++i)
    for (int j = 0; j < n; ++j)
      main.add_symmetric(L.y_var(i, j), row_y + i, col_pw + j, -1.0);
  for (int d = 0; d < main_size; ++d) main.add_symmetric(L.s_index, d, d, 1.0);

  const int box_size = L.num_vars;  // 1 + (num_p + num_y)
  lmi::AffineBlock box(box_size, L.num_vars);
  box.constant = kSearchRadius * Matrix::Identity(box_size, box_size);
  for (int v = 0; v < L.num_p + L.num_y; ++v)
    box.add_symmetric(v, 0, v + 1, 1.0);

  lmi::Problem problem;
  problem.num_vars = L.num_vars;
  problem.objective = Vector::Zero(L.num_vars);
  problem.objective(L.s_index) = 1.0;
  problem.blocks.push_back(std::move(main));
  problem.blocks.push_back(std::move(box));
  return problem;
}

double set_scale(const QmiSet& set) {
  return std::max({spectral_norm(set.Abold), spectral_norm(set.Bbold),
                   spectral_norm(set.Cbold), 1e-300});
}

}  // namespace

std::string to_string(SynthesisStatus status) {
  switch (status) {
    case SynthesisStatus::kFeasible: return "feasible";
    case SynthesisStatus::kInfeasible: return "infeasible";
    case SynthesisStatus::kNumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

Matrix ConeProblem::block(const Matrix& P, const Matrix& Y) const {
  const Eigen::Index n = this->n(), k = set.Abold.rows();
  require_dims(P.rows() == n && P.cols() == n, "P must be n x n");
  require_dims(Y.rows() == k - n && Y.cols() == n, "Y must be m x n");
  Matrix M = Matrix::Zero(2 * n + k, 2 * n + k);
  M.block(0, 0, n, n) = -P - set.Cbold;
  M.block(n, n, n, n) = -P;
  M.block(2 * n, 0, k, n) = set.Bbold;
  M.block(0, 2 * n, n, k) = set.Bbold.transpose();
  const Matrix PY = vstack(P, Y);
  M.block(2 * n, n, k, n) = PY;
  M.block(n, 2 * n, n, k) = PY.transpose();
  M.block(2 * n, 2 * n, k, k) = -set.Abold;
  return M;
}

ConeProblem assemble_lmi(const QmiSet& set) {
  validate(set);
  ConeProblem problem;
  problem.set = set;
  problem.eps_strict = 1e-7 * (1.0 + spectral_norm(set.Cbold));
  return problem;
}

bool certificate_holds(const ConeProblem& problem,
                       const SynthesisOutcome& out) {
  if (out.P.rows() != problem.n() || out.Y.rows() != problem.m()) return false;
  if (lambda_min_sym(out.P) < problem.eps_P) return false;
  const double kp_gap = spectral_norm(out.K * out.P - out.Y) /
                        (1.0 + spectral_norm(out.Y));
  if (!(kp_gap <= 1e-8)) return false;
  return lambda_max_sym(problem.block(out.P, out.Y)) <= -problem.eps_strict;
}

SynthesisOutcome solve_feasibility(const ConeProblem& problem,
                                   const FeasibilityOptions& options) {
  const Layout L(static_cast<int>(problem.n()), static_cast<int>(problem.m()));
  const double alpha = set_scale(problem.set);
  QmiSet scaled = problem.set;
  scaled.Abold /= alpha;
  scaled.Bbold /= alpha;
  scaled.Cbold /= alpha;
  const double eps_norm = problem.eps_strict / alpha;
  // Ask a little more of the solver than the certificate demands so that
  // rescaling round-off cannot push the recomputed margin below eps_strict.
  const double target = -2.0 * eps_norm;

  const lmi::Problem barrier =
      build_barrier_problem(L, scaled, problem.eps_P / alpha);

  Vector z0 = Vector::Zero(L.num_vars);
  for (int i = 0; i < L.n; ++i) z0(L.p_var(i, i)) = 1.0;
  {
    const Matrix F = -(lmi::evaluate(barrier.blocks[0], z0));
    z0(L.s_index) = lambda_max_sym(F) + 1.0;
  }

  lmi::Options opts;
  opts.gap_tol = 0.1 * eps_norm;
  if (options.early_exit) {
    opts.stop_below = target;
    opts.stop_lower_bound_above = target;
  }
  const lmi::Result res = lmi::minimize(barrier, z0, opts);

  SynthesisOutcome out;
  out.eps_strict = problem.eps_strict;
  if (res.status == lmi::Status::kFailed && !(res.objective < target)) {
    out.status = SynthesisStatus::kNumericalFailure;
    return out;
  }
  out.P = alpha * unpack_p(L, res.z);
  out.Y = alpha * unpack_y(L, res.z);
  Eigen::LLT<Matrix> llt(out.P);
  if (llt.info() == Eigen::Success) {
    out.K = llt.solve(out.Y.transpose()).transpose();
    out.margin = -lambda_max_sym(problem.block(out.P, out.Y));
  } else {
    out.K = Matrix::Zero(L.m, L.n);
    out.margin = -std::numeric_limits<double>::infinity();
  }
  out.status = certificate_holds(problem, out) ? SynthesisStatus::kFeasible
                                               : SynthesisStatus::kInfeasible;
  return out;
}

bool trace_is_monotone(const std::vector<std::pair<double, bool>>& trace) {
  auto sorted = trace;
  std::sort(sorted.begin(), sorted.end());
  bool seen_infeasible = false;
  for (const auto& [gamma, feasible] : sorted) {
    if (feasible && seen_infeasible) return false;
    if (!feasible) seen_infeasible = true;
  }
  return true;
}

namespace {

SynthesisOutcome bisect_gamma(const std::function<QmiSet(double)>& set_at,
                              double gamma_hi, const BisectionOptions& options) {
  std::vector<std::pair<double, bool>> trace;
  auto check = [&](double gamma) {
    SynthesisOutcome out =
        solve_feasibility(assemble_lmi(set_at(gamma)), {.early_exit = true});
    if (out.status == SynthesisStatus::kNumericalFailure) return out;
    trace.emplace_back(gamma, out.feasible());
    return out;
  };

  SynthesisOutcome best = check(0.0);
  if (!best.feasible()) {
    best.gamma_bar = 0.0;
    best.trace = trace;
    return best;
  }
  double lo = 0.0, hi = gamma_hi;
  for (int i = 0; i <= options.max_doublings; ++i) {
    SynthesisOutcome out = check(hi);
    if (out.status == SynthesisStatus::kNumericalFailure) {
      out.trace = trace;
      return out;
    }
    if (!out.feasible()) break;
    lo = hi;
    best = std::move(out);
    hi *= 2.0;
  }
  while (hi - lo > options.tolerance) {
    const double mid = 0.5 * (lo + hi);
    SynthesisOutcome out = check(mid);
    if (out.status == SynthesisStatus::kNumericalFailure) {
      out.trace = trace;
      return out;
    }
    if (out.feasible()) {
      lo = mid;
      best = std::move(out);
    } else {
      hi = mid;
    }
  }

  // Re-solve at the certified radius for the largest available margin.
  SynthesisOutcome polished = solve_feasibility(assemble_lmi(set_at(lo)));
  if (polished.feasible() && polished.margin > best.margin)
    best = std::move(polished);
  best.gamma_bar = lo;
  best.trace = std::move(trace);
  if (!trace_is_monotone(best.trace))
    best.status = SynthesisStatus::kNumericalFailure;
  return best;
}

}  // namespace

SynthesisOutcome maximize_gamma_clean(const Matrix& X0, const Matrix& X1,
                                      const Matrix& V0,
                                      const BisectionOptions& options) {
  const QmiSet base = clean_singleton_set(X0, X1, V0);
  const double hi = spectral_norm(base.Bbold) + 1.0;
  return bisect_gamma(
      [&](double gamma) {
        QmiSet set = base;
        set.Cbold -= gamma * gamma * Matrix::Identity(set.n(), set.n());
        return set;
      },
      hi, options);
}

SynthesisOutcome maximize_gamma_noisy(const Matrix& X0, const Matrix& X1,
                                      const Matrix& V0, const Matrix& Delta,
                                      const BisectionOptions& options) {
  const QmiSet base = noisy_consistency_set(X0, X1, V0, Delta);
  const double hi = spectral_norm(to_center_form(base).zeta) + 1.0;
  return bisect_gamma(
      [&](double gamma) { return overapproximate_inflated(base, gamma); }, hi,
      options);
}

}  // namespace privctl
