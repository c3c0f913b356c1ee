#include "privctl/lmi_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace privctl::lmi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// -log det of every block, or +inf if some block is not positive definite.
double barrier_value(const Problem& p, const Vector& z) {
  double value = 0.0;
  for (const auto& block : p.blocks) {
    Eigen::LLT<Matrix> llt(evaluate(block, z));
    if (llt.info() != Eigen::Success) return kInf;
    const auto diag = llt.matrixLLT().diagonal();
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
      if (!(diag(i) > 0.0)) return kInf;
      value -= 2.0 * std::log(diag(i));
    }
  }
  return value;
}

// Gradient and Hessian of the barrier term.
bool barrier_derivatives(const Problem& p, const Vector& z, Vector& grad,
                         Matrix& hess) {
  const int N = p.num_vars;
  grad.setZero(N);
  hess.setZero(N, N);
  for (const auto& block : p.blocks) {
    const Matrix S = evaluate(block, z);
    Eigen::LLT<Matrix> llt(S);
    if (llt.info() != Eigen::Success) return false;
    const Matrix W = llt.solve(Matrix::Identity(S.rows(), S.cols()));
    for (int i = 0; i < N; ++i) {
      const auto& Di = block.coeffs[i];
      if (Di.empty()) continue;
      double g = 0.0;
      for (const auto& e : Di) g += e.value * W(e.col, e.row);
      grad(i) -= g;
      for (int j = i; j < N; ++j) {
        const auto& Dj = block.coeffs[j];
        if (Dj.empty()) continue;
        double h = 0.0;
        for (const auto& a : Di)
          for (const auto& b : Dj)
            h += a.value * b.value * W(a.col, b.row) * W(b.col, a.row);
        hess(i, j) += h;
        if (j != i) hess(j, i) += h;
      }
    }
  }
  return true;
}

}  // namespace

AffineBlock::AffineBlock(int size, int num_vars)
    : constant(Matrix::Zero(size, size)), coeffs(num_vars) {}

void AffineBlock::add_symmetric(int var, int r, int c, double v) {
  coeffs[var].push_back({r, c, v});
  if (r != c) coeffs[var].push_back({c, r, v});
}

Matrix evaluate(const AffineBlock& block, const Vector& z) {
  Matrix S = block.constant;
  for (std::size_t i = 0; i < block.coeffs.size(); ++i) {
    const double zi = z(static_cast<Eigen::Index>(i));
    if (zi == 0.0) continue;
    for (const auto& e : block.coeffs[i]) S(e.row, e.col) += zi * e.value;
  }
  return S;
}

Result minimize(const Problem& problem, const Vector& z0,
                const Options& options) {
  Result result;
  result.z = z0;
  const Vector& c = problem.objective;
  if (!std::isfinite(barrier_value(problem, z0))) {
    result.status = Status::kFailed;
    return result;
  }

  double barrier_dim = 0.0;
  for (const auto& block : problem.blocks) barrier_dim += block.size();

  Vector z = z0;
  Vector grad;
  Matrix hess;
  double t = options.t0;
  result.lower_bound = -kInf;

  while (true) {
    // Centering: Newton's method on t c^T z + barrier(z).
    double f = t * c.dot(z) + barrier_value(problem, z);
    const int first_step = result.newton_steps;
    bool stalled = false;
    while (true) {
      if (result.newton_steps >= options.max_newton_steps ||
          result.newton_steps - first_step >= options.max_centering_steps) {
        stalled = true;
        break;
      }
      if (!barrier_derivatives(problem, z, grad, hess)) {
        stalled = true;
        break;
      }
      const Vector g = t * c + grad;
      Eigen::LDLT<Matrix> ldlt(hess);
      if (ldlt.info() != Eigen::Success) {
        stalled = true;
        break;
      }
      const Vector dz = -ldlt.solve(g);
      const double decrement = -g.dot(dz);
      if (!std::isfinite(decrement)) {
        stalled = true;
        break;
      }
      ++result.newton_steps;
      // At large t the decrement can sit below the rounding of f itself.
      const double roundoff = 1e3 * std::numeric_limits<double>::epsilon() *
                              (1.0 + std::abs(f));
      if (decrement / 2.0 <= std::max(options.newton_tol, roundoff)) break;

      double step = 1.0;
      double f_new = kInf;
      Vector z_new;
      for (int k = 0; k < 60; ++k) {
        z_new = z + step * dz;
        const double b = barrier_value(problem, z_new);
        if (std::isfinite(b)) {
          f_new = t * c.dot(z_new) + b;
          if (f_new <= f - 0.01 * step * decrement) break;
        }
        step *= 0.5;
      }
      if (!std::isfinite(f_new) || f_new > f) {
        stalled = true;
        break;
      }
      z = z_new;
      f = f_new;
      if (options.stop_below && c.dot(z) < *options.stop_below) {
        result.z = z;
        result.objective = c.dot(z);
        result.status = Status::kReachedTarget;
        return result;
      }
    }

    result.z = z;
    result.objective = c.dot(z);
    if (options.stop_below && result.objective < *options.stop_below) {
      result.status = Status::kReachedTarget;
      return result;
    }
    if (stalled) {
      result.status = Status::kStalled;
      return result;
    }
    result.lower_bound = result.objective - barrier_dim / t;
    if (options.stop_lower_bound_above &&
        result.lower_bound > *options.stop_lower_bound_above) {
      result.status = Status::kBoundExceeded;
      return result;
    }
    if (barrier_dim / t < options.gap_tol) {
      result.status = Status::kConverged;
      return result;
    }
    t *= options.mu;
  }
}

}  // namespace privctl::lmi
