#include "privctl/adversary.hpp"

#include <cmath>

namespace privctl {

std::string to_string(Policy policy) {
  switch (policy) {
    case Policy::kI: return "I";
    case Policy::kII: return "II";
    case Policy::kIII: return "III";
    case Policy::kIV: return "IV";
  }
  return "?";
}

Policy parse_policy(const std::string& tag) {
  if (tag == "I") return Policy::kI;
  if (tag == "II") return Policy::kII;
  if (tag == "III") return Policy::kIII;
  if (tag == "IV") return Policy::kIV;
  throw Error("unknown attack policy '" + tag + "'");
}

void AttackConfig::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw Error("beta must lie in (0, 1)");
  if (!(delta_alpha >= 0.0)) throw Error("delta_alpha must be non-negative");
  if (!(T_inj >= 0 && T_inj < T_a && T_a < T_end))
    throw Error("need 0 <= T_inj < T_a < T_end");
}

PolicyModel build_policy_model(Policy policy, const GroundTruth& truth,
                               const CloudView& view) {
  const Matrix& K_bar = view.K_bar;
  switch (policy) {
    case Policy::kI: {
      const Matrix& A = truth.plant.A;
      const Matrix& B = truth.plant.B;
      return {A + B * truth.keys.F2 + (B + B * truth.keys.G2) * K_bar, B};
    }
    case Policy::kII: {
      const SystemPair pair = identify_transformed_pair(view);
      return {pair.A + pair.B * K_bar, pair.B};
    }
    case Policy::kIII: {
      const SystemPair pair = identify_transformed_pair(view);
      const double scale =
          spectral_norm(truth.plant.B) / spectral_norm(pair.B);
      return {pair.A + pair.B * K_bar, scale * pair.B};
    }
    case Policy::kIV: {
      const SystemPair pair = identify_transformed_pair(view);
      return {pair.A + pair.B * K_bar, truth.plant.B};
    }
  }
  throw Error("unknown attack policy");
}

Vector steady_state_impact(const Matrix& A_cl, const Matrix& B,
                           const Vector& a) {
  const Eigen::Index n = A_cl.rows();
  Eigen::FullPivLU<Matrix> lu(Matrix::Identity(n, n) - A_cl);
  if (!lu.isInvertible())
    throw SingularMatrixError("I - A_cl is singular: no steady state");
  return lu.solve(B * a);
}

Vector design_bias(const PolicyModel& model, double delta_alpha) {
  if (!(delta_alpha >= 0.0)) throw Error("delta_alpha must be non-negative");
  const Eigen::Index n = model.A_cl_hat.rows();
  require_dims(model.A_cl_hat.cols() == n && model.B_cl_hat.rows() == n,
               "policy model shapes");
  Eigen::FullPivLU<Matrix> lu(Matrix::Identity(n, n) - model.A_cl_hat);
  if (!lu.isInvertible())
    throw SingularMatrixError(
        "believed closed loop has an eigenvalue at 1: attack undefined");
  const Matrix M = lu.solve(model.B_cl_hat);
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinV);
  const double sigma = svd.singularValues()(0);
  if (!(sigma > 0.0)) throw Error("attack has no reachable impact");
  Vector v = svd.matrixV().col(0);
  // Fix the sign so the choice is reproducible: first nonzero entry positive.
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0) v = -v;
      break;
    }
  }
  return (delta_alpha / sigma) * v;
}

AttackTrajectory simulate_attack(const Plant& plant, const Matrix& K_star,
                                 const AttackConfig& config,
                                 const Vector& a_inf, const Vector& x0) {
  config.validate();
  const Eigen::Index n = plant.n(), m = plant.m();
  require_dims(K_star.rows() == m && K_star.cols() == n, "K_star must be m x n");
  require_dims(a_inf.size() == m && x0.size() == n, "a_inf, x0 sizes");
  const Matrix A_cl = plant.A + plant.B * K_star;
  if (!(spectral_radius(A_cl) < 1.0))
    throw Error("closed loop is not Schur stable; no steady state exists");

  AttackTrajectory traj;
  traj.x.reserve(config.T_end + 1);
  traj.a.reserve(config.T_end + 1);
  Vector x = x0;
  Vector a = Vector::Zero(m);
  for (int t = 0; t <= config.T_end; ++t) {
    traj.x.push_back(x);
    traj.a.push_back(a);
    traj.residual_norm.push_back(x.norm());
    x = A_cl * x + plant.B * a;
    if (t >= config.T_inj)
      a = config.beta * a + (1.0 - config.beta) * a_inf;
  }
  const int window = std::max(1, (config.T_end + 1) / 10);
  double sum = 0.0;
  for (int t = config.T_end + 1 - window; t <= config.T_end; ++t)
    sum += traj.residual_norm[t];
  traj.steady_residual = sum / window;
  return traj;
}

AttackTrajectory simulate_attack(const Plant& plant, const Matrix& K_star,
                                 const AttackConfig& config,
                                 const Vector& a_inf) {
  return simulate_attack(plant, K_star, config, a_inf,
                         Vector::Zero(plant.n()));
}

}  // namespace privctl
