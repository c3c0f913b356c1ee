#pragma once

#include <string>
#include <vector>

#include "privctl/audit.hpp"
#include "privctl/linalg.hpp"
#include "privctl/plant.hpp"
#include "privctl/privacy_transform.hpp"

namespace privctl {

// Bias injection against a norm-threshold detector r(t) = x(t),
// alarm when ||r(t)|| > delta_alpha for t >= T_a. The attacker drives an
// additive actuator offset a(t) to a constant a_inf chosen from its own
// model of the closed loop.

/// Knowledge levels of the attacker.
///   I   exact closed loop and B
///   II  only what the cloud view reveals (A_bar + B_bar K_bar, B_bar)
///   III cloud view, with B_bar rescaled to the true ||B||
///   IV  cloud-view closed loop with the true B
enum class Policy { kI, kII, kIII, kIV };

std::string to_string(Policy policy);
Policy parse_policy(const std::string& tag);

struct AttackConfig {
  double beta = 0.5;
  double delta_alpha = 0.2;
  int T_inj = 10;
  int T_a = 400;
  int T_end = 500;
  Policy policy = Policy::kI;

  void validate() const;
};

struct PolicyModel {
  Matrix A_cl_hat;
  Matrix B_cl_hat;
};

/// Ground truth the attack experiments compare against.
struct GroundTruth {
  Plant plant;
  TransformKeys keys;
  Matrix K_bar;
};

PolicyModel build_policy_model(Policy policy, const GroundTruth& truth,
                               const CloudView& view);

/// Minimum-energy a_inf whose believed steady-state impact
/// ||(I - A_cl_hat)^{-1} B_cl_hat a_inf|| equals delta_alpha.
Vector design_bias(const PolicyModel& model, double delta_alpha);

/// (I - A_cl)^{-1} B a.
Vector steady_state_impact(const Matrix& A_cl, const Matrix& B, const Vector& a);

struct AttackTrajectory {
  std::vector<Vector> x;   // x(0) .. x(T_end)
  std::vector<Vector> a;   // a(0) .. a(T_end)
  std::vector<double> residual_norm;  // ||x(t)||, all t
  double steady_residual = 0.0;       // mean ||x|| over the last 10%
};

/// Simulates x(t+1) = A x + B (K_star x + a) from x0 with the attack
/// recursion a(t+1) = beta a(t) + (1 - beta) a_inf for t >= T_inj.
AttackTrajectory simulate_attack(const Plant& plant, const Matrix& K_star,
                                 const AttackConfig& config,
                                 const Vector& a_inf, const Vector& x0);

/// Zero initial state.
AttackTrajectory simulate_attack(const Plant& plant, const Matrix& K_star,
                                 const AttackConfig& config,
                                 const Vector& a_inf);

}  // namespace privctl
