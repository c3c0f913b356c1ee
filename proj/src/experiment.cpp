#include "privctl/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace privctl {

namespace fs = std::filesystem;

namespace {

// Independent random streams derived from one trial seed.
enum Stream : std::uint64_t {
  kStreamData = 1,
  kStreamAttackState = 2,
  kStreamAudit = 3,
};

double parse_number(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size())
    throw Error("config key '" + key + "': cannot parse '" + value + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_number(key, value);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw Error("config key '" + key + "': expected an integer");
  return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::istringstream in(value);
  std::string field;
  while (std::getline(in, field, ',')) {
    field.erase(0, field.find_first_not_of(" \t"));
    field.erase(field.find_last_not_of(" \t") + 1);
    out.push_back(parse_number(key, field));
  }
  if (out.empty()) throw Error("config key '" + key + "': empty list");
  return out;
}

Range parse_range(const std::string& key, const std::string& value) {
  const auto v = parse_list(key, value);
  if (v.size() != 2) throw Error("config key '" + key + "': expected lo,hi");
  return {v[0], v[1]};
}

double matrix_gap(const Matrix& a, const Matrix& b) {
  return spectral_norm(a - b) / (1.0 + spectral_norm(b));
}

void write_trajectory_csv(const fs::path& path, const AttackTrajectory& traj) {
  const Eigen::Index n = traj.x.front().size();
  const Eigen::Index m = traj.a.front().size();
  std::string out = "t";
  for (Eigen::Index i = 0; i < n; ++i) out += ",x_" + std::to_string(i + 1);
  for (Eigen::Index i = 0; i < m; ++i) out += ",a_" + std::to_string(i + 1);
  out += ",residual_norm\n";
  for (std::size_t t = 0; t < traj.x.size(); ++t) {
    out += std::to_string(t);
    for (Eigen::Index i = 0; i < n; ++i) out += "," + format_double(traj.x[t](i));
    for (Eigen::Index i = 0; i < m; ++i) out += "," + format_double(traj.a[t](i));
    out += "," + format_double(traj.residual_norm[t]) + "\n";
  }
  write_text(path, out);
}

void write_secret_keys(const fs::path& dir, const TransformKeys& keys) {
  fs::create_directories(dir);
  write_text(dir / "SECRET",
             "Client-side masking keys. Never copy into the cloud exchange.\n");
  write_matrix_csv(dir / "F1.csv", "F1", keys.F1);
  write_matrix_csv(dir / "G1.csv", "G1", keys.G1);
  if (keys.F2.size()) {
    write_matrix_csv(dir / "F2.csv", "F2", keys.F2);
    write_matrix_csv(dir / "G2.csv", "G2", keys.G2);
  }
}

void write_cloud_outputs(const fs::path& dir, const SynthesisOutcome& out) {
  write_text(dir / "status.txt", to_string(out.status) + "\n");
  write_text(dir / "gamma.txt", format_double(out.gamma_bar) + "\n");
  if (out.feasible()) {
    write_matrix_csv(dir / "P.csv", "P", out.P);
    write_matrix_csv(dir / "Y.csv", "Y", out.Y);
    write_matrix_csv(dir / "K.csv", "K", out.K);
  }
}

}  // namespace

// ---------------------------------------------------------------- config

void ExperimentConfig::validate() const {
  if (T < 1) throw Error("T must be at least 1");
  for (const auto& [name, r] : {std::pair{"input_range", input_range},
                                std::pair{"x0_range", x0_range},
                                std::pair{"key_range", key_range}})
    if (!(r.lo < r.hi)) throw Error(std::string(name) + " must satisfy lo < hi");
  if (!(rho > 0.0 && rho <= 1.0)) throw Error("rho must lie in (0, 1]");
  if (!(d_max >= 0.0)) throw Error("d_max must be non-negative");
  for (double d : d_max_grid)
    if (!(d >= 0.0)) throw Error("d_max_grid entries must be non-negative");
  if (trials < 1 || attack_trials < 1) throw Error("trials must be at least 1");
  attack(Policy::kI).validate();
}

AttackConfig ExperimentConfig::attack(Policy policy) const {
  AttackConfig a;
  a.beta = beta;
  a.delta_alpha = delta_alpha;
  a.T_inj = T_inj;
  a.T_a = T_a;
  a.T_end = T_end;
  a.policy = policy;
  return a;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "plant", "T",      "input_range", "x0_range",      "key_range",
      "rho",   "d_max",  "d_max_grid",  "trials",        "attack_trials",
      "seed",  "beta",   "delta_alpha", "T_inj",         "T_a",
      "T_end", "B_norm_bound", "out"};
  return keys;
}

void apply_setting(ExperimentConfig& c, const std::string& key,
                   const std::string& value) {
  if (key == "plant") c.plant = value;
  else if (key == "T") c.T = parse_int(key, value);
  else if (key == "input_range") c.input_range = parse_range(key, value);
  else if (key == "x0_range") c.x0_range = parse_range(key, value);
  else if (key == "key_range") c.key_range = parse_range(key, value);
  else if (key == "rho") c.rho = parse_number(key, value);
  else if (key == "d_max") c.d_max = parse_number(key, value);
  else if (key == "d_max_grid") c.d_max_grid = parse_list(key, value);
  else if (key == "trials") c.trials = parse_int(key, value);
  else if (key == "attack_trials") c.attack_trials = parse_int(key, value);
  else if (key == "seed") {
    const double v = parse_number(key, value);
    if (v < 0 || v != std::floor(v)) throw Error("seed must be a non-negative integer");
    c.seed = static_cast<std::uint64_t>(std::stoull(value));
  }
  else if (key == "beta") c.beta = parse_number(key, value);
  else if (key == "delta_alpha") c.delta_alpha = parse_number(key, value);
  else if (key == "T_inj") c.T_inj = parse_int(key, value);
  else if (key == "T_a") c.T_a = parse_int(key, value);
  else if (key == "T_end") c.T_end = parse_int(key, value);
  else if (key == "B_norm_bound") c.B_norm_bound = parse_number(key, value);
  else if (key == "out") c.out = value;
  else throw Error("unknown config key '" + key + "'");
}

void apply_settings(ExperimentConfig& config, const KeyValues& kv) {
  for (const auto& [k, v] : kv) apply_setting(config, k, v);
}

Plant load_plant(const std::string& source) {
  if (source == "batch-reactor") return batch_reactor();
  const fs::path dir(source);
  if (!fs::is_directory(dir))
    throw Error("plant must be 'batch-reactor' or a directory with A.csv, B.csv");
  return Plant(read_matrix_csv(dir / "A.csv"), read_matrix_csv(dir / "B.csv"));
}

// -------------------------------------------------------------- pipeline

CloudView PipelineResult::cloud_view() const {
  CloudView view;
  view.X0 = masked.X0;
  view.X1 = masked.X1;
  view.V0 = masked.V0;
  if (disturbance) view.Delta = disturbance->Delta;
  view.gamma_bar = outcome.gamma_bar;
  view.K_bar = outcome.K;
  return view;
}

GroundTruth PipelineResult::ground_truth() const {
  return {plant, keys, outcome.K};
}

PipelineResult run_pipeline(const Plant& plant, const ExperimentConfig& config,
                            std::uint64_t seed, double d_max) {
  const Eigen::Index n = plant.n(), m = plant.m();
  PipelineResult r;
  r.seed = seed;
  r.plant = plant;

  try {
    Rng rng(seed, kStreamData);
    const Matrix x0 = rng.uniform_matrix(n, 1, config.x0_range.lo, config.x0_range.hi);
    const Matrix inputs =
        rng.uniform_matrix(m, config.T, config.input_range.lo, config.input_range.hi);
    std::optional<Matrix> D0;
    if (d_max > 0.0) {
      auto dist = generate_uniform_disturbance(n, config.T, d_max, seed);
      D0 = dist.D0;
      r.disturbance = dist.model;
    }
    r.data = simulate_collect(plant, x0.col(0), inputs, D0);
    if (!check_rank_assumption(r.data))
      throw Error("[X0; U0] is not full row rank (need T >= n + m = " +
                  std::to_string(n + m) + " and exciting inputs; T = " +
                  std::to_string(config.T) + ")");
    Rng state_rng(seed, kStreamAttackState);
    r.x0_attack =
        state_rng.uniform_matrix(n, 1, config.x0_range.lo, config.x0_range.hi).col(0);
  } catch (const Error& e) {
    throw StageError("collect", e.what());
  }

  try {
    const StageOneKeys k1 = generate_stage1_keys(n, m, seed, config.key_range.lo,
                                                 config.key_range.hi);
    r.keys.F1 = k1.F1;
    r.keys.G1 = k1.G1;
    r.masked = pre_process(r.data, k1.F1, k1.G1);
  } catch (const Error& e) {
    throw StageError("pre-process", e.what());
  }

  try {
    r.outcome = r.disturbance
                    ? maximize_gamma_noisy(r.masked.X0, r.masked.X1, r.masked.V0,
                                           r.disturbance->Delta)
                    : maximize_gamma_clean(r.masked.X0, r.masked.X1, r.masked.V0);
  } catch (const Error& e) {
    throw StageError("synthesize", e.what());
  }
  if (!r.outcome.feasible() || !(r.outcome.gamma_bar > 0.0)) return r;

  try {
    r.keys.B_norm_bound =
        config.B_norm_bound > 0.0 ? config.B_norm_bound : spectral_norm(plant.B);
    const StageTwoKeys k2 = generate_stage2_keys(
        r.keys.F1, r.keys.G1, r.outcome.K, r.outcome.gamma_bar,
        r.keys.B_norm_bound, seed,
        {.fill = config.rho, .lo = config.key_range.lo, .hi = config.key_range.hi});
    r.keys.F2 = k2.F2;
    r.keys.G2 = k2.G2;
    r.K_star = post_process(k2.F2, k2.G2, r.outcome.K);
    r.closed_loop_radius = spectral_radius(plant.A + plant.B * r.K_star);
  } catch (const Error& e) {
    throw StageError("post-process", e.what());
  }
  return r;
}

// ------------------------------------------------------- cloud exchange

void write_cloud_inputs(const fs::path& dir, const MaskedData& masked,
                        const std::optional<DisturbanceModel>& disturbance) {
  fs::create_directories(dir);
  write_matrix_csv(dir / "X0.csv", "X0", masked.X0);
  write_matrix_csv(dir / "X1.csv", "X1", masked.X1);
  write_matrix_csv(dir / "V0.csv", "V0", masked.V0);
  KeyValues manifest{{"n", std::to_string(masked.n())},
                     {"m", std::to_string(masked.m())},
                     {"T", std::to_string(masked.X0.cols())},
                     {"mode", disturbance ? "noisy" : "clean"}};
  if (disturbance) write_matrix_csv(dir / "delta.csv", "Delta", disturbance->Delta);
  write_key_values(dir / "manifest.txt", manifest);
}

SynthesisOutcome synthesize_exchange(const fs::path& dir,
                                     const BisectionOptions& options) {
  const KeyValues manifest = read_key_values(dir / "manifest.txt");
  auto get = [&](const std::string& k) {
    auto it = manifest.find(k);
    if (it == manifest.end()) throw FormatError("manifest lacks '" + k + "'");
    return it->second;
  };
  const long n = std::stol(get("n")), m = std::stol(get("m")), T = std::stol(get("T"));
  const std::string mode = get("mode");
  const Matrix X0 = read_matrix_csv(dir / "X0.csv");
  const Matrix X1 = read_matrix_csv(dir / "X1.csv");
  const Matrix V0 = read_matrix_csv(dir / "V0.csv");
  if (X0.rows() != n || X1.rows() != n || V0.rows() != m || X0.cols() != T ||
      X1.cols() != T || V0.cols() != T)
    throw FormatError("exchange matrices disagree with the manifest");

  SynthesisOutcome out;
  if (mode == "clean") {
    out = maximize_gamma_clean(X0, X1, V0, options);
  } else if (mode == "noisy") {
    out = maximize_gamma_noisy(X0, X1, V0, read_matrix_csv(dir / "delta.csv"),
                               options);
  } else {
    throw FormatError("manifest mode must be 'clean' or 'noisy'");
  }
  write_cloud_outputs(dir, out);
  return out;
}

// ----------------------------------------------------------------- audit

AuditSummary audit_pipeline(const PipelineResult& r, int alternatives,
                            std::uint64_t seed, bool grant_disturbance) {
  if (!r.outcome.feasible() || r.K_star.size() == 0)
    throw Error("audit needs a feasible pipeline result");
  const GroundTruth truth = r.ground_truth();
  const Plant& plant = truth.plant;
  const Eigen::Index n = plant.n(), m = plant.m();

  CloudView view = r.cloud_view();
  if (grant_disturbance) view.X1 = view.X1 - r.data.D0;
  const SystemPair pair = identify_transformed_pair(view);
  // Without D0 the auditor can only ask alternatives to match the cloud's
  // own least-squares fit; with exact data that fit is X1 itself.
  const Matrix target = (grant_disturbance || !r.disturbance)
                            ? view.X1
                            : Matrix(pair.A * view.X0 + pair.B * view.V0);

  AuditSummary s;
  const Matrix A_true_bar = plant.A + plant.B * r.keys.F1;
  const Matrix B_true_bar = plant.B + plant.B * r.keys.G1;
  s.identification_error = std::max(matrix_gap(pair.A, A_true_bar),
                                    matrix_gap(pair.B, B_true_bar));

  Rng rng(seed, kStreamAudit);
  std::vector<AlternativeSystem> found;
  for (int k = 0; k < alternatives; ++k) {
    Matrix F_tilde = rng.uniform_matrix(m, n, -1.0, 1.0);
    Matrix G_tilde = rng.uniform_matrix(m, m, -1.0, 1.0);
    while (numerical_rank(G_tilde) < m) G_tilde = rng.uniform_matrix(m, m, -1.0, 1.0);
    const AlternativeSystem alt =
        construct_alternative_system(pair.A, pair.B, plant.B, F_tilde, G_tilde);
    ++s.alternatives;
    const Matrix A_eff = alt.A_hat + alt.B_hat * alt.F1_hat;
    const Matrix B_eff = alt.B_hat * (Matrix::Identity(m, m) + alt.G1_hat);
    const double res = data_consistency_residual(view.X0, target, view.V0, A_eff, B_eff);
    s.max_alternative_residual = std::max(s.max_alternative_residual, res);
    if (res <= 1e-9) ++s.alternatives_consistent;
    bool distinct = matrix_gap(alt.A_hat, plant.A) > 1e-6 ||
                    matrix_gap(alt.B_hat, plant.B) > 1e-6;
    for (const auto& prev : found)
      distinct = distinct && (matrix_gap(alt.A_hat, prev.A_hat) > 1e-6 ||
                              matrix_gap(alt.B_hat, prev.B_hat) > 1e-6);
    if (distinct) ++s.alternatives_distinct;
    found.push_back(alt);
  }

  const ClosedLoopGap gap = closed_loop_gap(plant, r.keys, r.outcome.K);
  s.delta_norm = spectral_norm(gap.Delta);
  s.delta_threshold = closed_loop_gap_threshold(plant, r.keys);
  s.closed_loop_identity_error =
      spectral_norm(gap.A_cl_bar + gap.Delta - (plant.A + plant.B * r.K_star));
  return s;
}

// ------------------------------------------------------------ case study

CaseStudyReport run_case_study(const ExperimentConfig& config) {
  config.validate();
  const Plant plant = load_plant(config.plant);
  CaseStudyReport rep;
  rep.result = run_pipeline(plant, config, config.seed, config.d_max);
  rep.open_loop_radius = spectral_radius(plant.A);
  const PipelineResult& r = rep.result;

  const fs::path out = config.out;
  fs::create_directories(out);
  write_cloud_inputs(out / "cloud", r.masked, r.disturbance);
  write_cloud_outputs(out / "cloud", r.outcome);
  write_secret_keys(out / "secret", r.keys);

  KeyValues report{{"status", to_string(r.outcome.status)},
                   {"gamma_bar", format_double(r.outcome.gamma_bar)},
                   {"margin", format_double(r.outcome.margin)},
                   {"eps_strict", format_double(r.outcome.eps_strict)},
                   {"open_loop_spectral_radius", format_double(rep.open_loop_radius)},
                   {"seed", std::to_string(config.seed)},
                   {"d_max", format_double(config.d_max)}};
  if (r.outcome.feasible() && r.K_star.size()) {
    report["closed_loop_spectral_radius"] = format_double(r.closed_loop_radius);
    const SystemPair pair = identify_transformed_pair(r.cloud_view());
    const Matrix A_cl_bar = pair.A + pair.B * r.outcome.K;
    report["cloud_closed_loop_spectral_radius"] = format_double(spectral_radius(A_cl_bar));
    write_matrix_csv(out / "K_bar.csv", "K_bar", r.outcome.K);
    write_matrix_csv(out / "K_star.csv", "K_star", r.K_star);

    rep.audit = audit_pipeline(r, 10, config.seed, r.disturbance.has_value());
    std::string audit =
        "seed,identification_error,alternatives,alternatives_consistent,"
        "alternatives_distinct,max_alternative_residual,delta_norm,"
        "delta_threshold,closed_loop_identity_error,closed_loop_spectral_radius\n";
    audit += std::to_string(config.seed) + "," +
             format_double(rep.audit.identification_error) + "," +
             std::to_string(rep.audit.alternatives) + "," +
             std::to_string(rep.audit.alternatives_consistent) + "," +
             std::to_string(rep.audit.alternatives_distinct) + "," +
             format_double(rep.audit.max_alternative_residual) + "," +
             format_double(rep.audit.delta_norm) + "," +
             format_double(rep.audit.delta_threshold) + "," +
             format_double(rep.audit.closed_loop_identity_error) + "," +
             format_double(r.closed_loop_radius) + "\n";
    write_text(out / "audit.csv", audit);

    const AttackTrajectory traj = simulate_attack(
        plant, r.K_star, config.attack(Policy::kI), Vector::Zero(plant.m()),
        r.x0_attack);
    write_trajectory_csv(out / "trajectory.csv", traj);
    write_text(out / "trajectory.gp",
               "set datafile separator ','\n"
               "set key autotitle columnhead\n"
               "set xlabel 't'\nset ylabel '||x(t)||'\n"
               "plot 'trajectory.csv' using 1:(column('residual_norm')) "
               "with lines title 'closed loop, no attack'\n");
  }
  write_key_values(out / "report.txt", report);
  return rep;
}

// ---------------------------------------------------------------- attack

AttackTrialReport attack_trial(const PipelineResult& r,
                               const ExperimentConfig& config) {
  if (!r.outcome.feasible() || r.K_star.size() == 0)
    throw Error("attack needs a feasible pipeline result");
  const GroundTruth truth = r.ground_truth();
  const CloudView view = r.cloud_view();
  AttackTrialReport rep;
  rep.seed = r.seed;
  for (int p = 0; p < 4; ++p) {
    const auto policy = static_cast<Policy>(p);
    const PolicyModel model = build_policy_model(policy, truth, view);
    const Vector a_inf = design_bias(model, config.delta_alpha);
    rep.trajectories[p] = simulate_attack(truth.plant, r.K_star,
                                          config.attack(policy), a_inf, r.x0_attack);
    rep.steady[p] = rep.trajectories[p].steady_residual;
  }
  rep.trajectories[4] =
      simulate_attack(truth.plant, r.K_star, config.attack(Policy::kI),
                      Vector::Zero(truth.plant.m()), r.x0_attack);
  rep.no_attack = rep.trajectories[4].steady_residual;
  return rep;
}

AttackReport run_attack_comparison(const ExperimentConfig& config) {
  config.validate();
  const Plant plant = load_plant(config.plant);
  const fs::path out = config.out;
  fs::create_directories(out);
  AttackReport report;
  std::string summary = "seed,no_attack,I,II,III,IV,delta_alpha\n";
  for (int k = 0; k < config.attack_trials; ++k) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(k);
    const PipelineResult r = run_pipeline(plant, config, seed, config.d_max);
    if (!r.outcome.feasible() || r.K_star.size() == 0)
      throw StageError("synthesize", "infeasible for seed " + std::to_string(seed));
    AttackTrialReport t = attack_trial(r, config);
    const std::string tag = "seed" + std::to_string(seed);
    for (int p = 0; p < 4; ++p)
      write_trajectory_csv(out / ("attack_" + to_string(static_cast<Policy>(p)) +
                                  "_" + tag + ".csv"),
                           t.trajectories[p]);
    write_trajectory_csv(out / ("attack_none_" + tag + ".csv"), t.trajectories[4]);
    summary += std::to_string(seed) + "," + format_double(t.no_attack);
    for (double v : t.steady) summary += "," + format_double(v);
    summary += "," + format_double(config.delta_alpha) + "\n";
    if (k == 0) {
      std::string gp =
          "set datafile separator ','\nset xlabel 't'\nset ylabel '||r(t)||'\n";
      gp += "plot 'attack_none_" + tag + ".csv' using 1:(column('residual_norm')) "
            "with lines title 'no attack'";
      for (const char* p : {"I", "II", "III", "IV"})
        gp += ", \\\n     'attack_" + std::string(p) + "_" + tag +
              ".csv' using 1:(column('residual_norm')) with lines title 'policy " +
              p + "'";
      gp += ", \\\n     " + format_double(config.delta_alpha) +
            " with lines dashtype 2 title 'delta_alpha'\n";
      write_text(out / "attack.gp", gp);
    }
    report.trials.push_back(std::move(t));
  }
  write_text(out / "attack_summary.csv", summary);
  return report;
}

// ----------------------------------------------------------------- sweep

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t k = values.size() / 2;
  return values.size() % 2 ? values[k] : 0.5 * (values[k - 1] + values[k]);
}

int sweep_bin(double gamma) {
  if (gamma <= kSweepBinWidth) return 0;
  // Upper-closed bins (k w, (k+1) w]; the small epsilon keeps exact edges
  // such as 0.03 in the lower bin despite binary rounding.
  const int k = static_cast<int>(std::ceil(gamma / kSweepBinWidth - 1e-9)) - 1;
  return std::min(k, kSweepBins);
}

std::vector<std::string> sweep_bin_labels() {
  std::vector<std::string> labels;
  char buf[64];
  for (int k = 0; k < kSweepBins; ++k) {
    std::snprintf(buf, sizeof(buf), "(%.2f,%.2f]", k * kSweepBinWidth,
                  (k + 1) * kSweepBinWidth);
    labels.emplace_back(buf);
  }
  std::snprintf(buf, sizeof(buf), "(%.2f,inf)", kSweepBins * kSweepBinWidth);
  labels.emplace_back(buf);
  labels.emplace_back("infeasible");
  return labels;
}

SweepColumn sweep_column(const Plant& plant, const ExperimentConfig& config,
                         double d_max) {
  SweepColumn col;
  col.d_max = d_max;
  col.fractions.assign(kSweepBins + 2, 0.0);
  for (int k = 0; k < config.trials; ++k) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(k);
    double gamma = 0.0;
    bool ok = false;
    try {
      const PipelineResult r = run_pipeline(plant, config, seed, d_max);
      ok = r.outcome.feasible() && r.outcome.gamma_bar > 0.0;
      gamma = ok ? r.outcome.gamma_bar : 0.0;
    } catch (const StageError& e) {
      // Inconsistent or degenerate data counts as an infeasible trial.
      if (e.stage() != "synthesize") throw;
    }
    col.gammas.push_back(gamma);
    col.feasible.push_back(ok);
    if (ok) {
      ++col.feasible_count;
      col.fractions[sweep_bin(gamma)] += 1.0;
    } else {
      col.fractions[kSweepBins + 1] += 1.0;
    }
  }
  for (double& f : col.fractions) f /= config.trials;
  col.median = median(col.gammas);
  return col;
}

SweepReport run_disturbance_sweep(const ExperimentConfig& config) {
  config.validate();
  const Plant plant = load_plant(config.plant);
  SweepReport report;
  for (double d : config.d_max_grid)
    report.columns.push_back(sweep_column(plant, config, d));

  const fs::path out = config.out;
  fs::create_directories(out);
  const auto labels = sweep_bin_labels();
  std::string csv = "bin";
  for (const auto& c : report.columns) csv += "," + format_double(c.d_max);
  csv += "\n";
  for (std::size_t b = 0; b < labels.size(); ++b) {
    csv += labels[b];
    for (const auto& c : report.columns) csv += "," + format_double(c.fractions[b]);
    csv += "\n";
  }
  csv += "median";
  for (const auto& c : report.columns) csv += "," + format_double(c.median);
  csv += "\n";
  write_text(out / "sweep.csv", csv);

  std::string gammas = "trial";
  for (const auto& c : report.columns) gammas += "," + format_double(c.d_max);
  gammas += "\n";
  for (int k = 0; k < config.trials; ++k) {
    gammas += std::to_string(config.seed + static_cast<std::uint64_t>(k));
    for (const auto& c : report.columns) gammas += "," + format_double(c.gammas[k]);
    gammas += "\n";
  }
  write_text(out / "sweep_gammas.csv", gammas);

  // Heatmap: matrix data file (rows = bins, columns = d_max).
  std::string dat;
  for (std::size_t b = 0; b < labels.size(); ++b) {
    for (std::size_t j = 0; j < report.columns.size(); ++j) {
      if (j) dat += ' ';
      dat += format_double(report.columns[j].fractions[b]);
    }
    dat += '\n';
  }
  write_text(out / "sweep.dat", dat);
  std::string gp = "set xlabel 'd_max'\nset ylabel 'gamma_bar bin'\n";
  gp += "set xtics (";
  for (std::size_t j = 0; j < report.columns.size(); ++j)
    gp += (j ? ", '" : "'") + format_double(report.columns[j].d_max) + "' " +
          std::to_string(j);
  gp += ")\nset ytics (";
  for (std::size_t b = 0; b < labels.size(); ++b)
    gp += (b ? ", '" : "'") + labels[b] + "' " + std::to_string(b);
  gp += ")\nplot 'sweep.dat' matrix with image notitle, \\\n"
        "     'sweep.dat' matrix using 1:2:(sprintf('%.2f', $3)) with labels notitle\n";
  write_text(out / "sweep.gp", gp);
  return report;
}

}  // namespace privctl
