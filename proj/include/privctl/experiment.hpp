#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "privctl/adversary.hpp"
#include "privctl/audit.hpp"
#include "privctl/cloud_synth.hpp"
#include "privctl/matrix_io.hpp"
#include "privctl/plant.hpp"
#include "privctl/privacy_transform.hpp"

namespace privctl {

/// Error raised by a pipeline stage; `stage` names which one.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message)
      : Error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct Range {
  double lo;
  double hi;
};

/// Experiment parameters. Every field has a config-file key of the same name
/// (see `config_keys()`); defaults reproduce the batch reactor case study.
struct ExperimentConfig {
  std::string plant = "batch-reactor";  // or a directory with A.csv, B.csv
  int T = 20;
  Range input_range{-5.0, 5.0};
  Range x0_range{-2.5, 2.5};
  Range key_range{-1.0, 1.0};
  double rho = 0.9;
  double d_max = 0.0;  // disturbance for case-study / attack runs
  std::vector<double> d_max_grid{0.0,  0.02, 0.04, 0.06, 0.08,
                                 0.10, 0.12, 0.14, 0.16};
  int trials = 100;         // per d_max in the sweep
  int attack_trials = 1;
  std::uint64_t seed = 1;
  double beta = 0.5;
  double delta_alpha = 0.2;
  int T_inj = 10;
  int T_a = 400;
  int T_end = 500;
  double B_norm_bound = 0.0;  // <= 0: use the true ||B||
  std::filesystem::path out = "out";

  void validate() const;
  AttackConfig attack(Policy policy) const;
};

/// Documented keys accepted by `apply_setting`.
const std::vector<std::string>& config_keys();

/// Sets one field from its textual value; throws Error on unknown keys or
/// unparsable values.
void apply_setting(ExperimentConfig& config, const std::string& key,
                   const std::string& value);
void apply_settings(ExperimentConfig& config, const KeyValues& kv);

Plant load_plant(const std::string& source);

/// One complete collect -> mask -> synthesize -> unmask round.
struct PipelineResult {
  std::uint64_t seed = 0;
  Plant plant;              // ground truth, client side only
  DataSet data;
  MaskedData masked;
  std::optional<DisturbanceModel> disturbance;
  SynthesisOutcome outcome;
  TransformKeys keys;       // stage-2 part valid only when feasible
  Matrix K_star;            // empty when infeasible
  double closed_loop_radius = 0.0;  // spectral radius of A + B K_star
  Vector x0_attack;         // initial state for attack simulations

  CloudView cloud_view() const;
  GroundTruth ground_truth() const;
};

/// Runs the pipeline on `plant` with randomness derived from `seed`.
/// `d_max` > 0 selects the disturbed-data path. Infeasible synthesis is
/// reported in the result, not thrown; stage failures throw StageError.
PipelineResult run_pipeline(const Plant& plant, const ExperimentConfig& config,
                            std::uint64_t seed, double d_max);

/// Writes the cloud exchange directory (inputs only).
void write_cloud_inputs(const std::filesystem::path& dir,
                        const MaskedData& masked,
                        const std::optional<DisturbanceModel>& disturbance);
/// Reads a cloud exchange directory, synthesizes, writes the outputs.
SynthesisOutcome synthesize_exchange(const std::filesystem::path& dir,
                                     const BisectionOptions& options = {});

struct AuditSummary {
  double identification_error = 0.0;   // vs. the true transformed pair
  int alternatives = 0;
  int alternatives_consistent = 0;     // reproduce X1 to 1e-9
  int alternatives_distinct = 0;       // differ from (A, B)
  double max_alternative_residual = 0.0;
  double delta_norm = 0.0;
  double delta_threshold = 0.0;
  double closed_loop_identity_error = 0.0;
};

/// Open- and closed-loop privacy audit for one feasible pipeline result.
/// With `grant_disturbance`, the auditor also knows D0 and works with
/// X1 - D0.
AuditSummary audit_pipeline(const PipelineResult& result, int alternatives,
                            std::uint64_t seed, bool grant_disturbance = false);

struct CaseStudyReport {
  PipelineResult result;
  AuditSummary audit;
  double open_loop_radius = 0.0;
};

CaseStudyReport run_case_study(const ExperimentConfig& config);

struct AttackTrialReport {
  std::uint64_t seed = 0;
  double no_attack = 0.0;
  double steady[4] = {0, 0, 0, 0};  // indexed by Policy
  AttackTrajectory trajectories[5];  // I..IV, then no attack
};

/// Attack all four policies against one feasible pipeline result.
AttackTrialReport attack_trial(const PipelineResult& result,
                               const ExperimentConfig& config);

struct AttackReport {
  std::vector<AttackTrialReport> trials;
};

AttackReport run_attack_comparison(const ExperimentConfig& config);

inline constexpr double kSweepBinWidth = 0.01;
inline constexpr int kSweepBins = 10;  // (0,0.01] ... (0.09,0.10], then overflow

struct SweepColumn {
  double d_max = 0.0;
  std::vector<double> gammas;  // 0 for infeasible trials
  std::vector<bool> feasible;
  std::vector<double> fractions;  // kSweepBins + overflow + infeasible
  double median = 0.0;
  int feasible_count = 0;
};

struct SweepReport {
  std::vector<SweepColumn> columns;
};

/// Bin index for a feasible gamma: (k*w, (k+1)*w] -> k; beyond the last
/// bin -> kSweepBins. gamma == 0 falls into bin 0.
int sweep_bin(double gamma);
std::vector<std::string> sweep_bin_labels();

SweepColumn sweep_column(const Plant& plant, const ExperimentConfig& config,
                         double d_max);
SweepReport run_disturbance_sweep(const ExperimentConfig& config);

double median(std::vector<double> values);

}  // namespace privctl
