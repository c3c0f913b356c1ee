#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "privctl/experiment.hpp"

namespace {

using namespace privctl;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

std::string env_name(const std::string& key) {
  std::string out = "PRIVCTL_";
  for (char c : key) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

// Defaults < config file < PRIVCTL_* environment < command-line flags.
ExperimentConfig resolve(const std::string& config_path,
                         const std::map<std::string, std::string>& flags) {
  ExperimentConfig config;
  if (!config_path.empty()) apply_settings(config, read_key_values(config_path));
  for (const auto& key : config_keys())
    if (const char* v = std::getenv(env_name(key).c_str())) apply_setting(config, key, v);
  for (const auto& [k, v] : flags) apply_setting(config, k, v);
  config.validate();
  return config;
}

void print_audit(const AuditSummary& a) {
  std::cout << "audit: identification_error=" << format_double(a.identification_error)
            << " alternatives=" << a.alternatives
            << " consistent=" << a.alternatives_consistent
            << " distinct=" << a.alternatives_distinct
            << " delta_norm=" << format_double(a.delta_norm)
            << " delta_threshold=" << format_double(a.delta_threshold) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving outsourced data-driven stabilization toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value config file");
    for (const auto& key : config_keys())
      sub->add_option_function<std::string>(
          "--" + key, [&flags, key](const std::string& v) { flags[key] = v; },
          "override '" + key + "' (env " + env_name(key) + ")");
  };

  auto* case_study = app.add_subcommand(
      "case-study", "collect, mask, synthesize, unmask and audit one trial");
  add_common(case_study);
  auto* attack = app.add_subcommand(
      "attack", "compare bias-injection policies I-IV against the deployed gain");
  add_common(attack);
  auto* sweep = app.add_subcommand(
      "sweep", "distribution of the privacy budget over a d_max grid");
  add_common(sweep);
  auto* audit = app.add_subcommand(
      "audit", "open- and closed-loop privacy audit for one trial");
  add_common(audit);
  int alternatives = 10;
  audit->add_option("--alternatives", alternatives,
                    "number of alternative systems to construct")
      ->check(CLI::PositiveNumber);

  auto* synth = app.add_subcommand(
      "synthesize", "cloud side: read an exchange directory, write P, Y, K, gamma");
  std::string exchange;
  synth->add_option("dir", exchange, "exchange directory with manifest.txt")
      ->required()
      ->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*synth) {
      const SynthesisOutcome out = synthesize_exchange(exchange);
      std::cout << "status=" << to_string(out.status)
                << " gamma_bar=" << format_double(out.gamma_bar) << "\n";
      return out.feasible() ? kExitOk : kExitInfeasible;
    }
    const ExperimentConfig config = resolve(config_path, flags);
    if (*case_study) {
      const CaseStudyReport rep = run_case_study(config);
      const auto& r = rep.result;
      std::cout << "status=" << to_string(r.outcome.status)
                << " gamma_bar=" << format_double(r.outcome.gamma_bar) << "\n";
      if (!r.outcome.feasible()) return kExitInfeasible;
      std::cout << "open-loop spectral radius=" << format_double(rep.open_loop_radius)
                << " closed-loop spectral radius="
                << format_double(r.closed_loop_radius) << "\n";
      print_audit(rep.audit);
      std::cout << "outputs written to " << config.out.string() << "\n";
    } else if (*attack) {
      const AttackReport rep = run_attack_comparison(config);
      for (const auto& t : rep.trials) {
        std::cout << "seed " << t.seed << ": no-attack=" << format_double(t.no_attack);
        for (int p = 0; p < 4; ++p)
          std::cout << " " << to_string(static_cast<Policy>(p)) << "="
                    << format_double(t.steady[p]);
        std::cout << "\n";
      }
      std::cout << "outputs written to " << config.out.string() << "\n";
    } else if (*sweep) {
      const SweepReport rep = run_disturbance_sweep(config);
      for (const auto& c : rep.columns)
        std::cout << "d_max=" << format_double(c.d_max)
                  << " feasible=" << c.feasible_count << "/" << c.gammas.size()
                  << " median_gamma=" << format_double(c.median) << "\n";
      std::cout << "outputs written to " << config.out.string() << "\n";
    } else if (*audit) {
      const Plant plant = load_plant(config.plant);
      const PipelineResult r = run_pipeline(plant, config, config.seed, config.d_max);
      if (!r.outcome.feasible() || r.K_star.size() == 0) {
        std::cout << "status=" << to_string(r.outcome.status) << "\n";
        return kExitInfeasible;
      }
      print_audit(audit_pipeline(r, alternatives, config.seed,
                                 r.disturbance.has_value()));
    }
  } catch (const StageError& e) {
    std::cerr << "error in stage " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}
