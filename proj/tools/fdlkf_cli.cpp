// fdlkf: simulate sensor logs, run attitude estimators, score them.
//
//   fdlkf sim     --scenario benchmark -o log.csv
//   fdlkf run     --log log.csv [--config ahrs.cfg] [--algorithm cf] -o est.csv
//   fdlkf eval    --estimates est.csv --truth log.csv
//   fdlkf compare --baseline cf.csv --candidate dlkf.csv --truth log.csv
//   fdlkf config  (prints the default configuration)

#include "fdlkf/eval.hpp"
#include "fdlkf/io.hpp"
#include "fdlkf/pipeline.hpp"
#include "fdlkf/sim.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace fdlkf;

struct SimArgs {
  std::string spec_file;
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  double duration{60.0};
  bool no_truth{false};
};

struct RunArgs {
  std::string log;
  std::string config;
  std::string algorithm;
  std::string out;
};

struct EvalArgs {
  std::string estimates;
  std::string truth;
  std::string name{"estimate"};
};

struct CompareArgs {
  std::string baseline;
  std::string candidate;
  std::string truth;
  std::string baseline_name{"CF"};
  std::string candidate_name{"DLKF"};
};

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  return os;
}

std::vector<TimedAngles> load_estimates(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_estimates(is);
}

void cmd_sim(const SimArgs& a) {
  SimulationSpec spec;
  if (!a.spec_file.empty()) {
    spec = load_simulation(a.spec_file);
  } else if (a.scenario == "benchmark") {
    spec = scenarios::benchmark_simulation(1);
  } else if (a.scenario == "static") {
    spec = scenarios::stationary_simulation(a.duration, Vector3(0.02, -0.01, 0.015), 1);
  } else {
    throw std::invalid_argument("sim needs --spec or --scenario benchmark|static");
  }
  if (a.seed) spec.seed = *a.seed;

  const auto records = simulate(spec);
  auto os = open_output(a.out);
  write_log(os, records, !a.no_truth);
  std::cerr << "wrote " << records.size() << " records to " << a.out << '\n';
}

void cmd_run(const RunArgs& a) {
  PipelineConfig cfg = a.config.empty() ? PipelineConfig{} : load_config(a.config);
  if (!a.algorithm.empty()) cfg.algorithm = parse_algorithm(a.algorithm);

  const auto records = load_log(a.log);
  const auto estimates = run_pipeline(records, cfg);
  auto os = open_output(a.out);
  write_estimates(os, estimates);
  std::cerr << "wrote " << estimates.size() << " " << to_string(cfg.algorithm) << " estimates to "
            << a.out << '\n';
}

void cmd_eval(const EvalArgs& a) {
  const auto est = load_estimates(a.estimates);
  const auto truth = truth_series(load_log(a.truth));
  const RunResult run = evaluate(a.name, config_digest(read_text_file(a.estimates)), est, truth);
  std::cout << format_report(run);
}

void cmd_compare(const CompareArgs& a) {
  const auto truth = truth_series(load_log(a.truth));
  const auto base = load_estimates(a.baseline);
  const auto cand = load_estimates(a.candidate);
  const RunResult b = evaluate(a.baseline_name, config_digest(read_text_file(a.baseline)), base, truth);
  const RunResult c = evaluate(a.candidate_name, config_digest(read_text_file(a.candidate)), cand, truth);
  std::cout << format_comparison(b, c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FastEuler double-layer Kalman filter AHRS toolkit"};
  app.require_subcommand(1);

  SimArgs sim;
  auto* sim_cmd = app.add_subcommand("sim", "Generate a synthetic sensor log with ground truth");
  auto* spec_opt = sim_cmd->add_option("--spec", sim.spec_file, "Simulation spec file")->check(CLI::ExistingFile);
  sim_cmd->add_option("--scenario", sim.scenario, "Canned scenario: benchmark | static")
      ->excludes(spec_opt);
  sim_cmd->add_option("--duration", sim.duration, "Duration of the static scenario, s");
  sim_cmd->add_option("--seed", sim.seed, "Override the noise seed");
  sim_cmd->add_flag("--no-truth", sim.no_truth, "Omit ground-truth columns");
  sim_cmd->add_option("-o,--out", sim.out, "Output log CSV")->required();

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run an estimator over a sensor log");
  run_cmd->add_option("--log", run.log, "Input log CSV")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--config", run.config, "Config file")->check(CLI::ExistingFile);
  run_cmd->add_option("--algorithm", run.algorithm, "Override: dlkf | cf | gyro-only");
  run_cmd->add_option("-o,--out", run.out, "Output estimates CSV")->required();

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "RMSE of an estimate set against truth");
  eval_cmd->add_option("--estimates", ev.estimates, "Estimates CSV")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--truth", ev.truth, "Log CSV with truth columns")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--name", ev.name, "Label for the report");

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Side-by-side RMSE and improvement");
  cmp_cmd->add_option("--baseline", cmp.baseline, "Baseline estimates CSV")->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--candidate", cmp.candidate, "Candidate estimates CSV")->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--truth", cmp.truth, "Log CSV with truth columns")->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--baseline-name", cmp.baseline_name, "Baseline label");
  cmp_cmd->add_option("--candidate-name", cmp.candidate_name, "Candidate label");

  auto* cfg_cmd = app.add_subcommand("config", "Print the default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "fdlkf: " << e.what() << '\n';
    return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
  }

  try {
    if (*sim_cmd) cmd_sim(sim);
    else if (*run_cmd) cmd_run(run);
    else if (*eval_cmd) cmd_eval(ev);
    else if (*cmp_cmd) cmd_compare(cmp);
    else if (*cfg_cmd) std::cout << format_config(PipelineConfig{});
  } catch (const std::exception& e) {
    std::cerr << "fdlkf: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
