// Command-line entry point for the surrogate-modelling pipeline.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "surmodel/oracle/fault_model.hpp"
#include "surmodel/pipeline/plotdata.hpp"
#include "surmodel/pipeline/stages.hpp"

namespace fs = std::filesystem;
using namespace surmodel;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, Common& c, bool config_required = true) {
  auto* opt = sub->add_option("-c,--config", c.config, "Run configuration (JSON)");
  if (config_required) opt->required();
  opt->check(CLI::ExistingFile);
  sub->add_option("-o,--out", c.out, "Run directory (overrides output_dir)");
  sub->add_option("--seed", c.seed, "Global seed (overrides the config)");
}

pipeline::RunConfig load(const Common& c) {
  pipeline::RunConfig cfg = c.config.empty() ? pipeline::run_config_from_json(io::Json::object(), fs::current_path())
                                             : pipeline::load_run_config(c.config);
  if (c.seed) {
    cfg.seed = *c.seed;
    cfg.source["seed"] = *c.seed;
  }
  if (!c.out.empty()) {
    cfg.output_dir = fs::absolute(c.out);
  } else {
    cfg.output_dir = fs::absolute(cfg.resolve(cfg.output_dir));
  }
  return cfg;
}

pipeline::RunLayout layout(const pipeline::RunConfig& cfg) { return {cfg.output_dir}; }

int simulate(double tau0_mpa, double phi, double m2, const std::string& oracle_path, const std::string& out) {
  const oracle::OracleConfig cfg =
      oracle_path.empty() ? oracle::OracleConfig{} : oracle::load_oracle_config(oracle_path);
  const ParameterVector p{tau0_mpa * pipeline::kPaPerMPa, phi, m2};
  const auto series = oracle::run_series(p, cfg);
  const fs::path target = out.empty() ? fs::path("/dev/stdout") : fs::path(out);
  oracle::write_series_csv(target, {p}, {series});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surrogate models of fault activation: data, training, sensitivity and assimilation"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress progress messages");

  Common common;
  std::string model = "baseline";

  auto* calibrate = app.add_subcommand("calibrate", "Sweep the oracle constants against the phenomenology criteria");
  add_common(calibrate, common, false);
  auto* dataset = app.add_subcommand("dataset", "Run the oracle on the design and write the split dataset");
  add_common(dataset, common);
  auto* train = app.add_subcommand("train", "Train a regression surrogate");
  add_common(train, common);
  train->add_option("-m,--model", model, "baseline | surmodel2 | pair")
      ->check(CLI::IsMember({"baseline", "surmodel2", "pair"}));
  auto* train_cls = app.add_subcommand("train-classifier", "Train the opening classifier");
  add_common(train_cls, common);
  auto* evaluate = app.add_subcommand("evaluate", "Accuracy tables, confusion counts and summary curves");
  add_common(evaluate, common);
  auto* sens = app.add_subcommand("sensitivity", "Sobol indices through a trained surrogate");
  add_common(sens, common);
  auto* assim = app.add_subcommand("assimilate", "Metropolis-Hastings assimilation of seismic moments");
  add_common(assim, common);
  auto* plot = app.add_subcommand("plotdata", "Tidy CSVs for plotting from a run directory");
  add_common(plot, common, false);
  auto* all = app.add_subcommand("pipeline", "dataset, all trainings, evaluate, sensitivity, assimilate, plotdata");
  add_common(all, common);

  double tau0_mpa = 0.092, phi = 27.1, m2 = 0.45;
  std::string oracle_path, sim_out;
  auto* sim = app.add_subcommand("simulate", "Run the oracle for one parameter vector and print the series");
  sim->add_option("--tau0", tau0_mpa, "Cohesion, MPa")->capture_default_str()->check(CLI::NonNegativeNumber);
  sim->add_option("--phi", phi, "Friction angle, degrees")->capture_default_str()->check(CLI::Range(0.0, 90.0));
  sim->add_option("--m2", m2, "Confinement factor")->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_option("--oracle-config", oracle_path, "Oracle constants (JSON)")->check(CLI::ExistingFile);
  sim->add_option("-o,--out", sim_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (!quiet) pipeline::log_sink() = [](const std::string& m) { std::cerr << m << '\n'; };

  try {
    if (sim->parsed()) return simulate(tau0_mpa, phi, m2, oracle_path, sim_out);
    const auto cfg = load(common);
    const auto L = layout(cfg);
    if (calibrate->parsed()) {
      const auto r = pipeline::stage_calibrate(cfg, L);
      std::cerr << "calibrate: accepted set " << r.tried << " of " << cfg.candidates.size() << ", F_o fraction "
                << r.report.fraction_opened() << '\n';
    } else if (dataset->parsed()) {
      pipeline::stage_dataset(cfg, L);
    } else if (train->parsed()) {
      pipeline::stage_train(cfg, L, model);
    } else if (train_cls->parsed()) {
      pipeline::stage_train(cfg, L, "classifier");
    } else if (evaluate->parsed()) {
      pipeline::stage_evaluate(cfg, L);
    } else if (sens->parsed()) {
      pipeline::stage_sensitivity(cfg, L);
    } else if (assim->parsed()) {
      pipeline::stage_assimilate(cfg, L);
    } else if (plot->parsed()) {
      pipeline::stage_plotdata(cfg, L);
    } else if (all->parsed()) {
      pipeline::stage_dataset(cfg, L);
      for (const char* m : {"baseline", "classifier", "surmodel2", "pair"}) pipeline::stage_train(cfg, L, m);
      pipeline::stage_evaluate(cfg, L);
      pipeline::stage_sensitivity(cfg, L);
      pipeline::stage_assimilate(cfg, L);
      pipeline::stage_plotdata(cfg, L);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
