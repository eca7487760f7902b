#include <CLI11.hpp>

#include "cascade_lab/pipeline.hpp"

int main(int argc, char** argv) {
  namespace pl = cascade_lab::pipeline;
  CLI::App app{"Cascade models, wavelet synthesis and covering-dimension analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cascade_lab::io::kToolVersion);

  std::string config, out, trajectory, times, snapshots;
  std::optional<double> t_end;
  std::optional<int> workers;

  auto* validate = app.add_subcommand("validate", "Check a cascade configuration and its tensor");
  validate->add_option("--config", config, "cascade config JSON")->required();

  auto* simulate = app.add_subcommand("simulate", "Integrate a cascade system");
  simulate->add_option("--config", config, "cascade config JSON")->required();
  simulate->add_option("--t-end", t_end, "final time (overrides the config)");
  simulate->add_option("--out", out, "trajectory CSV path")->required();

  auto* synthesize = app.add_subcommand("synthesize", "Turn trajectory samples into velocity fields");
  synthesize->add_option("--trajectory", trajectory, "trajectory CSV")->required();
  synthesize->add_option("--config", config, "basis config JSON")->required();
  synthesize->add_option("--times", times, "comma-separated times or geometric:N")->default_val("geometric:8");
  synthesize->add_option("--out", out, "output directory")->required();

  auto* analyze = app.add_subcommand("analyze", "Classify cubes and estimate the covering dimension");
  analyze->add_option("--snapshots", snapshots, "directory of field snapshots")->required();
  analyze->add_option("--config,--params", config, "analysis parameter JSON")->required();
  analyze->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  analyze->add_option("--out", out, "report JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pl::kInput;
  }

  if (*validate) return pl::run_validate(config);
  if (*simulate) return pl::run_simulate(config, t_end, out);
  if (*synthesize) return pl::run_synthesize(trajectory, config, times, out);
  return pl::run_analyze(snapshots, config, out, workers);
}
