#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

int emit(const sasaki::cli::CommandResult& r) {
  std::cout << r.output;
  if (!r.error.empty()) std::cerr << "sasaki-link: " << r.error << "\n";
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sasaki::cli;

  CLI::App app{"Real links of toric Sasaki-Einstein manifolds"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check that a cone file describes a good cone");
  validate->add_option("cone", validate_path, "Cone file (JSON)")->required();

  long long p = 0, q = 0;
  auto* ypq = app.add_subcommand("ypq", "Print the cone file of Y^{p,q}");
  ypq->add_option("p", p)->required();
  ypq->add_option("q", q)->required();

  std::string pipeline_path;
  std::string reeb_mode = "minimize";
  std::string export_path;
  PipelineOptions options;
  auto* pipeline = app.add_subcommand("pipeline", "Build, sample and verify the real link");
  pipeline->add_option("cone", pipeline_path, "Cone file (JSON)")->required();
  pipeline->add_option("--reeb", reeb_mode, "Reeb vector source")
      ->check(CLI::IsMember({"closed", "minimize"}))
      ->capture_default_str();
  pipeline->add_option("--samples", options.samples, "Number of sample points")->capture_default_str();
  pipeline->add_option("--seed", options.seed, "Master RNG seed")->capture_default_str();
  pipeline->add_option("--tol", options.tol, "Pairing tolerance")->capture_default_str();
  pipeline->add_option("--export-samples", export_path, "Write the samples as JSON to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  if (*validate) return emit(cmd_validate(validate_path));
  if (*ypq) return emit(cmd_ypq(p, q));

  options.reeb = reeb_mode == "closed" ? ReebMode::closed : ReebMode::minimize;
  options.workers = workers_from_env();
  if (!export_path.empty()) options.export_samples = export_path;
  return emit(cmd_pipeline(pipeline_path, options));
}
