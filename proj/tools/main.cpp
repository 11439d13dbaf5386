#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "horoflow/errors.hpp"

namespace {

void add_param_options(CLI::App* cmd, horoflow::cli::ParamOptions& opts) {
  cmd->add_option("--n", opts.n, "hypersurface dimension")->capture_default_str();
  cmd->add_option("--m", opts.m, "order of the mean curvature")->capture_default_str();
  cmd->add_option("--beta", opts.beta, "speed exponent")->capture_default_str();
  cmd->add_option("--kappa", opts.kappa, "ambient sectional curvature (< 0)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace horoflow::cli;
  CLI::App app{"horoflow: volume-preserving flow by powers of the m-th mean curvature"};
  app.require_subcommand(1);

  std::string config_path;
  bool quiet = false;
  auto* run_cmd = app.add_subcommand("run", "integrate a configured run");
  run_cmd->add_option("config", config_path, "configuration file")->required();
  run_cmd->add_flag("-q,--quiet", quiet, "suppress progress output");

  auto* oracle_cmd = app.add_subcommand("oracle", "reference solutions");
  oracle_cmd->require_subcommand(1);
  double r0 = 1.0;
  double t_end = 1.0;
  int samples = 100;
  ParamOptions sphere_opts;
  auto* sphere_cmd = oracle_cmd->add_subcommand("sphere", "geodesic sphere contraction as CSV");
  sphere_cmd->add_option("r0", r0, "initial radius")->required();
  sphere_cmd->add_option("t_end", t_end, "final time")->required();
  sphere_cmd->add_option("--samples", samples, "number of output times")->capture_default_str();
  add_param_options(sphere_cmd, sphere_opts);

  ParamOptions const_opts;
  int const_samples = 100000;
  std::uint64_t seed = 20240601;
  std::string format = "json";
  auto* const_cmd = app.add_subcommand("constants", "pinching constants epsilon0 and C*");
  add_param_options(const_cmd, const_opts);
  const_cmd->add_option("--samples", const_samples, "cone samples")->capture_default_str();
  const_cmd->add_option("--seed", seed, "sampler seed")->capture_default_str();
  const_cmd->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  std::string csv_path;
  std::string analyze_config;
  ParamOptions analyze_opts;
  auto* analyze_cmd = app.add_subcommand("analyze", "verdict on a diagnostics CSV");
  analyze_cmd->add_option("csv", csv_path, "diagnostics file")->required();
  analyze_cmd->add_option("--config", analyze_config, "take parameters from a config file");
  add_param_options(analyze_cmd, analyze_opts);

  auto* check_cmd = app.add_subcommand("check", "invariant suite on built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return ExitCode::usage;
  }

  try {
    if (run_cmd->parsed()) return run_command(config_path, quiet);
    if (sphere_cmd->parsed()) {
      return oracle_sphere_command(r0, t_end, sphere_opts, samples, std::cout);
    }
    if (const_cmd->parsed()) {
      return constants_command(const_opts, const_samples, seed, format, std::cout);
    }
    if (analyze_cmd->parsed()) {
      std::optional<std::string> cfg;
      if (!analyze_config.empty()) cfg = analyze_config;
      return analyze_command(csv_path, analyze_opts, cfg, std::cout);
    }
    if (check_cmd->parsed()) return check_command(std::cout);
  } catch (const horoflow::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return ExitCode::usage;
  } catch (const horoflow::ParabolicityLost& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return ExitCode::numerical_abort;
  } catch (const horoflow::NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return ExitCode::numerical_abort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCode::invariant_failure;
  }
  std::cerr << app.help();
  return ExitCode::usage;
}
