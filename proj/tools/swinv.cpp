#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "swinv/cli_io.hpp"
#include "swinv/config.hpp"
#include "swinv/integrator.hpp"
#include "swinv/lie_l3.hpp"

namespace {

std::optional<std::string> read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return std::nullopt;
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace swinv;

  CLI::App app{"Invariant solutions of the rotating shallow-water equations"};
  app.require_subcommand(1);
  app.fallthrough();

  RunOptions options;
  std::string out_dir = ".";
  double step = 0.0;
  app.add_option("--out-dir", out_dir, "Directory for output files");
  auto* step_opt = app.add_option("--step", step, "Override integration.step")
                       ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", options.quiet, "Only report errors");

  std::string config_path;
  auto* solve_cmd = app.add_subcommand("solve", "Integrate a reduced system, write CSV and SVG");
  solve_cmd->add_option("config", config_path, "Run configuration")->required();

  double delta = 1e-3;
  auto* verify_cmd =
      app.add_subcommand("verify-residual", "Check the reconstructed fields against the PDE");
  verify_cmd->add_option("config", config_path, "Run configuration")->required();
  verify_cmd->add_option("--delta", delta, "Finite-difference spacing")->check(CLI::PositiveNumber);

  auto* scan_cmd = app.add_subcommand("scan", "Sweep one parameter and record singularities");
  scan_cmd->add_option("config", config_path, "Scan configuration")->required();

  double q = 5.0;
  double omega = 1.0;
  auto* lie_cmd = app.add_subcommand("lie-check", "Verify the Lie algebra and its optimal system");
  lie_cmd->add_option("--q", q, "Bottom parameter q");
  lie_cmd->add_option("--omega", omega, "Coriolis gradient");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  options.out_dir = out_dir;
  if (*step_opt) options.step = step;

  try {
    verify_rk6_tableau();
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (*lie_cmd) {
    try {
      const auto sc = lie::StructureConstants::from_model(q, omega);
      const auto report = lie::verify_optimal_system(sc, 1e-12);
      if (!options.quiet || !report.passed()) std::cout << report.to_text();
      return report.passed() ? kExitOk : kExitVerifyFailed;
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }

  const auto text = read_text(config_path);
  if (!text) {
    std::cerr << "error: cannot read " << config_path << "\n";
    return kExitIo;
  }
  try {
    if (*scan_cmd) return run_singularity_scan(parse_scan_config(*text), options, std::cout);
    const RunConfig cfg = parse_config(*text);
    if (*verify_cmd) return run_verify_residual(cfg, delta, options, std::cout);
    return run_solve(cfg, options, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
