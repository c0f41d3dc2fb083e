// grwlab: batch verification runs driven by a TOML config.
//
//   grwlab run <config> [--out DIR] [--seed N] [--tol NAME=VALUE] [--checks LIST] [--jobs N]
//
// Exit status: 0 every asserted check passed, 1 a check failed, 2 the config
// (or command line) is invalid, 3 an internal consistency fault.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "grw/cli/runner.hpp"
#include "grw/error.hpp"

namespace {

void print_summary(const grw::cli::RunResult& r) {
  const auto& rep = r.report;
  std::printf("%-10s %8s %8s %6s %14s %14s  %s\n", "check", "count", "failed", "info", "max|resid|", "min margin",
              "status");
  for (const auto& [name, a] : rep.at("checks").items()) {
    const auto& mm = a.at("min_margin");
    std::printf("%-10s %8d %8d %6d %14.6g %14s  %s\n", name.c_str(), a.at("count").get<int>(),
                a.at("failures").get<int>(), a.at("informational").get<int>(), a.at("max_abs_residual").get<double>(),
                mm.is_null() ? "-" : std::to_string(mm.get<double>()).c_str(), a.at("pass").get<bool>() ? "pass" : "FAIL");
  }
  for (const auto& h : rep.at("hypersurfaces"))
    for (const auto& t : h.at("theorems"))
      std::printf("%-8s %-28s %s\n", t.at("theorem").get<std::string>().c_str(),
                  h.at("label").get<std::string>().c_str(), t.at("verdict").get<std::string>().c_str());
  const auto& tot = rep.at("totals");
  std::printf("records %zu (admitted points %zu, rejected %zu); %s\n", tot.at("records").get<std::size_t>(),
              tot.at("admitted").get<std::size_t>(), tot.at("rejected").get<std::size_t>(),
              rep.at("pass").get<bool>() ? "PASS" : "FAIL");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grwlab: identity and hypothesis checks on graphs in GRW spacetimes"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "evaluate a config and write report.json and points.csv");

  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  std::vector<std::string> tols;
  std::string checks;
  int jobs = 0;
  run->add_option("config", config_path, "TOML config file")->required();
  run->add_option("--out", out_dir, "output directory (overrides output.dir)");
  run->add_option("--seed", seed, "sampling seed (overrides the config and GRWLAB_SEED)");
  run->add_option("--tol", tols, "tolerance override NAME=VALUE (repeatable)");
  run->add_option("--checks", checks, "comma-separated check names, or all");
  run->add_option("--jobs", jobs, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : grw::cli::exit_config_error;
  }

  grw::cli::RunConfig config;
  try {
    grw::cli::Overrides ov;
    if (!out_dir.empty()) ov.out_dir = out_dir;
    if (run->count("--seed")) {
      if (seed < 0) throw grw::ConfigError("--seed: must be nonnegative");
      ov.seed = static_cast<std::uint64_t>(seed);
    }
    for (const auto& t : tols) ov.tolerances.push_back(grw::cli::parse_tolerance_override(t));
    if (run->count("--checks")) ov.checks = grw::cli::parse_check_list(checks);
    if (run->count("--jobs")) ov.jobs = jobs;
    config = grw::cli::load_config(config_path, ov);
  } catch (const grw::ConfigError& e) {
    std::cerr << "grwlab: config error: " << e.what() << "\n";
    return grw::cli::exit_config_error;
  }

  try {
    const auto result = grw::cli::run_and_write(config);
    print_summary(result);
    return result.exit_code;
  } catch (const grw::ConfigError& e) {
    std::cerr << "grwlab: config error: " << e.what() << "\n";
    return grw::cli::exit_config_error;
  } catch (const grw::ConsistencyFault& e) {
    std::cerr << "grwlab: internal consistency fault: " << e.what() << "\n";
    return grw::cli::exit_internal_fault;
  } catch (const std::exception& e) {
    std::cerr << "grwlab: internal fault: " << e.what() << "\n";
    return grw::cli::exit_internal_fault;
  }
}
