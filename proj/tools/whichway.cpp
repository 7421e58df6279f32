// whichway optimize|verify|sweep|dilate --config <file> [--seed S] [--out <file>]
//
// Exit codes: 0 success, 1 a check failed, 2 configuration error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "whichway/cli/commands.hpp"

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Which-way measurement optimizer and verifier"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  for (const char* name : {"optimize", "verify", "sweep", "dilate"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--seed", seed, "override the search seed");
    sub->add_option("--out", out_path, "write the report here instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  whichway::cli::CommandOutput output;
  try {
    auto cfg = whichway::cli::load_config(config_path);
    if (seed) {
      cfg.search.seed = *seed;
      cfg.seed_source = whichway::cli::SeedSource::CommandLine;
    }
    output = whichway::cli::run_command(command, cfg);
  } catch (const whichway::cli::ConfigError& e) {
    std::cerr << "whichway: config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "whichway: invalid input: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "whichway: " << e.what() << '\n';
    return kExitCheckFailed;
  }

  const std::string text = output.csv ? *output.csv : output.report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "whichway: cannot write " << out_path << '\n';
      return kExitConfigError;
    }
    out << text;
  }
  // A sweep's summary goes to stderr so stdout stays pure CSV.
  if (output.csv) std::cerr << output.report.dump() << '\n';
  return output.passed ? 0 : kExitCheckFailed;
}
