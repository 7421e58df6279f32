// The four subcommands of the whichway tool. Each returns a report document
// (and, for sweep, the CSV table) plus an overall pass flag.
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "whichway/cli/config.hpp"

namespace whichway::cli {

struct CommandOutput {
  Json report;
  std::optional<std::string> csv;
  bool passed = true;
};

CommandOutput cmd_optimize(const RunConfig& cfg);
CommandOutput cmd_verify(const RunConfig& cfg);
CommandOutput cmd_sweep(const RunConfig& cfg);
CommandOutput cmd_dilate(const RunConfig& cfg);

/// Dispatches on "optimize", "verify", "sweep" or "dilate"; throws
/// ConfigError for any other name.
CommandOutput run_command(std::string_view name, const RunConfig& cfg);

inline constexpr const char* kSweepHeader = "index,parameter,value,pvm_score,povm_score,gap,D,V";

}  // namespace whichway::cli
