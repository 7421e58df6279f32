// Run configuration for the whichway command-line tool: a JSON document
// describing the detector ensemble, the criterion, the search settings and
// per-command options.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "whichway/optimizer.hpp"

namespace whichway::cli {

using Json = nlohmann::json;

/// A config problem, located by a JSON pointer ("/ensemble/populations") or,
/// for syntax errors, by line and column inside the message.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string pointer, const std::string& message);
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

enum class EnsembleKind { SymmetricPair, Trine, Bloch, Amplitudes };

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::SymmetricPair;
  double theta = 0.7853981633974483;
  std::vector<double> populations;  // empty means equal
  std::vector<BlochVector> bloch;
  std::vector<ComplexVector> amplitudes;

  DetectorEnsemble build() const;
  double zeta1() const { return populations.empty() ? 0.5 : populations.front(); }
};

struct OptimizeOptions {
  bool pvm_only = false;
};

struct VerifyOptions {
  std::vector<std::string> checks;  // empty means all
  std::optional<int> samples;
  std::optional<double> theta;
};

enum class SweepParameter { Theta, Zeta1, Criterion };

struct SweepOptions {
  SweepParameter parameter = SweepParameter::Theta;
  double from = 0.0;
  double to = 1.5707963267948966;
  int points = 33;
  bool interior = false;  // grid k/(points+1) of the open interval
  std::vector<std::string> criteria;

  std::vector<double> grid() const;
};

struct DilateOptions {
  std::optional<Json> measurement;  // name, "optimize", or an explicit measurement
};

enum class SeedSource { Config, CommandLine, Generated };

struct RunConfig {
  EnsembleSpec ensemble;
  std::string criterion = "shannon";
  double log_base = 2.718281828459045;
  SearchConfig search;
  SeedSource seed_source = SeedSource::Generated;
  OptimizeOptions optimize;
  VerifyOptions verify;
  SweepOptions sweep;
  DilateOptions dilate;

  Criterion make_criterion() const;
};

RunConfig parse_config(const Json& doc);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Names of the checks run by `verify`.
const std::vector<std::string>& verify_check_names();

std::string to_string(SeedSource s);
std::string to_string(SweepParameter p);

}  // namespace whichway::cli
