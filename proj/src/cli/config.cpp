#include "whichway/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace whichway::cli {

namespace {

constexpr double kUnitTolerance = 1e-6;
constexpr double kPopulationTolerance = 1e-9;

std::string join(const std::string& pointer, const std::string& key) { return pointer + "/" + key; }

void require_object(const Json& j, const std::string& pointer) {
  if (!j.is_object()) throw ConfigError(pointer, "expected an object");
}

void reject_unknown(const Json& j, const std::string& pointer, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError(join(pointer, key), "unknown field");
  }
}

double get_number(const Json& j, const std::string& pointer) {
  if (!j.is_number()) throw ConfigError(pointer, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(pointer, "expected a finite number");
  return v;
}

int get_int(const Json& j, const std::string& pointer) {
  if (!j.is_number_integer()) throw ConfigError(pointer, "expected an integer");
  return j.get<int>();
}

std::string get_string(const Json& j, const std::string& pointer) {
  if (!j.is_string()) throw ConfigError(pointer, "expected a string");
  return j.get<std::string>();
}

std::vector<double> get_vector(const Json& j, const std::string& pointer) {
  if (!j.is_array()) throw ConfigError(pointer, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(get_number(j[k], join(pointer, std::to_string(k))));
  return out;
}

Complex get_complex(const Json& j, const std::string& pointer) {
  if (j.is_number()) return {get_number(j, pointer), 0.0};
  const auto parts = get_vector(j, pointer);
  if (parts.size() != 2) throw ConfigError(pointer, "expected a number or [re, im]");
  return {parts[0], parts[1]};
}

std::vector<double> parse_populations(const Json& j, const std::string& pointer, std::size_t n) {
  auto pops = get_vector(j, pointer);
  if (pops.size() != n) {
    std::ostringstream msg;
    msg << "expected " << n << " populations, got " << pops.size();
    throw ConfigError(pointer, msg.str());
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (pops[k] < 0.0) throw ConfigError(join(pointer, std::to_string(k)), "population must be >= 0");
  }
  const double total = std::accumulate(pops.begin(), pops.end(), 0.0);
  if (std::abs(total - 1.0) > kPopulationTolerance) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "populations sum to " << total << ", expected 1";
    throw ConfigError(pointer, msg.str());
  }
  // Absorb the rounding left in hand-written values.
  for (auto& p : pops) p /= total;
  double rest = 1.0;
  for (std::size_t k = 0; k + 1 < n; ++k) rest -= pops[k];
  pops.back() = rest;
  return pops;
}

EnsembleSpec parse_ensemble(const Json& j, const std::string& pointer) {
  require_object(j, pointer);
  EnsembleSpec spec;
  const bool has_preset = j.contains("preset");
  const bool has_bloch = j.contains("bloch");
  const bool has_amplitudes = j.contains("amplitudes");
  if (has_preset + has_bloch + has_amplitudes != 1) {
    throw ConfigError(pointer, "exactly one of preset, bloch or amplitudes is required");
  }

  std::size_t n = 0;
  if (has_preset) {
    const auto name = get_string(j["preset"], join(pointer, "preset"));
    if (name == "symmetric_pair") {
      reject_unknown(j, pointer, {"preset", "theta", "populations", "zeta1"});
      spec.kind = EnsembleKind::SymmetricPair;
      n = 2;
      if (j.contains("theta")) {
        spec.theta = get_number(j["theta"], join(pointer, "theta"));
        if (!(spec.theta >= 0.0 && spec.theta <= std::numbers::pi / 2)) {
          throw ConfigError(join(pointer, "theta"), "theta must lie in [0, pi/2]");
        }
      }
      if (j.contains("zeta1")) {
        if (j.contains("populations")) throw ConfigError(join(pointer, "zeta1"), "give zeta1 or populations, not both");
        const double z = get_number(j["zeta1"], join(pointer, "zeta1"));
        if (!(z >= 0.0 && z <= 1.0)) throw ConfigError(join(pointer, "zeta1"), "zeta1 must lie in [0, 1]");
        spec.populations = {z, 1.0 - z};
      }
    } else if (name == "trine") {
      reject_unknown(j, pointer, {"preset", "populations"});
      spec.kind = EnsembleKind::Trine;
      n = 3;
    } else {
      throw ConfigError(join(pointer, "preset"), "unknown preset '" + name + "' (symmetric_pair, trine)");
    }
  } else if (has_bloch) {
    reject_unknown(j, pointer, {"bloch", "populations"});
    spec.kind = EnsembleKind::Bloch;
    const auto& list = j["bloch"];
    const auto where = join(pointer, "bloch");
    if (!list.is_array() || list.size() < 2) throw ConfigError(where, "expected at least two Bloch vectors");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const auto at = join(where, std::to_string(k));
      const auto v = get_vector(list[k], at);
      if (v.size() != 3) throw ConfigError(at, "a Bloch vector has three components");
      const BlochVector b(v[0], v[1], v[2]);
      if (std::abs(b.norm() - 1.0) > kUnitTolerance) throw ConfigError(at, "Bloch vector must have unit length");
      spec.bloch.push_back(b.normalized());
    }
    n = spec.bloch.size();
  } else {
    reject_unknown(j, pointer, {"amplitudes", "populations"});
    spec.kind = EnsembleKind::Amplitudes;
    const auto& list = j["amplitudes"];
    const auto where = join(pointer, "amplitudes");
    if (!list.is_array() || list.size() < 2) throw ConfigError(where, "expected at least two states");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const auto at = join(where, std::to_string(k));
      if (!list[k].is_array() || list[k].size() != 2) throw ConfigError(at, "a qubit state has two amplitudes");
      ComplexVector a(2);
      for (Eigen::Index c = 0; c < 2; ++c) {
        a(c) = get_complex(list[k][static_cast<std::size_t>(c)], join(at, std::to_string(c)));
      }
      if (std::abs(a.norm() - 1.0) > kUnitTolerance) throw ConfigError(at, "state must have unit norm");
      spec.amplitudes.push_back(a.normalized());
    }
    n = spec.amplitudes.size();
  }
  if (j.contains("populations")) spec.populations = parse_populations(j["populations"], join(pointer, "populations"), n);
  return spec;
}

SearchConfig parse_search(const Json& j, const std::string& pointer, bool& seed_given) {
  require_object(j, pointer);
  reject_unknown(j, pointer,
                 {"min_outcomes", "max_outcomes", "restarts", "grid_resolution", "tolerance", "seed", "threads"});
  SearchConfig cfg;
  if (j.contains("min_outcomes")) cfg.min_outcomes = get_int(j["min_outcomes"], join(pointer, "min_outcomes"));
  if (j.contains("max_outcomes")) cfg.max_outcomes = get_int(j["max_outcomes"], join(pointer, "max_outcomes"));
  if (j.contains("restarts")) cfg.restarts = get_int(j["restarts"], join(pointer, "restarts"));
  if (j.contains("grid_resolution")) {
    cfg.grid_resolution = get_int(j["grid_resolution"], join(pointer, "grid_resolution"));
  }
  if (j.contains("tolerance")) cfg.tolerance = get_number(j["tolerance"], join(pointer, "tolerance"));
  if (j.contains("threads")) cfg.threads = get_int(j["threads"], join(pointer, "threads"));
  if (j.contains("seed")) {
    const auto& s = j["seed"];
    if (!s.is_number_unsigned()) throw ConfigError(join(pointer, "seed"), "expected a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
    seed_given = true;
  }
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(pointer, e.what());
  }
  return cfg;
}

VerifyOptions parse_verify(const Json& j, const std::string& pointer) {
  require_object(j, pointer);
  reject_unknown(j, pointer, {"checks", "samples", "theta"});
  VerifyOptions out;
  if (j.contains("checks")) {
    const auto& list = j["checks"];
    const auto where = join(pointer, "checks");
    if (!list.is_array()) throw ConfigError(where, "expected an array of check names");
    const auto& known = verify_check_names();
    for (std::size_t k = 0; k < list.size(); ++k) {
      const auto at = join(where, std::to_string(k));
      auto name = get_string(list[k], at);
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        throw ConfigError(at, "unknown check '" + name + "'");
      }
      out.checks.push_back(std::move(name));
    }
  }
  if (j.contains("samples")) {
    out.samples = get_int(j["samples"], join(pointer, "samples"));
    if (*out.samples < 1) throw ConfigError(join(pointer, "samples"), "samples must be >= 1");
  }
  if (j.contains("theta")) {
    out.theta = get_number(j["theta"], join(pointer, "theta"));
    if (!(*out.theta >= 0.0 && *out.theta <= std::numbers::pi / 2)) {
      throw ConfigError(join(pointer, "theta"), "theta must lie in [0, pi/2]");
    }
  }
  return out;
}

SweepOptions parse_sweep(const Json& j, const std::string& pointer) {
  require_object(j, pointer);
  reject_unknown(j, pointer, {"parameter", "from", "to", "points", "criteria"});
  SweepOptions out;
  const auto name = j.contains("parameter") ? get_string(j["parameter"], join(pointer, "parameter")) : "theta";
  if (name == "theta") {
    out.parameter = SweepParameter::Theta;
  } else if (name == "zeta1") {
    out.parameter = SweepParameter::Zeta1;
    out.interior = !j.contains("from") && !j.contains("to");
    out.from = 0.0;
    out.to = 1.0;
    out.points = 21;
  } else if (name == "criterion") {
    out.parameter = SweepParameter::Criterion;
  } else {
    throw ConfigError(join(pointer, "parameter"), "unknown sweep parameter '" + name + "' (theta, zeta1, criterion)");
  }
  if (j.contains("from")) out.from = get_number(j["from"], join(pointer, "from"));
  if (j.contains("to")) out.to = get_number(j["to"], join(pointer, "to"));
  if (j.contains("points")) {
    out.points = get_int(j["points"], join(pointer, "points"));
    if (out.points < 1) throw ConfigError(join(pointer, "points"), "points must be >= 1");
  }
  if (out.parameter == SweepParameter::Theta) {
    for (const char* key : {"from", "to"}) {
      const double v = key[0] == 'f' ? out.from : out.to;
      if (!(v >= 0.0 && v <= std::numbers::pi / 2)) throw ConfigError(join(pointer, key), "theta must lie in [0, pi/2]");
    }
  }
  if (out.parameter == SweepParameter::Zeta1) {
    for (const char* key : {"from", "to"}) {
      const double v = key[0] == 'f' ? out.from : out.to;
      if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(join(pointer, key), "zeta1 must lie in [0, 1]");
    }
  }
  if (j.contains("criteria")) {
    const auto where = join(pointer, "criteria");
    if (!j["criteria"].is_array()) throw ConfigError(where, "expected an array of criterion names");
    for (std::size_t k = 0; k < j["criteria"].size(); ++k) {
      const auto at = join(where, std::to_string(k));
      auto c = get_string(j["criteria"][k], at);
      try {
        Criterion::parse(c);
      } catch (const ValidationError& e) {
        throw ConfigError(at, e.what());
      }
      out.criteria.push_back(std::move(c));
    }
  }
  if (out.criteria.empty()) out.criteria = {"shannon", "bayes", "rms_spread"};
  return out;
}

}  // namespace

ConfigError::ConfigError(std::string pointer, const std::string& message)
    : std::runtime_error(pointer.empty() ? message : pointer + ": " + message), pointer_(std::move(pointer)) {}

DetectorEnsemble EnsembleSpec::build() const {
  switch (kind) {
    case EnsembleKind::SymmetricPair:
      return symmetric_pair(theta, zeta1());
    case EnsembleKind::Trine:
      return populations.empty() ? trine_ensemble() : DetectorEnsemble::from_bloch(trine_directions(), populations);
    case EnsembleKind::Bloch:
      return populations.empty() ? DetectorEnsemble::from_bloch(bloch) : DetectorEnsemble::from_bloch(bloch, populations);
    case EnsembleKind::Amplitudes: {
      std::vector<PureState> states;
      for (const auto& a : amplitudes) states.push_back(PureState::normalized(a));
      auto pops = populations;
      if (pops.empty()) pops.assign(states.size(), 1.0 / static_cast<double>(states.size()));
      return DetectorEnsemble(std::move(states), std::move(pops));
    }
  }
  throw ConfigError("/ensemble", "unsupported ensemble kind");
}

Criterion RunConfig::make_criterion() const {
  auto c = Criterion::parse(criterion);
  return c.kind() == CriterionKind::Shannon ? Criterion::shannon(log_base) : c;
}

std::vector<double> SweepOptions::grid() const {
  std::vector<double> out;
  for (int k = 0; k < points; ++k) {
    if (interior) {
      out.push_back(from + (to - from) * (k + 1) / (points + 1));
    } else {
      out.push_back(points == 1 ? from : from + (to - from) * k / (points - 1));
    }
  }
  return out;
}

RunConfig parse_config(const Json& doc) {
  require_object(doc, "");
  reject_unknown(doc, "", {"ensemble", "criterion", "log_base", "search", "optimize", "verify", "sweep", "dilate"});
  RunConfig cfg;
  if (doc.contains("ensemble")) cfg.ensemble = parse_ensemble(doc["ensemble"], "/ensemble");
  if (doc.contains("criterion")) {
    cfg.criterion = get_string(doc["criterion"], "/criterion");
    try {
      Criterion::parse(cfg.criterion);
    } catch (const ValidationError& e) {
      throw ConfigError("/criterion", e.what());
    }
  }
  if (doc.contains("log_base")) {
    cfg.log_base = get_number(doc["log_base"], "/log_base");
    if (!(cfg.log_base > 1.0)) throw ConfigError("/log_base", "log base must exceed 1");
  }
  bool seed_given = false;
  if (doc.contains("search")) cfg.search = parse_search(doc["search"], "/search", seed_given);
  cfg.seed_source = seed_given ? SeedSource::Config : SeedSource::Generated;
  if (!seed_given) cfg.search.seed = std::random_device{}() | (std::uint64_t{std::random_device{}()} << 32);
  if (doc.contains("optimize")) {
    const auto& o = doc["optimize"];
    require_object(o, "/optimize");
    reject_unknown(o, "/optimize", {"mode"});
    if (o.contains("mode")) {
      const auto mode = get_string(o["mode"], "/optimize/mode");
      if (mode != "povm" && mode != "pvm") throw ConfigError("/optimize/mode", "mode must be povm or pvm");
      cfg.optimize.pvm_only = mode == "pvm";
    }
  }
  if (doc.contains("verify")) cfg.verify = parse_verify(doc["verify"], "/verify");
  cfg.sweep = parse_sweep(doc.contains("sweep") ? doc["sweep"] : Json::object(), "/sweep");
  if (doc.contains("dilate")) {
    const auto& d = doc["dilate"];
    require_object(d, "/dilate");
    reject_unknown(d, "/dilate", {"measurement"});
    if (d.contains("measurement")) cfg.dilate.measurement = d["measurement"];
  }

  try {
    (void)cfg.ensemble.build();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("/ensemble", e.what());
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", std::string("malformed config: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

const std::vector<std::string>& verify_check_names() {
  static const std::vector<std::string> names{
      "complementarity_sweep", "g_concavity",       "g_convexity", "reduction_monotonicity",
      "reduction_other_criteria", "dilation",      "bayes_rms_identity", "durr_doubling",
      "pvm_sufficiency"};
  return names;
}

std::string to_string(SeedSource s) {
  switch (s) {
    case SeedSource::Config:
      return "config";
    case SeedSource::CommandLine:
      return "command_line";
    case SeedSource::Generated:
      return "generated";
  }
  return "unknown";
}

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::Theta:
      return "theta";
    case SweepParameter::Zeta1:
      return "zeta1";
    case SweepParameter::Criterion:
      return "criterion";
  }
  return "unknown";
}

}  // namespace whichway::cli
