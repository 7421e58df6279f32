#include "whichway/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "whichway/reduction.hpp"
#include "whichway/cli/report.hpp"
#include "whichway/dilation.hpp"
#include "whichway/equivalence.hpp"
#include "whichway/interference.hpp"
#include "whichway/parallel.hpp"
#include "whichway/random.hpp"

namespace whichway::cli {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kOptimalityTolerance = 1e-6;
constexpr double kExactTolerance = 1e-12;
constexpr double kDilationTolerance = 1e-10;
constexpr double kMonotoneTolerance = 1e-10;
constexpr double kSecondDifferenceTolerance = 1e-9;
const std::vector<double> kReductionAngles{0.2, 0.5236, 0.7854, 1.2, 1.5};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void stamp(Json& report, const RunConfig& cfg, Clock::time_point start) {
  report["seed"] = cfg.search.seed;
  report["seed_source"] = to_string(cfg.seed_source);
  report["timing_seconds"] = number(seconds_since(start));
}

Rng check_rng(const RunConfig& cfg, std::size_t check) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.search.seed), static_cast<std::uint32_t>(cfg.search.seed >> 32),
                    static_cast<std::uint32_t>(check)};
  return Rng(seq);
}

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double information(const DetectorEnsemble& e, const Measurement& m, const Criterion& c) {
  return average_information(c, posteriors(e, m)).average;
}

Json check_result(const std::string& name, bool passed, double defect, double tolerance) {
  return {{"name", name}, {"passed", passed}, {"defect", number(defect)}, {"tolerance", number(tolerance)}};
}

Json check_complementarity(const RunConfig& cfg) {
  constexpr int kPoints = 33;
  auto search = cfg.search;
  search.threads = 1;
  const auto rows = map_indexed(kPoints, cfg.search.threads, [&](int k) {
    const double theta = std::numbers::pi / 2 * k / (kPoints - 1);
    return std::pair{theta, complementarity_check(symmetric_pair(theta), search)};
  });
  double worst = 0.0;
  Json table = Json::array();
  for (const auto& [theta, r] : rows) {
    const double defect = std::max({std::abs(r.D - std::sin(theta)), std::abs(r.V - std::cos(theta)), r.defect_from_unity});
    worst = std::max(worst, defect);
    table.push_back({{"theta", number(theta)}, {"D", number(r.D)}, {"V", number(r.V)}, {"sum", number(r.sum)},
                     {"defect", number(defect)}});
  }
  auto out = check_result("complementarity_sweep", worst < kOptimalityTolerance, worst, kOptimalityTolerance);
  out["rows"] = table;
  return out;
}

// Symmetric second differences of g on a 1000-point grid over [-1, 1] for
// eight angles; returns {max, min}.
std::pair<double, double> g_second_differences() {
  constexpr int kGrid = 1000;
  const double h = 2.0 / (kGrid - 1);
  double hi = -INFINITY;
  double lo = INFINITY;
  for (int t = 0; t < 8; ++t) {
    const double theta = 0.1 + 0.2 * t;
    for (int k = 1; k + 1 < kGrid; ++k) {
      const double x = -1.0 + h * k;
      const double d2 = g_function(std::max(-1.0, x - h), theta) - 2.0 * g_function(x, theta) +
                        g_function(std::min(1.0, x + h), theta);
      hi = std::max(hi, d2);
      lo = std::min(lo, d2);
    }
  }
  return {hi, lo};
}

Json check_g(bool concavity) {
  const auto [hi, lo] = g_second_differences();
  if (concavity) {
    auto out = check_result("g_concavity", hi <= kSecondDifferenceTolerance, std::max(0.0, hi), kSecondDifferenceTolerance);
    out["max_second_difference"] = number(hi);
    return out;
  }
  auto out = check_result("g_convexity", lo >= -kSecondDifferenceTolerance, std::max(0.0, -lo), kSecondDifferenceTolerance);
  out["min_second_difference"] = number(lo);
  return out;
}

struct ReductionSample {
  double theta;
  ReductionTrace trace;
};

std::vector<ReductionSample> reduction_samples(const RunConfig& cfg, Rng& rng) {
  const int samples = cfg.verify.samples.value_or(50);
  std::vector<ReductionSample> out;
  for (int s = 0; s < samples; ++s) {
    const double theta = cfg.verify.theta.value_or(kReductionAngles[static_cast<std::size_t>(s) % kReductionAngles.size()]);
    const auto m = random_rank_one_povm(rng, static_cast<std::size_t>(pick(rng, 2, 6)));
    out.push_back({theta, reduce_to_pvm(m, theta)});
  }
  return out;
}

double worst_decrease(const std::vector<double>& values) {
  double worst = 0.0;
  for (std::size_t k = 1; k < values.size(); ++k) worst = std::max(worst, values[k - 1] - values[k]);
  return worst;
}

Json check_reduction(const RunConfig& cfg) {
  auto rng = check_rng(cfg, 3);
  const auto samples = reduction_samples(cfg, rng);
  const auto pvm = closed_form(ClosedForm::SymmetricPvm);
  double worst = 0.0;
  int wrong_terminal = 0;
  for (const auto& s : samples) {
    std::vector<double> values;
    for (const auto& step : s.trace.steps) values.push_back(step.information);
    worst = std::max(worst, worst_decrease(values));
    if (!validate(s.trace.terminal).valid || !equivalent(s.trace.terminal, pvm, kOptimalityTolerance)) ++wrong_terminal;
  }
  auto out = check_result("reduction_monotonicity", worst <= kMonotoneTolerance && wrong_terminal == 0, worst,
                          kMonotoneTolerance);
  out["samples"] = samples.size();
  out["terminal_mismatches"] = wrong_terminal;
  return out;
}

Json check_reduction_other(const RunConfig& cfg) {
  auto rng = check_rng(cfg, 3);
  const auto samples = reduction_samples(cfg, rng);
  Json per = Json::object();
  for (const auto& c : {Criterion::bayes(), Criterion::rms_spread()}) {
    double worst = 0.0;
    int decreasing = 0;
    for (const auto& s : samples) {
      const double d = worst_decrease(rescore_trace(s.trace, symmetric_pair(s.theta), c));
      worst = std::max(worst, d);
      if (d > kMonotoneTolerance) ++decreasing;
    }
    per[c.name()] = {{"worst_decrease", number(worst)}, {"decreasing_traces", decreasing}};
  }
  // Measured and reported; monotonicity is only established for Shannon.
  auto out = check_result("reduction_other_criteria", true, 0.0, kMonotoneTolerance);
  out["asserted"] = false;
  out["criteria"] = per;
  out["samples"] = samples.size();
  return out;
}

Json check_dilation(const RunConfig& cfg) {
  auto rng = check_rng(cfg, 5);
  const int samples = cfg.verify.samples.value_or(100);
  double stats = 0.0;
  double projectors = 0.0;
  double info = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto m = random_rank_one_povm(rng, static_cast<std::size_t>(pick(rng, 2, 6)));
    const auto e = random_ensemble(rng, static_cast<std::size_t>(pick(rng, 2, 4)), false);
    const auto d = neumark_dilate(m);
    stats = std::max(stats, verify_dilation(d, m, e));
    projectors = std::max(projectors, projector_defects(d).worst());
    const auto table = posteriors_from_probabilities(e.populations(), dilation_probabilities(d, e));
    for (const auto& c : all_criteria()) {
      info = std::max(info, std::abs(average_information(c, table).average - information(e, m, c)));
    }
  }
  const bool ok = stats < kDilationTolerance && projectors < kDilationTolerance && info < kExactTolerance;
  auto out = check_result("dilation", ok, stats, kDilationTolerance);
  out["projector_defect"] = number(projectors);
  out["information_defect"] = number(info);
  out["samples"] = samples;
  return out;
}

Json check_bayes_rms(const RunConfig& cfg) {
  auto rng = check_rng(cfg, 6);
  const int samples = cfg.verify.samples.value_or(10000);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double p = uniform(rng);
    const std::array<double, 2> column{p, 1.0 - p};
    worst = std::max(worst, bayes_rms_identity_defect(column));
  }
  auto out = check_result("bayes_rms_identity", worst < kExactTolerance, worst, kExactTolerance);
  out["samples"] = samples;
  return out;
}

Json check_durr(const RunConfig& cfg) {
  auto rng = check_rng(cfg, 7);
  const int samples = cfg.verify.samples.value_or(100);
  const auto rms = Criterion::rms_spread();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto e = random_ensemble(rng, static_cast<std::size_t>(pick(rng, 3, 5)), true);
    const auto m = random_rank_one_povm(rng, static_cast<std::size_t>(pick(rng, 2, 5)));
    worst = std::max(worst, std::abs(information(e, durr_doubling(m), rms) - information(e, m, rms)));
  }
  auto out = check_result("durr_doubling", worst < kExactTolerance, worst, kExactTolerance);
  out["samples"] = samples;
  return out;
}

Json check_pvm_sufficiency(const RunConfig& cfg) {
  const auto e = cfg.ensemble.build();
  const auto c = cfg.make_criterion();
  const double povm = optimize_povm(e, c, cfg.search).score.average;
  const double pvm = optimize_pvm(e, c, cfg.search).score.average;
  const double gap = povm - pvm;
  auto out = check_result("pvm_sufficiency", gap < kOptimalityTolerance, std::max(0.0, gap), kOptimalityTolerance);
  out["criterion"] = c.name();
  out["povm_score"] = number(povm);
  out["pvm_score"] = number(pvm);
  return out;
}

Json run_check(const std::string& name, const RunConfig& cfg) {
  if (name == "complementarity_sweep") return check_complementarity(cfg);
  if (name == "g_concavity") return check_g(true);
  if (name == "g_convexity") return check_g(false);
  if (name == "reduction_monotonicity") return check_reduction(cfg);
  if (name == "reduction_other_criteria") return check_reduction_other(cfg);
  if (name == "dilation") return check_dilation(cfg);
  if (name == "bayes_rms_identity") return check_bayes_rms(cfg);
  if (name == "durr_doubling") return check_durr(cfg);
  if (name == "pvm_sufficiency") return check_pvm_sufficiency(cfg);
  throw ConfigError("/verify/checks", "unknown check '" + name + "'");
}

struct SweepRow {
  std::string value;
  double pvm = 0.0;
  double povm = 0.0;
  std::optional<double> d;
  std::optional<double> v;
};

SweepRow sweep_point(const DetectorEnsemble& e, const Criterion& c, const SearchConfig& search) {
  SweepRow row;
  const auto povm = optimize_povm(e, c, search);
  row.povm = povm.score.average;
  row.pvm = optimize_pvm(e, c, search).score.average;
  if (e.size() == 2) {
    row.d = povm.distinguishability ? *povm.distinguishability : distinguishability(e, search);
    row.v = visibility(FringeModel{e});
  }
  return row;
}

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

Measurement dilate_target(const RunConfig& cfg) {
  const Json spec = cfg.dilate.measurement.value_or(Json("optimize"));
  if (spec.is_string()) {
    const auto name = spec.get<std::string>();
    if (name == "optimize") return optimize_povm(cfg.ensemble.build(), cfg.make_criterion(), cfg.search).best;
    try {
      return closed_form(name);
    } catch (const ValidationError& e) {
      throw ConfigError("/dilate/measurement", e.what());
    }
  }
  return measurement_from_json(spec, "/dilate/measurement");
}

}  // namespace

CommandOutput cmd_optimize(const RunConfig& cfg) {
  const auto start = Clock::now();
  const auto e = cfg.ensemble.build();
  const auto c = cfg.make_criterion();
  const auto r = cfg.optimize.pvm_only ? optimize_pvm(e, c, cfg.search) : optimize_povm(e, c, cfg.search);

  Json per_outcome = Json::array();
  for (double f : r.score.per_outcome) per_outcome.push_back(number(f));
  Json report{{"command", "optimize"},
              {"mode", cfg.optimize.pvm_only ? "pvm" : "povm"},
              {"criterion", c.name()},
              {"ensemble", ensemble_to_json(e)},
              {"score", number(r.score.average)},
              {"per_outcome", per_outcome},
              {"is_pvm", r.is_pvm},
              {"measurement", measurement_to_json(r.best)},
              {"validity", validity_to_json(validate(r.best))}};
  if (c.kind() == CriterionKind::Shannon) report["log_base"] = number(c.log_base());
  if (r.distinguishability) report["distinguishability"] = number(*r.distinguishability);
  stamp(report, cfg, start);
  return {report, std::nullopt, true};
}

CommandOutput cmd_verify(const RunConfig& cfg) {
  const auto start = Clock::now();
  const auto& names = cfg.verify.checks.empty() ? verify_check_names() : cfg.verify.checks;
  Json checks = Json::array();
  bool passed = true;
  for (const auto& name : names) {
    auto result = run_check(name, cfg);
    passed = passed && result["passed"].get<bool>();
    checks.push_back(std::move(result));
  }
  Json report{{"command", "verify"}, {"passed", passed}, {"checks", checks}};
  stamp(report, cfg, start);
  return {report, std::nullopt, passed};
}

CommandOutput cmd_sweep(const RunConfig& cfg) {
  const auto start = Clock::now();
  const auto& sweep = cfg.sweep;
  const bool two_beam_preset = cfg.ensemble.kind == EnsembleKind::SymmetricPair;
  if (sweep.parameter != SweepParameter::Criterion && !two_beam_preset) {
    throw ConfigError("/sweep/parameter", "theta and zeta1 sweeps need the symmetric_pair preset");
  }
  auto search = cfg.search;
  search.threads = 1;

  const auto grid = sweep.grid();
  const int count = sweep.parameter == SweepParameter::Criterion ? static_cast<int>(sweep.criteria.size())
                                                                 : static_cast<int>(grid.size());
  const auto rows = map_indexed(count, cfg.search.threads, [&](int k) {
    const auto idx = static_cast<std::size_t>(k);
    switch (sweep.parameter) {
      case SweepParameter::Theta: {
        auto row = sweep_point(symmetric_pair(grid[idx], cfg.ensemble.zeta1()), cfg.make_criterion(), search);
        row.value = format_number(grid[idx]);
        return row;
      }
      case SweepParameter::Zeta1: {
        auto row = sweep_point(symmetric_pair(cfg.ensemble.theta, grid[idx]), cfg.make_criterion(), search);
        row.value = format_number(grid[idx]);
        return row;
      }
      case SweepParameter::Criterion:
        break;
    }
    auto c = Criterion::parse(sweep.criteria[idx]);
    if (c.kind() == CriterionKind::Shannon) c = Criterion::shannon(cfg.log_base);
    auto row = sweep_point(cfg.ensemble.build(), c, search);
    row.value = c.name();
    return row;
  });

  std::ostringstream csv;
  csv << kSweepHeader << '\n';
  double worst_gap = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    const double gap = r.povm - r.pvm;
    worst_gap = std::max(worst_gap, gap);
    csv << k << ',' << to_string(sweep.parameter) << ',' << r.value << ',' << format_number(r.pvm) << ','
        << format_number(r.povm) << ',' << format_number(gap) << ',' << optional_number(r.d) << ','
        << optional_number(r.v) << '\n';
  }
  Json report{{"command", "sweep"},
              {"parameter", to_string(sweep.parameter)},
              {"rows", rows.size()},
              {"max_gap", number(worst_gap)}};
  stamp(report, cfg, start);
  return {report, csv.str(), true};
}

CommandOutput cmd_dilate(const RunConfig& cfg) {
  const auto start = Clock::now();
  const auto m = dilate_target(cfg);
  const auto validity = validate(m);
  if (!validity.valid) throw ConfigError("/dilate/measurement", "measurement is not a valid POVM");
  const auto d = neumark_dilate(m);
  const auto e = cfg.ensemble.build();

  double reduction = 0.0;
  for (std::size_t mu = 0; mu < d.real_outcomes; ++mu) {
    reduction = std::max(reduction, (reduced_element(d, mu) - m[mu]).cwiseAbs().maxCoeff());
  }
  const auto defects = projector_defects(d);
  const double stats = verify_dilation(d, m, e);
  const bool passed = stats < kDilationTolerance && defects.worst() < kDilationTolerance && reduction < kDilationTolerance;

  Json projectors = Json::array();
  for (const auto& p : d.projectors) projectors.push_back(matrix_to_json(p));
  ComplexMatrix ancilla = d.ancilla_state;
  Json report{{"command", "dilate"},
              {"passed", passed},
              {"measurement", measurement_to_json(m)},
              {"ensemble", ensemble_to_json(e)},
              {"ancilla_dim", d.ancilla_dim},
              {"real_outcomes", d.real_outcomes},
              {"padding_outcomes", d.projectors.size() - d.real_outcomes},
              {"ancilla_state", matrix_to_json(ancilla)},
              {"unitary", matrix_to_json(d.unitary)},
              {"projectors", projectors},
              {"defects",
               {{"statistics", number(stats)},
                {"reduction", number(reduction)},
                {"idempotence", number(defects.idempotence)},
                {"orthogonality", number(defects.orthogonality)},
                {"completeness", number(defects.completeness)}}}};
  stamp(report, cfg, start);
  return {report, std::nullopt, passed};
}

CommandOutput run_command(std::string_view name, const RunConfig& cfg) {
  if (name == "optimize") return cmd_optimize(cfg);
  if (name == "verify") return cmd_verify(cfg);
  if (name == "sweep") return cmd_sweep(cfg);
  if (name == "dilate") return cmd_dilate(cfg);
  throw ConfigError("", "unknown command '" + std::string(name) + "'");
}

}  // namespace whichway::cli
