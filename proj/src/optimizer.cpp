#include "whichway/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "whichway/equivalence.hpp"
#include "whichway/local_search.hpp"
#include "whichway/parallel.hpp"

namespace whichway {

void SearchConfig::validate() const {
  auto fail = [](const std::string& what) { throw ValidationError("search config: " + what); };
  if (min_outcomes < 2 || max_outcomes > 4 || min_outcomes > max_outcomes) {
    fail("outcome range must satisfy 2 <= min_outcomes <= max_outcomes <= 4");
  }
  if (restarts < 1) fail("restarts must be positive");
  if (grid_resolution < 2) fail("grid_resolution must be at least 2");
  if (!(tolerance > 0.0 && tolerance <= 1e-3)) fail("tolerance must lie in (0, 1e-3]");
  if (threads < 1) fail("threads must be positive");
}

QubitEvaluator::QubitEvaluator(const DetectorEnsemble& e, Criterion c)
    : directions_(e.bloch_vectors()), populations_(e.populations()), criterion_(c) {}

double QubitEvaluator::operator()(std::span<const RankOneElement> elements) const {
  const std::size_t n = directions_.size();
  std::vector<double> joint(n);
  double total = 0.0;
  for (const auto& el : elements) {
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = std::max(el.weight * (1.0 + el.direction.dot(directions_[i])), 0.0);
      joint[i] = populations_[i] * p;
      q += joint[i];
    }
    if (!(q > 0.0)) continue;
    for (auto& v : joint) v /= q;
    total += q * criterion_.evaluate(joint);
  }
  return total;
}

namespace {

// Orthonormal frame whose first column is d.
Eigen::Matrix3d frame_for(const BlochVector& d) {
  const BlochVector helper = std::abs(d.x()) < 0.9 ? BlochVector::UnitX() : BlochVector::UnitY();
  const BlochVector e2 = (helper - helper.dot(d) * d).normalized();
  Eigen::Matrix3d f;
  f.col(0) = d;
  f.col(1) = e2;
  f.col(2) = d.cross(e2);
  return f;
}

// Parametrization of N-outcome rank-one qubit POVMs. The first N-1 elements
// are free: directions in per-element sphere charts, relative weights as
// softmax logits. Their overall scale is fixed so that the completion of the
// identity is a single rank-one element.
class Chart {
 public:
  explicit Chart(int outcomes)
      : free_(static_cast<std::size_t>(outcomes - 1)), frames_(free_, Eigen::Matrix3d::Identity()) {}

  std::size_t parameters() const { return 2 * free_ + free_ - 1; }

  void decode(std::span<const double> x, std::vector<RankOneElement>& out) const {
    out.resize(free_);
    double norm = 0.0;
    for (std::size_t k = 0; k < free_; ++k) {
      const double polar = x[2 * k];
      const double azimuth = x[2 * k + 1];
      const BlochVector local(std::sin(polar) * std::cos(azimuth),
                              std::sin(polar) * std::sin(azimuth), std::cos(polar));
      out[k].direction = (frames_[k] * local).normalized();
      const double logit = k == 0 ? 0.0 : std::clamp(x[2 * free_ + k - 1], -30.0, 30.0);
      out[k].weight = std::exp(logit);
      norm += out[k].weight;
    }
    BlochVector balance = BlochVector::Zero();
    for (auto& e : out) {
      e.weight /= norm;
      balance += e.weight * e.direction;
    }
    const double scale = 1.0 / (1.0 + balance.norm());
    for (auto& e : out) e.weight *= scale;
    for (const auto& extra : completion_remainder(out)) out.push_back(extra);
  }

  std::vector<double> encode(std::span<const RankOneElement> parts) {
    std::vector<double> x(parameters());
    for (std::size_t k = 0; k < free_; ++k) {
      frames_[k] = frame_for(parts[k].direction);
      x[2 * k] = std::numbers::pi / 2;
      x[2 * k + 1] = 0.0;
      if (k > 0) x[2 * free_ + k - 1] = std::log(parts[k].weight / parts[0].weight);
    }
    return x;
  }

  void rechart(std::vector<double>& x) {
    std::vector<RankOneElement> current;
    decode(x, current);
    for (std::size_t k = 0; k < free_; ++k) {
      frames_[k] = frame_for(current[k].direction);
      x[2 * k] = std::numbers::pi / 2;
      x[2 * k + 1] = 0.0;
    }
  }

 private:
  std::size_t free_;
  std::vector<Eigen::Matrix3d> frames_;
};

struct Candidate {
  std::vector<RankOneElement> elements;
  double score = -std::numeric_limits<double>::infinity();
  int outcomes = 0;
  int restart = 0;
};

Candidate refine(const QubitEvaluator& eval, int outcomes, std::span<const RankOneElement> free_parts,
                 double initial_step, double tolerance, int restart) {
  Chart chart(outcomes);
  std::vector<double> x0 = chart.encode(free_parts);
  std::vector<RankOneElement> scratch;
  auto objective = [&](std::span<const double> x) {
    chart.decode(x, scratch);
    return eval(scratch);
  };
  LocalSearchOptions options;
  options.initial_step = initial_step;
  options.tolerance = tolerance;
  auto result = maximize_coordinatewise(objective, std::move(x0), options,
                                        [&](std::vector<double>& x) { chart.rechart(x); });
  Candidate c;
  chart.decode(result.x, c.elements);
  c.score = eval(c.elements);
  c.outcomes = outcomes;
  c.restart = restart;
  return c;
}

std::mt19937_64 restart_rng(std::uint64_t seed, int outcomes, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(outcomes), static_cast<std::uint32_t>(restart)};
  return std::mt19937_64(seq);
}

BlochVector random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  BlochVector v;
  do {
    v = BlochVector(normal(rng), normal(rng), normal(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

// Highest score first; ties keep the lower index.
void sort_by_score(std::vector<Candidate>& cs) {
  std::stable_sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
}

std::vector<Candidate> search_pvm(const QubitEvaluator& eval, const SearchConfig& cfg) {
  const int res = cfg.grid_resolution;
  struct GridPoint {
    BlochVector d;
    double score;
  };
  std::vector<GridPoint> grid;
  grid.reserve(static_cast<std::size_t>(res * res));
  for (int i = 0; i < res; ++i) {
    const double polar = (i + 0.5) * std::numbers::pi / res;
    for (int j = 0; j < res; ++j) {
      const double azimuth = 2.0 * std::numbers::pi * j / res;
      const BlochVector d(std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth),
                          std::cos(polar));
      const RankOneElement pvm[2] = {{0.5, d}, {0.5, -d}};
      grid.push_back({d, eval(pvm)});
    }
  }
  std::stable_sort(grid.begin(), grid.end(), [](const auto& a, const auto& b) { return a.score > b.score; });

  const double spacing = std::numbers::pi / res;
  const int wanted = std::min(cfg.restarts, 8);
  std::vector<BlochVector> seeds;
  for (const auto& g : grid) {
    if (static_cast<int>(seeds.size()) >= wanted) break;
    const bool distinct = std::none_of(seeds.begin(), seeds.end(), [&](const auto& s) {
      return (s - g.d).norm() < 2.0 * spacing || (s + g.d).norm() < 2.0 * spacing;
    });
    if (distinct) seeds.push_back(g.d);
  }
  auto candidates = map_indexed(static_cast<int>(seeds.size()), cfg.threads, [&](int r) {
    const RankOneElement part{0.5, seeds[static_cast<std::size_t>(r)]};
    return refine(eval, 2, std::span(&part, 1), 2.0 * spacing, cfg.tolerance, r);
  });
  sort_by_score(candidates);
  return candidates;
}

std::vector<Candidate> search_povm(const QubitEvaluator& eval, const SearchConfig& cfg, int outcomes,
                                   const Candidate* previous) {
  constexpr double kCoarseTolerance = 1e-4;
  constexpr int kPolished = 4;
  const double coarse = std::max(cfg.tolerance, kCoarseTolerance);

  auto candidates = map_indexed(cfg.restarts, cfg.threads, [&](int r) {
    auto rng = restart_rng(cfg.seed, outcomes, r);
    std::normal_distribution<double> normal;
    std::vector<RankOneElement> parts(static_cast<std::size_t>(outcomes - 1));
    for (auto& p : parts) {
      p.direction = random_direction(rng);
      p.weight = std::exp(normal(rng));
    }
    return refine(eval, outcomes, parts, 0.5, coarse, r);
  });

  if (previous != nullptr && !previous->elements.empty()) {
    // Warm start: the best (N-1)-outcome POVM with its heaviest element split.
    auto split = previous->elements;
    const auto heaviest = std::max_element(split.begin(), split.end(),
                                           [](const auto& a, const auto& b) { return a.weight < b.weight; });
    heaviest->weight *= 0.5;
    const RankOneElement half = *heaviest;
    split.insert(split.begin(), half);
    if (static_cast<int>(split.size()) == outcomes) {
      candidates.push_back(refine(eval, outcomes, std::span(split).first(static_cast<std::size_t>(outcomes - 1)),
                                  0.05, coarse, cfg.restarts));
    }
  }

  sort_by_score(candidates);
  const int polish = std::min<int>(kPolished, static_cast<int>(candidates.size()));
  auto polished = map_indexed(polish, cfg.threads, [&](int k) {
    const auto& c = candidates[static_cast<std::size_t>(k)];
    return refine(eval, outcomes, std::span(c.elements).first(static_cast<std::size_t>(outcomes - 1)),
                  1e-3, cfg.tolerance, c.restart);
  });
  for (int k = 0; k < polish; ++k) {
    auto& slot = candidates[static_cast<std::size_t>(k)];
    if (polished[static_cast<std::size_t>(k)].score >= slot.score) slot = polished[static_cast<std::size_t>(k)];
  }
  sort_by_score(candidates);
  return candidates;
}

// Merges nearly parallel elements and drops negligible ones, re-completing
// exactly. Tries progressively coarser thresholds and keeps the coarsest one
// whose score loss stays below the search tolerance.
std::vector<RankOneElement> canonicalize(const QubitEvaluator& eval, const std::vector<RankOneElement>& raw,
                                         double tolerance) {
  constexpr std::array<std::pair<double, double>, 4> kThresholds{
      {{1e-3, 1e-4}, {1e-4, 1e-5}, {1e-5, 1e-6}, {1e-6, 1e-7}}};
  const double floor = eval(raw) - tolerance;
  for (const auto& [direction_tol, weight_floor] : kThresholds) {
    const auto merged = merged_elements(Measurement::from_rank_one(raw), direction_tol, weight_floor);
    if (merged.size() == raw.size() || merged.size() < 2) continue;
    Chart chart(static_cast<int>(merged.size()));
    const auto x = chart.encode(std::span(merged).first(merged.size() - 1));
    std::vector<RankOneElement> canonical;
    chart.decode(x, canonical);
    if (canonical.size() == merged.size() && eval(canonical) >= floor) return canonical;
  }
  return raw;
}

OptimizationResult finish(const DetectorEnsemble& e, const Criterion& c, std::vector<RankOneElement> elements,
                          std::vector<TraceEntry> trace) {
  auto best = Measurement::from_rank_one(std::move(elements));
  auto score = average_information(c, posteriors(e, best));
  const bool pvm = is_pvm(best);
  std::optional<double> d;
  if (c.kind() == CriterionKind::Bayes) d = std::clamp(1.0 + 2.0 * score.average, 0.0, 1.0);
  return OptimizationResult{std::move(best), std::move(score), pvm, d, std::move(trace)};
}

void require_qubit(const DetectorEnsemble& e) {
  if (!e.is_qubit()) throw DimensionMismatch("optimizer: qubit detector ensembles only");
}

}  // namespace

OptimizationResult optimize_pvm(const DetectorEnsemble& e, const Criterion& c, const SearchConfig& cfg) {
  cfg.validate();
  require_qubit(e);
  const QubitEvaluator eval(e, c);
  auto candidates = search_pvm(eval, cfg);
  std::vector<TraceEntry> trace;
  for (const auto& cand : candidates) trace.push_back({2, cand.restart, cand.score});
  return finish(e, c, candidates.front().elements, std::move(trace));
}

OptimizationResult optimize_povm(const DetectorEnsemble& e, const Criterion& c, const SearchConfig& cfg) {
  cfg.validate();
  require_qubit(e);
  const QubitEvaluator eval(e, c);

  std::vector<TraceEntry> trace;
  std::vector<Candidate> winners;
  std::optional<Candidate> best;
  std::optional<Candidate> pvm_best;
  std::optional<Candidate> previous;
  // The N = 2 PVM search also seeds N = 3 even when N = 2 is outside the range.
  const int first = std::min(cfg.min_outcomes, 2);
  for (int outcomes = first; outcomes <= cfg.max_outcomes; ++outcomes) {
    auto candidates = outcomes == 2 ? search_pvm(eval, cfg)
                                    : search_povm(eval, cfg, outcomes, previous ? &*previous : nullptr);
    previous = candidates.front();
    if (outcomes == 2) pvm_best = candidates.front();
    if (outcomes < cfg.min_outcomes) continue;
    for (const auto& cand : candidates) trace.push_back({outcomes, cand.restart, cand.score});
    winners.push_back(candidates.front());
  }
  // Fewest outcomes among the candidates within the search tolerance of the best.
  double top = winners.front().score;
  for (const auto& w : winners) top = std::max(top, w.score);
  for (const auto& w : winners) {
    if (w.score >= top - cfg.tolerance) {
      best = w;
      break;
    }
  }

  auto elements = canonicalize(eval, best->elements, cfg.tolerance);
  if (cfg.min_outcomes == 2 && pvm_best && eval(elements) < pvm_best->score) elements = pvm_best->elements;
  return finish(e, c, std::move(elements), std::move(trace));
}

double distinguishability(const DetectorEnsemble& e, const SearchConfig& cfg) {
  return *optimize_povm(e, Criterion::bayes(), cfg).distinguishability;
}

Measurement closed_form(ClosedForm which) {
  switch (which) {
    case ClosedForm::SymmetricPvm:
      return Measurement::from_rank_one({{0.5, BlochVector::UnitX()}, {0.5, -BlochVector::UnitX()}});
    case ClosedForm::TrineShannon:
    case ClosedForm::TrineBayes: {
      const double sign = which == ClosedForm::TrineBayes ? 1.0 : -1.0;
      std::vector<RankOneElement> elements;
      for (const auto& n : trine_directions()) elements.push_back({1.0 / 3.0, sign * n});
      return Measurement::from_rank_one(std::move(elements));
    }
  }
  throw ValidationError("closed_form: unknown measurement");
}

Measurement closed_form(std::string_view name) {
  if (name == "symmetric_pvm") return closed_form(ClosedForm::SymmetricPvm);
  if (name == "trine_shannon") return closed_form(ClosedForm::TrineShannon);
  if (name == "trine_bayes") return closed_form(ClosedForm::TrineBayes);
  throw ValidationError("closed_form: unknown measurement '" + std::string(name) + "'");
}

}  // namespace whichway
