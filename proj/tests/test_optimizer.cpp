#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "whichway/equivalence.hpp"
#include "whichway/optimizer.hpp"
#include "whichway/random.hpp"

using namespace whichway;

namespace {

constexpr double kPi = std::numbers::pi;

SearchConfig quick(std::uint64_t seed = 1) {
  SearchConfig cfg;
  cfg.seed = seed;
  cfg.restarts = 12;
  return cfg;
}

const std::vector<oracle::Criterion>& oracles() {
  static const std::vector<oracle::Criterion> fs{oracle::shannon, oracle::bayes, oracle::rms};
  return fs;
}

}  // namespace

TEST(SearchConfig, Validation) {
  SearchConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.max_outcomes = 5;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = SearchConfig{};
  cfg.min_outcomes = 3;
  cfg.max_outcomes = 2;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = SearchConfig{};
  cfg.tolerance = 0.01;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = SearchConfig{};
  cfg.restarts = 0;
  EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(ClosedForm, Elements) {
  const auto pvm = closed_form("symmetric_pvm");
  EXPECT_LT((pvm[0] - 0.5 * (Eigen::Matrix2cd::Identity() + pauli()[0])).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((pvm[1] - 0.5 * (Eigen::Matrix2cd::Identity() - pauli()[0])).cwiseAbs().maxCoeff(), 1e-15);
  const auto& n = trine_directions();
  const auto shannon = closed_form("trine_shannon");
  const auto bayes = closed_form("trine_bayes");
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_LT((shannon[i] - (Eigen::Matrix2cd::Identity() - pauli_dot(n[i])) / 3.0).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((bayes[i] - (Eigen::Matrix2cd::Identity() + pauli_dot(n[i])) / 3.0).cwiseAbs().maxCoeff(), 1e-15);
  }
  EXPECT_THROW(closed_form("helstrom"), ValidationError);
}

TEST(QubitEvaluator, AgreesWithPosteriorPath) {
  Rng rng(30);
  for (int k = 0; k < 200; ++k) {
    const auto e = random_ensemble(rng, 2 + k % 4, false);
    const auto m = random_rank_one_povm(rng, 2 + k % 5);
    for (const auto& c : all_criteria()) {
      const QubitEvaluator eval(e, c);
      EXPECT_NEAR(eval(m.rank_one()), average_information(c, posteriors(e, m)).average, 1e-12);
    }
  }
}

TEST(OptimizePvm, SymmetricPairShannonFindsPlusMinusX) {
  for (double theta : {0.3, 0.9, 1.4}) {
    const auto r = optimize_pvm(symmetric_pair(theta), Criterion::shannon(), quick());
    EXPECT_TRUE(r.is_pvm);
    EXPECT_TRUE(equivalent(r.best, closed_form(ClosedForm::SymmetricPvm), 1e-6));
  }
}

TEST(OptimizePvm, BayesOnSymmetricPairMatchesHelstrom) {
  for (double theta : {0.2, kPi / 6, 1.1}) {
    const auto r = optimize_pvm(symmetric_pair(theta), Criterion::bayes(), quick());
    EXPECT_NEAR(r.score.average, -(1.0 - std::sin(theta)) / 2, 1e-9);
    ASSERT_TRUE(r.distinguishability.has_value());
    EXPECT_NEAR(*r.distinguishability, std::sin(theta), 1e-8);
  }
}

TEST(OptimizePvm, MatchesBruteForceOracle) {
  Rng rng(31);
  for (int k = 0; k < 6; ++k) {
    const auto e = random_ensemble(rng, 2 + k % 3, false);
    for (std::size_t c = 0; c < 3; ++c) {
      const double found = optimize_pvm(e, all_criteria()[c], quick()).score.average;
      const double expected = oracle::best_pvm(e.bloch_vectors(), e.populations(), oracles()[c]);
      EXPECT_NEAR(found, expected, 1e-7) << "criterion " << c << " sample " << k;
      EXPECT_GE(found, expected - 1e-7);
    }
  }
}

TEST(OptimizePvm, OrthogonalPairReachesCriterionMaximum) {
  const auto e = symmetric_pair(kPi / 2);
  EXPECT_NEAR(optimize_pvm(e, Criterion::shannon(), quick()).score.average, 0.0, 1e-12);
  EXPECT_NEAR(optimize_pvm(e, Criterion::bayes(), quick()).score.average, 0.0, 1e-12);
  EXPECT_NEAR(optimize_pvm(e, Criterion::rms_spread(), quick()).score.average, 1.0, 1e-12);
}

TEST(OptimizePovm, TrineShannon) {
  const auto r = optimize_povm(trine_ensemble(), Criterion::shannon(), quick());
  EXPECT_NEAR(r.score.average, -std::numbers::ln2, 1e-9);
  EXPECT_FALSE(r.is_pvm);
  EXPECT_TRUE(equivalent(r.best, closed_form(ClosedForm::TrineShannon), 1e-5));
}

TEST(OptimizePovm, TrineBayes) {
  const auto r = optimize_povm(trine_ensemble(), Criterion::bayes(), quick());
  EXPECT_NEAR(r.score.average, -1.0 / 3, 1e-9);
  EXPECT_TRUE(equivalent(r.best, closed_form(ClosedForm::TrineBayes), 1e-5));
}

TEST(OptimizePovm, TrineRmsSpreadIsAttainedByPvm) {
  const auto e = trine_ensemble();
  const double povm = optimize_povm(e, Criterion::rms_spread(), quick()).score.average;
  const double pvm = optimize_pvm(e, Criterion::rms_spread(), quick()).score.average;
  EXPECT_LT(povm - pvm, 1e-6);
}

TEST(OptimizePovm, NeverBelowPvmAndReevaluates) {
  Rng rng(32);
  for (int k = 0; k < 8; ++k) {
    const auto e = random_ensemble(rng, 2 + k % 3, k % 2 == 0);
    for (const auto& c : all_criteria()) {
      const auto povm = optimize_povm(e, c, quick(k));
      const auto pvm = optimize_pvm(e, c, quick(k));
      EXPECT_GE(povm.score.average, pvm.score.average - 1e-9);
      EXPECT_TRUE(validate(povm.best).valid);
      EXPECT_NEAR(average_information(c, posteriors(e, povm.best)).average, povm.score.average, 1e-12);
      EXPECT_LE(povm.best.size(), 4u);
    }
  }
}

TEST(OptimizePovm, DeterministicForFixedSeed) {
  const auto e = DetectorEnsemble::from_bloch({BlochVector(0.6, 0.0, 0.8), BlochVector(-0.6, 0.0, 0.8),
                                               BlochVector(0.0, 0.6, -0.8)},
                                              {0.2, 0.3, 0.5});
  auto cfg = quick(99);
  const auto a = optimize_povm(e, Criterion::shannon(), cfg);
  cfg.threads = 3;
  const auto b = optimize_povm(e, Criterion::shannon(), cfg);
  EXPECT_EQ(a.score.average, b.score.average);
  ASSERT_EQ(a.best.size(), b.best.size());
  for (std::size_t mu = 0; mu < a.best.size(); ++mu) EXPECT_EQ(a.best[mu], b.best[mu]);
  ASSERT_EQ(a.trace.size(), b.trace.size());
}

TEST(Distinguishability, Examples) {
  EXPECT_NEAR(distinguishability(symmetric_pair(kPi / 6), quick()), 0.5, 1e-8);
  EXPECT_NEAR(distinguishability(symmetric_pair(kPi / 2), quick()), 1.0, 1e-12);
  EXPECT_NEAR(distinguishability(symmetric_pair(0.0), quick()), 0.0, 1e-12);
}

TEST(Distinguishability, UnequalPopulationsMatchHelstrom) {
  Rng rng(33);
  for (int k = 0; k < 6; ++k) {
    const auto e = random_ensemble(rng, 2, false);
    const double c = std::abs(overlap(e.states()[0], e.states()[1]));
    const double expected = oracle::helstrom_distinguishability(e.populations()[0], e.populations()[1], c);
    EXPECT_NEAR(distinguishability(e, quick()), expected, 1e-8);
  }
}

TEST(Equivalence, PermutationAndSymmetry) {
  auto trine = closed_form(ClosedForm::TrineShannon);
  std::vector<ComplexMatrix> permuted{trine[2], trine[0], trine[1]};
  EXPECT_TRUE(equivalent(trine, Measurement::from_matrices(permuted)));
  EXPECT_FALSE(equivalent(trine, closed_form(ClosedForm::TrineBayes)));
  // Rotating the Bayes optimum by 60 degrees gives the Shannon one, which is
  // not a symmetry of the trine.
  const auto symmetries = ensemble_symmetries(trine_ensemble());
  EXPECT_GE(symmetries.size(), 6u);
  EXPECT_FALSE(equivalent(trine, closed_form(ClosedForm::TrineBayes), 1e-6, symmetries));
  // Splitting an element into two parallel halves changes nothing.
  const auto pvm = closed_form(ClosedForm::SymmetricPvm);
  const auto split = Measurement::from_rank_one(
      {{0.25, BlochVector::UnitX()}, {0.25, BlochVector::UnitX()}, {0.5, -BlochVector::UnitX()}});
  EXPECT_TRUE(equivalent(pvm, split));
}
