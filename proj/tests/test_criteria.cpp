#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>

#include "oracles.hpp"
#include "whichway/criteria.hpp"
#include "whichway/optimizer.hpp"
#include "whichway/random.hpp"

using namespace whichway;

namespace {

const double kLn2 = std::numbers::ln2;

double score(const Criterion& c, std::vector<double> q) { return score_outcome(c, q); }

}  // namespace

TEST(ScoreOutcome, Certainty) {
  EXPECT_EQ(score(Criterion::shannon(), {1.0, 0.0, 0.0}), 0.0);
  EXPECT_EQ(score(Criterion::bayes(), {1.0, 0.0, 0.0}), 0.0);
  EXPECT_NEAR(score(Criterion::rms_spread(), {1.0, 0.0, 0.0}), 1.0, 1e-15);
}

TEST(ScoreOutcome, Ignorance) {
  for (int n = 2; n <= 6; ++n) {
    const std::vector<double> q(n, 1.0 / n);
    EXPECT_NEAR(score(Criterion::shannon(), q), -std::log(n), 1e-14);
    EXPECT_NEAR(score(Criterion::bayes(), q), 1.0 / n - 1.0, 1e-15);
    EXPECT_NEAR(score(Criterion::rms_spread(), q), 0.0, 1e-15);
  }
}

TEST(ScoreOutcome, ExcludedBeamColumn) {
  const std::vector<double> q{0.0, 0.5, 0.5};
  EXPECT_NEAR(score(Criterion::shannon(), q), -kLn2, 1e-15);
  EXPECT_NEAR(score(Criterion::rms_spread(), q), 0.5, 1e-15);
  EXPECT_NEAR(score(Criterion::bayes(), q), -0.5, 1e-15);
}

TEST(ScoreOutcome, LogBaseRescales) {
  const std::vector<double> q{0.25, 0.75};
  EXPECT_NEAR(score(Criterion::shannon(2.0), q), score(Criterion::shannon(), q) / kLn2, 1e-15);
}

TEST(ScoreOutcome, RejectsInvalidColumns) {
  EXPECT_THROW(score(Criterion::shannon(), {0.5, 0.6}), ValidationError);
  EXPECT_THROW(score(Criterion::bayes(), {1.2, -0.2}), ValidationError);
  EXPECT_THROW(score(Criterion::rms_spread(), {1.0}), ValidationError);
}

TEST(ScoreOutcome, AgreesWithOracleOnRandomColumns) {
  Rng rng(20);
  for (int k = 0; k < 2000; ++k) {
    const auto q = random_probability_vector(rng, 2 + k % 5);
    EXPECT_NEAR(score_outcome(Criterion::shannon(), q), oracle::shannon(q), 1e-14);
    EXPECT_NEAR(score_outcome(Criterion::bayes(), q), oracle::bayes(q), 1e-15);
    EXPECT_NEAR(score_outcome(Criterion::rms_spread(), q), oracle::rms(q), 1e-14);
  }
}

TEST(CriterionParse, Names) {
  EXPECT_EQ(Criterion::parse("shannon").kind(), CriterionKind::Shannon);
  EXPECT_EQ(Criterion::parse("bayes").kind(), CriterionKind::Bayes);
  EXPECT_EQ(Criterion::parse("rms_spread").kind(), CriterionKind::RmsSpread);
  EXPECT_THROW(Criterion::parse("renyi"), ValidationError);
}

TEST(BayesGuess, LowestIndexAmongTies) {
  const std::vector<double> q{0.4, 0.4, 0.2};
  EXPECT_EQ(bayes_guess(q), 0u);
  const std::vector<double> r{0.2, 0.4, 0.4};
  EXPECT_EQ(bayes_guess(r), 1u);
}

TEST(AverageInformation, TrineOptimaAndSymmetricPvm) {
  const auto trine = trine_ensemble();
  EXPECT_NEAR(average_information(Criterion::shannon(), posteriors(trine, closed_form(ClosedForm::TrineShannon))).average,
              -kLn2, 1e-15);
  EXPECT_NEAR(average_information(Criterion::bayes(), posteriors(trine, closed_form(ClosedForm::TrineBayes))).average,
              -1.0 / 3, 1e-15);
  const auto pair = symmetric_pair(std::numbers::pi / 6);
  EXPECT_NEAR(average_information(Criterion::rms_spread(), posteriors(pair, closed_form(ClosedForm::SymmetricPvm))).average,
              0.5, 1e-15);
}

TEST(AverageInformation, MatchesOracleAndWeightedSum) {
  Rng rng(21);
  const std::vector<oracle::Criterion> oracles{oracle::shannon, oracle::bayes, oracle::rms};
  for (int k = 0; k < 300; ++k) {
    const auto e = random_ensemble(rng, 2 + k % 4, false);
    const auto m = random_rank_one_povm(rng, 2 + k % 5);
    const auto t = posteriors(e, m);
    std::vector<std::pair<double, Eigen::Vector3d>> povm;
    for (const auto& el : m.rank_one()) povm.emplace_back(el.weight, el.direction);
    for (std::size_t c = 0; c < 3; ++c) {
      const auto s = average_information(all_criteria()[c], t);
      double weighted = 0.0;
      for (std::size_t mu = 0; mu < t.outcomes(); ++mu) weighted += t.q(mu) * s.per_outcome[mu];
      EXPECT_NEAR(s.average, weighted, 1e-12);
      EXPECT_NEAR(s.average, oracle::average(e.bloch_vectors(), e.populations(), povm, oracles[c]), 1e-12);
    }
  }
}

TEST(AverageInformation, UnchangedByZeroProbabilityPadding) {
  const auto e = DetectorEnsemble::from_bloch({BlochVector::UnitZ(), BlochVector(1.0, 0.0, 0.0)});
  const auto base = Measurement::from_matrices(
      Measurement::from_rank_one({{0.5, BlochVector(0.3, 0.8, 0.0).normalized()}, {0.5, -BlochVector(0.3, 0.8, 0.0).normalized()}})
          .elements());
  std::vector<ComplexMatrix> padded = base.elements();
  padded.push_back(ComplexMatrix::Zero(2, 2));
  for (const auto& c : all_criteria()) {
    EXPECT_DOUBLE_EQ(average_information(c, posteriors(e, Measurement::from_matrices(padded))).average,
                     average_information(c, posteriors(e, base)).average);
  }
}

TEST(BayesRmsIdentity, Examples) {
  const std::vector<double> certain{1.0, 0.0};
  EXPECT_LT(bayes_rms_identity_defect(certain), 1e-15);
  const std::vector<double> q{0.7, 0.3};
  EXPECT_NEAR(score_outcome(Criterion::rms_spread(), q), 0.4, 1e-15);
  EXPECT_NEAR(-score_outcome(Criterion::bayes(), q), 0.3, 1e-15);
  EXPECT_LT(bayes_rms_identity_defect(q), 1e-15);
}

TEST(BayesRmsIdentity, TwoBeamTables) {
  Rng rng(22);
  for (int k = 0; k < 200; ++k) {
    const auto t = posteriors(random_ensemble(rng, 2, false), random_rank_one_povm(rng, 2 + k % 4));
    EXPECT_LT(bayes_rms_identity_check(t), 1e-12);
  }
  const auto three = posteriors(trine_ensemble(), closed_form(ClosedForm::TrineBayes));
  EXPECT_THROW(bayes_rms_identity_check(three), ValidationError);
}

TEST(Axioms, PermutationInvarianceIsExact) {
  Rng rng(23);
  for (int k = 0; k < 1000; ++k) {
    auto q = random_probability_vector(rng, 2 + k % 5);
    const auto p = q;
    std::shuffle(q.begin(), q.end(), rng);
    for (const auto& c : all_criteria()) {
      EXPECT_EQ(c.evaluate(q), c.evaluate(p));
    }
  }
}

TEST(Axioms, Bounds) {
  Rng rng(24);
  for (int k = 0; k < 10000; ++k) {
    const std::size_t n = 2 + k % 5;
    const auto q = random_probability_vector(rng, n);
    const double shannon = score_outcome(Criterion::shannon(), q);
    const double bayes = score_outcome(Criterion::bayes(), q);
    const double rms = score_outcome(Criterion::rms_spread(), q);
    EXPECT_GE(shannon, -std::log(static_cast<double>(n)) - 1e-12);
    EXPECT_LE(shannon, 1e-12);
    EXPECT_GE(bayes, 1.0 / n - 1.0 - 1e-12);
    EXPECT_LE(bayes, 1e-12);
    EXPECT_GE(rms, -1e-12);
    EXPECT_LE(rms, 1.0 + 1e-12);
  }
}

TEST(ConvexityProbe, Examples) {
  const std::vector<double> a{0.8, 0.2};
  const std::vector<double> b{0.6, 0.4};
  EXPECT_NEAR(convexity_probe(Criterion::bayes(), a, b, 0.5), 0.0, 1e-15);
  EXPECT_NEAR(convexity_probe(Criterion::shannon(), a, a, 0.3), 0.0, 1e-15);
  const std::vector<double> up{1.0, 0.0};
  const std::vector<double> down{0.0, 1.0};
  EXPECT_NEAR(convexity_probe(Criterion::shannon(), up, down, 0.5), kLn2, 1e-15);
}

TEST(ConvexityProbe, NonNegativeOnRandomInputsAndStrictWhereExpected) {
  Rng rng(25);
  std::uniform_real_distribution<double> uniform(0.01, 0.99);
  for (int k = 0; k < 10000; ++k) {
    const std::size_t n = 2 + k % 4;
    const auto q1 = random_probability_vector(rng, n);
    const auto q2 = random_probability_vector(rng, n);
    const double lambda = uniform(rng);
    for (const auto& c : all_criteria()) {
      const double slack = convexity_probe(c, q1, q2, lambda);
      EXPECT_GE(slack, -1e-12);
      if (c.kind() == CriterionKind::Shannon) EXPECT_GT(slack, 0.0);
    }
  }
}
