#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "whichway/measurement.hpp"
#include "whichway/optimizer.hpp"
#include "whichway/random.hpp"

using namespace whichway;

namespace {

constexpr double kPi = std::numbers::pi;

Measurement random_general_povm(Rng& rng) {
  // A random rank-one POVM with two elements combined into one rank-2 element.
  const auto base = random_rank_one_povm(rng, 4);
  std::vector<ComplexMatrix> m{base[0] + base[1], base[2], base[3]};
  return Measurement::from_matrices(std::move(m));
}

}  // namespace

TEST(Validate, SymmetricPvm) {
  const auto r = validate(closed_form(ClosedForm::SymmetricPvm));
  EXPECT_TRUE(r.valid);
  EXPECT_TRUE(r.is_pvm);
  EXPECT_LT(*r.weight_sum_defect, 1e-15);
  EXPECT_LT(*r.balance_defect, 1e-15);
}

TEST(Validate, TrinePovmIsNotPvm) {
  const auto r = validate(closed_form(ClosedForm::TrineShannon));
  EXPECT_TRUE(r.valid);
  EXPECT_FALSE(r.is_pvm);
}

TEST(Validate, ShortfallInCompleteness) {
  std::vector<ComplexMatrix> m{0.45 * Eigen::Matrix2cd::Identity(), 0.45 * Eigen::Matrix2cd::Identity()};
  const auto r = validate(Measurement::from_matrices(m));
  EXPECT_FALSE(r.valid);
  EXPECT_NEAR(r.completeness_defect, 0.1, 1e-15);
}

TEST(Validate, NegativeElementIsInvalid) {
  std::vector<ComplexMatrix> m{Eigen::Matrix2cd(pauli()[2]) + Eigen::Matrix2cd::Identity(),
                               -Eigen::Matrix2cd(pauli()[2])};
  const auto r = validate(Measurement::from_matrices(m));
  EXPECT_FALSE(r.valid);
  EXPECT_NEAR(r.psd_defect, 1.0, 1e-12);
}

TEST(IsPvm, Examples) {
  EXPECT_TRUE(is_pvm(closed_form(ClosedForm::SymmetricPvm)));
  EXPECT_FALSE(is_pvm(closed_form(ClosedForm::TrineBayes)));
  EXPECT_TRUE(is_pvm(Measurement::from_matrices({Eigen::Matrix2cd::Identity()})));
  std::vector<ComplexMatrix> bad{0.5 * Eigen::Matrix2cd::Identity()};
  EXPECT_THROW(is_pvm(Measurement::from_matrices(bad)), InvalidMeasurement);
}

TEST(RankOneElement, Validation) {
  EXPECT_THROW(Measurement::from_rank_one({{0.0, BlochVector::UnitZ()}}), ValidationError);
  EXPECT_THROW(Measurement::from_rank_one({{0.5, BlochVector(0.0, 0.0, 2.0)}}), ValidationError);
}

TEST(OutcomeProbabilities, SymmetricPvmOnPair) {
  for (double theta : {0.1, 0.7, 1.3}) {
    const auto p = outcome_probabilities(symmetric_pair(theta), closed_form(ClosedForm::SymmetricPvm));
    EXPECT_NEAR(p(0, 0), (1.0 + std::sin(theta)) / 2, 1e-15);
    EXPECT_NEAR(p(1, 1), (1.0 + std::sin(theta)) / 2, 1e-15);
  }
}

TEST(OutcomeProbabilities, TrineShannonPovm) {
  const auto p = outcome_probabilities(trine_ensemble(), closed_form(ClosedForm::TrineShannon));
  for (int i = 0; i < 3; ++i) {
    for (int mu = 0; mu < 3; ++mu) EXPECT_NEAR(p(i, mu), i == mu ? 0.0 : 0.5, 1e-15);
  }
}

TEST(OutcomeProbabilities, IdenticalStatesGiveIdenticalRows) {
  Rng rng(10);
  const auto p = outcome_probabilities(symmetric_pair(0.0), random_rank_one_povm(rng, 4));
  EXPECT_LT((p.row(0) - p.row(1)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(OutcomeProbabilities, PathsAgreeWithEachOtherAndOracle) {
  Rng rng(11);
  double paths = 0.0;
  double vs_oracle = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto e = random_ensemble(rng, 2 + k % 4, false);
    const auto m = random_rank_one_povm(rng, 2 + k % 5);
    const auto fast = outcome_probabilities_bloch(e, m);
    const auto slow = outcome_probabilities_trace(e, m);
    paths = std::max(paths, (fast - slow).cwiseAbs().maxCoeff());
    std::vector<Eigen::Matrix2cd> elements;
    for (const auto& el : m.rank_one()) elements.push_back(oracle::element(el.weight, el.direction));
    vs_oracle = std::max(vs_oracle, (oracle::probabilities(e.bloch_vectors(), elements) - slow).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(paths, 1e-12);
  EXPECT_LT(vs_oracle, 1e-12);
}

TEST(OutcomeProbabilities, DimensionMismatch) {
  ComplexVector a(3), b(3);
  a << 1.0, 0.0, 0.0;
  b << 0.0, 1.0, 0.0;
  const DetectorEnsemble e({PureState(a), PureState(b)}, {0.5, 0.5});
  EXPECT_THROW(outcome_probabilities(e, closed_form(ClosedForm::SymmetricPvm)), DimensionMismatch);
}

TEST(Posteriors, TrineShannonColumnsExcludeOneBeam) {
  const auto t = posteriors(trine_ensemble(), closed_form(ClosedForm::TrineShannon));
  for (std::size_t mu = 0; mu < 3; ++mu) {
    auto col = t.column(mu);
    std::sort(col.begin(), col.end());
    EXPECT_NEAR(col[0], 0.0, 1e-15);
    EXPECT_NEAR(col[1], 0.5, 1e-15);
    EXPECT_NEAR(col[2], 0.5, 1e-15);
  }
}

TEST(Posteriors, TrineBayesColumns) {
  const auto t = posteriors(trine_ensemble(), closed_form(ClosedForm::TrineBayes));
  for (int i = 0; i < 3; ++i) {
    for (int mu = 0; mu < 3; ++mu) EXPECT_NEAR(t.Q(i, mu), i == mu ? 2.0 / 3 : 1.0 / 6, 1e-15);
  }
}

TEST(Posteriors, OrthogonalPairIsPerfectlyDiscriminated) {
  const auto t = posteriors(symmetric_pair(kPi / 2), closed_form(ClosedForm::SymmetricPvm));
  EXPECT_NEAR(t.Q(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(t.Q(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(t.Q(0, 1), 0.0, 1e-15);
}

TEST(Posteriors, TableInvariants) {
  Rng rng(12);
  for (int k = 0; k < 300; ++k) {
    const auto e = random_ensemble(rng, 2 + k % 4, false);
    const auto t = posteriors(e, random_rank_one_povm(rng, 2 + k % 5));
    for (std::size_t i = 0; i < t.beams(); ++i) EXPECT_NEAR(t.P.row(i).sum(), 1.0, 1e-10);
    EXPECT_NEAR(t.q.sum(), 1.0, 1e-10);
    EXPECT_TRUE((t.P.array() >= 0.0).all() && (t.P.array() <= 1.0 + 1e-12).all());
    for (std::size_t mu = 0; mu < t.outcomes(); ++mu) {
      if (t.support[mu]) EXPECT_NEAR(t.Q.col(mu).sum(), 1.0, 1e-10);
    }
  }
}

TEST(Posteriors, ZeroProbabilityOutcomeIsMasked) {
  // Both beams along +z, so the -z outcome never fires.
  const auto e = DetectorEnsemble::from_bloch({BlochVector::UnitZ(), BlochVector::UnitZ()});
  const auto m = Measurement::from_rank_one({{0.5, BlochVector::UnitZ()}, {0.5, -BlochVector::UnitZ()}});
  const auto t = posteriors(e, m);
  EXPECT_TRUE(t.support[0]);
  EXPECT_FALSE(t.support[1]);
  EXPECT_EQ(t.Q.col(1).cwiseAbs().maxCoeff(), 0.0);
}

TEST(RankOneRefine, IdentitySplitsIntoComputationalBasis) {
  const auto r = rank_one_refine(Measurement::from_matrices({Eigen::Matrix2cd::Identity()}));
  ASSERT_EQ(r.size(), 2u);
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
  p1(1, 1) = 1.0;
  EXPECT_LT((r[0] - p0).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((r[1] - p1).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(RankOneRefine, RankOneInputUnchangedUpToOrder) {
  const auto m = closed_form(ClosedForm::TrineShannon);
  const auto r = rank_one_refine(m);
  ASSERT_EQ(r.size(), m.size());
  for (std::size_t a = 0; a < m.size(); ++a) {
    double best = 1.0;
    for (std::size_t b = 0; b < r.size(); ++b) best = std::min(best, (m[a] - r[b]).cwiseAbs().maxCoeff());
    EXPECT_LT(best, 1e-12);
  }
}

TEST(RankOneRefine, SplitsRankTwoElementAndMatchesSpectralOracle) {
  Rng rng(13);
  for (int k = 0; k < 50; ++k) {
    const auto m = random_general_povm(rng);
    const auto r = rank_one_refine(m);
    ASSERT_EQ(r.size(), 4u);
    EXPECT_TRUE(validate(r).valid);
    ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
    for (const auto& a : r.elements()) sum += a;
    EXPECT_LT((sum - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-10);
    // The first two pieces reproduce the rank-2 element's spectrum.
    const auto spec = oracle::spectrum(m[0]);
    const double t0 = r[0].trace().real();
    const double t1 = r[1].trace().real();
    EXPECT_NEAR(std::max(t0, t1), spec[1].first, 1e-12);
    EXPECT_NEAR(std::min(t0, t1), spec[0].first, 1e-12);
    EXPECT_LT((r[0] + r[1] - m[0]).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(RankOneRefine, NeverLowersInformation) {
  Rng rng(14);
  for (int k = 0; k < 200; ++k) {
    const auto e = random_ensemble(rng, 2 + k % 3, false);
    const auto m = random_general_povm(rng);
    const auto r = rank_one_refine(m);
    const auto before = posteriors(e, m);
    const auto after = posteriors(e, r);
    for (std::size_t i = 0; i < before.beams(); ++i) EXPECT_NEAR(after.P.row(i).sum(), 1.0, 1e-12);
    for (const auto& c : all_criteria()) {
      EXPECT_GE(average_information(c, after).average, average_information(c, before).average - 1e-12);
    }
  }
}

TEST(RankOneRefine, RejectsInvalidInput) {
  std::vector<ComplexMatrix> bad{0.5 * Eigen::Matrix2cd::Identity()};
  EXPECT_THROW(rank_one_refine(Measurement::from_matrices(bad)), InvalidMeasurement);
}

TEST(CompleteFromPartial, HalfPlusXGivesSymmetricPvm) {
  const std::vector<RankOneElement> parts{{0.5, BlochVector::UnitX()}};
  const auto m = complete_from_partial(parts);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_NEAR(m.rank_one()[1].weight, 0.5, 1e-15);
  EXPECT_LT((m.rank_one()[1].direction + BlochVector::UnitX()).norm(), 1e-15);
}

TEST(CompleteFromPartial, TwoTrineElementsGiveTheThird) {
  const auto trine = closed_form(ClosedForm::TrineShannon).rank_one();
  const auto m = complete_from_partial(std::span(trine).first(2));
  ASSERT_EQ(m.size(), 3u);
  EXPECT_NEAR(m.rank_one()[2].weight, trine[2].weight, 1e-15);
  EXPECT_LT((m.rank_one()[2].direction - trine[2].direction).norm(), 1e-14);
}

TEST(CompleteFromPartial, OverfullIsInfeasible) {
  const std::vector<RankOneElement> parts{{0.9, BlochVector::UnitZ()}, {0.9, -BlochVector::UnitZ()}};
  EXPECT_THROW(complete_from_partial(parts), InfeasibleCompletion);
}

TEST(CompleteFromPartial, RemainderMatchesSpectralOracle) {
  Rng rng(15);
  for (int k = 0; k < 100; ++k) {
    std::vector<RankOneElement> parts{{0.2, random_unit_vector(rng)}, {0.15, random_unit_vector(rng)}};
    const auto m = complete_from_partial(parts);
    EXPECT_TRUE(validate(m).valid);
    ComplexMatrix r = ComplexMatrix::Identity(2, 2);
    for (const auto& p : parts) r -= to_matrix(p);
    const auto spec = oracle::spectrum(r);
    ComplexMatrix appended = ComplexMatrix::Zero(2, 2);
    for (std::size_t mu = parts.size(); mu < m.size(); ++mu) appended += m[mu];
    EXPECT_LT((appended - r).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(m.size() - parts.size(), spec[0].first > 1e-12 ? 2u : 1u);
  }
}

TEST(AsRankOne, RecoversWeightsAndDirections) {
  Rng rng(16);
  const auto m = random_rank_one_povm(rng, 5);
  const auto view = Measurement::from_matrices(m.elements()).as_rank_one();
  ASSERT_TRUE(view.has_value());
  for (std::size_t mu = 0; mu < m.size(); ++mu) {
    EXPECT_NEAR((*view)[mu].weight, m.rank_one()[mu].weight, 1e-14);
    EXPECT_LT(((*view)[mu].direction - m.rank_one()[mu].direction).norm(), 1e-13);
  }
  EXPECT_FALSE(Measurement::from_matrices({Eigen::Matrix2cd::Identity()}).as_rank_one().has_value());
}

TEST(RandomPovm, HasRequestedSizeAndIsValid) {
  Rng rng(17);
  for (std::size_t n = 2; n <= 6; ++n) {
    for (int k = 0; k < 20; ++k) {
      const auto m = random_rank_one_povm(rng, n);
      EXPECT_EQ(m.size(), n);
      EXPECT_TRUE(validate(m).valid);
    }
  }
}
