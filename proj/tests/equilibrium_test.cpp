#include "persuasion/equilibrium.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "persuasion/experiments.hpp"
#include "test_support.hpp"

using namespace persuasion;
using persuasion::testing::random_game;
using persuasion::testing::random_orthonormal;
using persuasion::testing::random_pd;
using persuasion::testing::random_refinement;
using persuasion::testing::row;
using persuasion::testing::scalar;

namespace {

Matrix example1_posterior() {
  Matrix s(3, 3);
  s << 0.9715, 0.5571, 0.7793, 0.5571, 1.3859, 0.0413, 0.7793, 0.0413, 0.7794;
  return s;
}

TEST(WhitenedIncentive, FullRevelationGivesZero) {
  const GameSpec g = experiments::example1_game();
  const SymMatrix w =
      whitened_incentive(g.prior(), g.prior(), incentive_matrix(g, 0));
  EXPECT_LT(max_abs(w.mat()), 1e-10);
}

TEST(WhitenedIncentive, IdentityPriorPassesThrough) {
  Matrix v(2, 2);
  v << -1, 0, 0, 1;
  const SymMatrix w = whitened_incentive(PsdMatrix::identity(2),
                                         PsdMatrix::zero(2),
                                         IncentiveMatrix{SymMatrix(v), 0});
  EXPECT_LT(max_abs(w.mat() - v), 1e-14);
}

TEST(WhitenedIncentive, NoDisclosureIsUnstableInExample1) {
  const GameSpec g = experiments::example1_game();
  const SymMatrix w = whitened_incentive(g.prior(), PsdMatrix::zero(3),
                                         incentive_matrix(g, 0));
  EXPECT_LT(detail::sym_eig_raw(w.mat()).values.minCoeff(), -0.1);
}

TEST(WhitenedIncentive, RejectsInfeasiblePosterior) {
  const GameSpec g = experiments::example1_game();
  EXPECT_THROW(whitened_incentive(g.prior(), PsdMatrix(2 * g.prior().mat()),
                                  incentive_matrix(g, 0)),
               InfeasiblePosterior);
}

TEST(IsStableFor, FullRevelationAlwaysStable) {
  const GameSpec g = experiments::example1_game();
  for (int i = 0; i < 2; ++i) {
    EXPECT_TRUE(is_stable_for(g.prior(), incentive_matrix(g, i), g.prior())
                    .stable);
  }
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    const GameSpec random = random_game(4, 2, rng);
    for (int i = 0; i < 2; ++i) {
      ASSERT_TRUE(is_stable_for(random.prior(), incentive_matrix(random, i),
                                random.prior())
                      .stable);
    }
  }
}

TEST(IsStableFor, Example1EquilibriumIsStableForBoth) {
  const GameSpec g = experiments::example1_game();
  const PsdMatrix solved = solve_ordering(g, {0, 1}).posterior;
  EXPECT_TRUE(
      is_stable_for(solved, incentive_matrix(g, 0), g.prior()).stable);
  EXPECT_TRUE(
      is_stable_for(solved, incentive_matrix(g, 1), g.prior()).stable);
  // The four-decimal print of the same posterior certifies at print
  // precision.
  const PsdMatrix printed(example1_posterior());
  EXPECT_TRUE(
      is_stable_for(printed, incentive_matrix(g, 0), g.prior(), 1e-3).stable);
  EXPECT_TRUE(
      is_stable_for(printed, incentive_matrix(g, 1), g.prior(), 1e-3).stable);
  EXPECT_FALSE(is_stable_for(PsdMatrix::zero(3), incentive_matrix(g, 0),
                             g.prior())
                   .stable);
}

TEST(SingleSenderOptimum, AlignedRevealsEverything) {
  std::mt19937_64 rng(7);
  const PsdMatrix prior = random_pd(3, rng);
  Matrix v = -persuasion::testing::random_sym_with_spectrum(3, 0.2, 2, rng);
  const PsdMatrix s =
      single_sender_optimum(prior, IncentiveMatrix{SymMatrix(v), 0});
  EXPECT_LT(max_abs(s.mat() - prior.mat()), 1e-8);

  const PsdMatrix none =
      single_sender_optimum(prior, IncentiveMatrix{SymMatrix(-v), 0});
  EXPECT_LT(max_abs(none.mat()), 1e-10);
}

TEST(SingleSenderOptimum, HandCaseBeatsSampledPosteriors) {
  Matrix v(2, 2);
  v << -1, 0, 0, 1;
  const PsdMatrix s = single_sender_optimum(PsdMatrix::identity(2),
                                            IncentiveMatrix{SymMatrix(v), 0});
  Matrix expected(2, 2);
  expected << 1, 0, 0, 0;
  EXPECT_LT(max_abs(s.mat() - expected), 1e-12);
  const double trace = (v * s.mat()).trace();
  EXPECT_NEAR(trace, -1.0, 1e-12);
  // Oracle: no feasible posterior sampled from [O, I] does better.
  std::mt19937_64 rng(11);
  for (int sample = 0; sample < 10000; ++sample) {
    const Matrix z = persuasion::testing::random_contraction(2, rng);
    ASSERT_GE((v * z).trace(), trace - 1e-8);
  }
}

TEST(BestResponsePosterior, StablePointIsFixed) {
  const GameSpec g = experiments::example1_game();
  const PsdMatrix stable(g.prior());
  const PsdMatrix next =
      best_response_posterior(stable, incentive_matrix(g, 0), g.prior());
  EXPECT_LT(max_abs(next.mat() - stable.mat()), 1e-10);
}

TEST(BestResponsePosterior, FromZeroMatchesSingleSenderOptimum) {
  const GameSpec g = experiments::example1_game();
  const IncentiveMatrix v = incentive_matrix(g, 0);
  const PsdMatrix a =
      best_response_posterior(PsdMatrix::zero(3), v, g.prior());
  const PsdMatrix b = single_sender_optimum(g.prior(), v);
  EXPECT_LT(max_abs(a.mat() - b.mat()), 1e-12);
}

TEST(BestResponsePosterior, Example1FoldMatchesPaper) {
  const GameSpec g = experiments::example1_game();
  const PsdMatrix first =
      single_sender_optimum(g.prior(), incentive_matrix(g, 0));
  const PsdMatrix combined =
      best_response_posterior(first, incentive_matrix(g, 1), g.prior());
  EXPECT_LT(max_abs(combined.mat() - example1_posterior()), 1e-3);
}

TEST(SolveOrdering, Example1) {
  const GameSpec g = experiments::example1_game();
  const EquilibriumResult res = solve_ordering(g, {0, 1});
  EXPECT_LT(max_abs(res.posterior.mat() - example1_posterior()), 1e-3);
  EXPECT_NEAR(res.costs[0], 1.4144, 1e-3);
  EXPECT_NEAR(res.costs[1], 0.8699, 1e-3);
  EXPECT_NEAR(res.costs[2], 0.0285, 1e-3);
  EXPECT_GE(res.min_certificate(), -1e-7);
}

struct TableRow {
  std::vector<int> ordering;  // 0-based
  double j1, j2, j3, jr;
};

TEST(SolveOrdering, Table1Row321) {
  const GameSpec g = experiments::table1_game();
  const EquilibriumResult res = solve_ordering(g, {2, 1, 0});
  EXPECT_NEAR(res.costs[0], 0.7590, 1e-3);
  EXPECT_NEAR(res.costs[1], 0.8527, 1e-3);
  EXPECT_NEAR(res.costs[2], 0.9191, 1e-3);
  EXPECT_NEAR(res.costs[0] + res.costs[1] + res.costs[2], 2.5308, 1e-3);
  EXPECT_NEAR(res.costs[3], 0.0348, 1e-3);
}

TEST(SolveOrdering, Table2Row321) {
  const GameSpec g = experiments::table2_game();
  const EquilibriumResult res = solve_ordering(g, {2, 1, 0});
  EXPECT_NEAR(res.costs[0], 0.9255, 5e-3);
  EXPECT_NEAR(res.costs[1], 0.9746, 5e-3);
  EXPECT_NEAR(res.costs[2], 0.9923, 5e-3);
  EXPECT_NEAR(res.costs[3], 0.0066, 5e-3);
}

TEST(EnumerateOrderings, Table1AllRowsAndInvariantTotals) {
  const GameSpec g = experiments::table1_game();
  const auto results = enumerate_orderings(g);
  EXPECT_EQ(results.size(), 6u);
  const std::vector<TableRow> expected = {
      {{2, 1, 0}, 0.7590, 0.8527, 0.9191, 0.0348},
      {{2, 0, 1}, 0.8527, 0.7590, 0.9191, 0.0348},
      {{1, 2, 0}, 0.7590, 0.9191, 0.8527, 0.0348},
      {{1, 0, 2}, 0.8527, 0.9191, 0.7590, 0.0348},
      {{0, 2, 1}, 0.9191, 0.7590, 0.8527, 0.0348},
      {{0, 1, 2}, 0.9191, 0.8527, 0.7590, 0.0348},
  };
  for (const TableRow& want : expected) {
    const EquilibriumResult& res = results.at(want.ordering);
    ASSERT_NEAR(res.costs[0], want.j1, 1e-3);
    ASSERT_NEAR(res.costs[1], want.j2, 1e-3);
    ASSERT_NEAR(res.costs[2], want.j3, 1e-3);
    ASSERT_NEAR(res.costs[3], want.jr, 1e-3);
  }
  // i.i.d. biases: totals and receiver cost are ordering-invariant.
  const double total0 = results.begin()->second.costs[0] +
                        results.begin()->second.costs[1] +
                        results.begin()->second.costs[2];
  const double jr0 = results.begin()->second.costs[3];
  for (const auto& [ordering, res] : results) {
    ASSERT_NEAR(res.costs[0] + res.costs[1] + res.costs[2], total0, 1e-6);
    ASSERT_NEAR(res.costs[3], jr0, 1e-6);
  }
}

TEST(EnumerateOrderings, Table2AllRows) {
  const GameSpec g = experiments::table2_game();
  const auto results = enumerate_orderings(g);
  const std::vector<TableRow> expected = {
      {{2, 1, 0}, 0.9255, 0.9746, 0.9923, 0.0066},
      {{2, 0, 1}, 0.9663, 0.9424, 0.9898, 0.0088},
      {{1, 2, 0}, 0.9196, 0.9913, 0.9798, 0.0078},
      {{1, 0, 2}, 0.9660, 0.9866, 0.9513, 0.0120},
      {{0, 2, 1}, 0.9898, 0.9407, 0.9799, 0.0096},
      {{0, 1, 2}, 0.9880, 0.9737, 0.9531, 0.0113},
  };
  for (const TableRow& want : expected) {
    const EquilibriumResult& res = results.at(want.ordering);
    ASSERT_NEAR(res.costs[0], want.j1, 5e-3);
    ASSERT_NEAR(res.costs[1], want.j2, 5e-3);
    ASSERT_NEAR(res.costs[2], want.j3, 5e-3);
    ASSERT_NEAR(res.costs[3], want.jr, 5e-3);
  }
}

TEST(EnumerateOrderings, SingleSenderMatchesOptimum) {
  std::mt19937_64 rng(13);
  const GameSpec g = random_game(3, 1, rng);
  const auto results = enumerate_orderings(g);
  ASSERT_EQ(results.size(), 1u);
  const PsdMatrix direct =
      single_sender_optimum(g.prior(), incentive_matrix(g, 0));
  EXPECT_LT(max_abs(results.at({0}).posterior.mat() - direct.mat()), 1e-12);
}

TEST(EnumerateOrderings, CapGuardsFactorialBlowup) {
  std::mt19937_64 rng(17);
  const GameSpec g = random_game(2, 8, rng);
  EXPECT_THROW(enumerate_orderings(g), TooManyOrderings);
}

TEST(NashPolicy, FullAndNoRevelation) {
  const GameSpec g = experiments::example1_game();
  const LinearPolicy full = nash_policy_from_posterior(g.prior(), g.prior());
  EXPECT_LT(max_abs(induced_posterior(g.prior().mat(), full.L) -
                    g.prior().mat()),
            1e-9);
  const LinearPolicy none =
      nash_policy_from_posterior(g.prior(), PsdMatrix::zero(3));
  EXPECT_LT(max_abs(none.L), 1e-12);
}

TEST(NashPolicy, Example1PolicyAndPaperPolicyInduceSamePosterior) {
  const GameSpec g = experiments::example1_game();
  const EquilibriumResult res = solve_ordering(g, {0, 1});
  EXPECT_LT(max_abs(induced_posterior(g.prior().mat(), res.policy.L) -
                    res.posterior.mat()),
            1e-9);
  // The paper reports a different L; equality of policies is not required,
  // induced posteriors must agree.
  Matrix paper_l(3, 3);
  paper_l << 0, 0, 0, 0.1046, -0.7421, 0.5714, -0.7807, -0.1868, -0.1464;
  EXPECT_LT(max_abs(induced_posterior(g.prior().mat(), paper_l) -
                    example1_posterior()),
            1e-3);
}

TEST(NashPolicy, RejectsNonProjectionPosterior) {
  const GameSpec g = experiments::example1_game();
  EXPECT_THROW(
      nash_policy_from_posterior(g.prior(), PsdMatrix(0.5 * g.prior().mat())),
      NotAchievable);
}

TEST(PolicyVariant, IdentityPermutationAndRotation) {
  const GameSpec g = experiments::example1_game();
  const EquilibriumResult res = solve_ordering(g, {0, 1});
  const LinearPolicy same =
      policy_variant(g.prior(), res.policy, Matrix::Identity(3, 3));
  EXPECT_TRUE(same.L == res.policy.L);

  Matrix perm = Matrix::Zero(3, 3);
  perm(0, 2) = perm(1, 0) = perm(2, 1) = 1;
  const LinearPolicy permuted = policy_variant(g.prior(), res.policy, perm);
  EXPECT_LT(max_abs(induced_posterior(g.prior().mat(), permuted.L) -
                    res.posterior.mat()),
            1e-9);

  std::mt19937_64 rng(19);
  const Matrix rotation = random_orthonormal(3, rng);
  const LinearPolicy rotated =
      policy_variant(g.prior(), res.policy, rotation);
  EXPECT_LT(max_abs(induced_posterior(g.prior().mat(), rotated.L) -
                    res.posterior.mat()),
            1e-8);
}

TEST(PolicyVariant, RejectsNonOrthonormalScaling) {
  const GameSpec g = experiments::example1_game();
  const EquilibriumResult res = solve_ordering(g, {0, 1});
  EXPECT_THROW(policy_variant(g.prior(), res.policy,
                              2.0 * Matrix::Identity(3, 3)),
               InvalidScaling);
}

TEST(SequentialEntry, DegenerateCases) {
  const GameSpec g = experiments::example1_game();
  const PsdMatrix first =
      single_sender_optimum(g.prior(), incentive_matrix(g, 0));
  const LinearPolicy nothing =
      sequential_entry_policy(g.prior(), first, first);
  EXPECT_LT(max_abs(nothing.L), 1e-12);

  const EquilibriumResult res = solve_ordering(g, {0, 1});
  const LinearPolicy from_scratch = sequential_entry_policy(
      g.prior(), PsdMatrix::zero(3), res.posterior);
  EXPECT_LT(max_abs(induced_posterior(g.prior().mat(), from_scratch.L) -
                    res.posterior.mat()),
            1e-9);
}

TEST(SequentialEntry, EntrantCompletesExample1Equilibrium) {
  const GameSpec g = experiments::example1_game();
  const PsdMatrix incumbent_posterior =
      single_sender_optimum(g.prior(), incentive_matrix(g, 0));
  const EquilibriumResult target = solve_ordering(g, {0, 1});
  const LinearPolicy entrant = sequential_entry_policy(
      g.prior(), incumbent_posterior, target.posterior);
  // Joint posterior from the innovation form.
  const Matrix gap = g.prior().mat() - incumbent_posterior.mat();
  const Matrix gram =
      symmetrize(entrant.L * gap * entrant.L.transpose());
  const Matrix joint =
      incumbent_posterior.mat() +
      gap * entrant.L.transpose() * pinv(SymMatrix(gram)).mat() * entrant.L *
          gap;
  EXPECT_LT(max_abs(joint - example1_posterior()), 1e-3);
}

TEST(SequentialEntry, RejectsBackwardOrdering) {
  const GameSpec g = experiments::example1_game();
  const EquilibriumResult res = solve_ordering(g, {0, 1});
  EXPECT_THROW(
      sequential_entry_policy(g.prior(), res.posterior, PsdMatrix::zero(3)),
      InfeasiblePosterior);
}

TEST(CooperativeOptimum, SingleSenderAndOpposedSenders) {
  std::mt19937_64 rng(23);
  const GameSpec g = random_game(3, 1, rng);
  EXPECT_LT(max_abs(cooperative_optimum(g, {1.0}).mat() -
                    single_sender_optimum(g.prior(),
                                          incentive_matrix(g, 0))
                        .mat()),
            1e-12);

  // Two exactly opposed senders cancel to V = O; the zero-cutoff rule keeps
  // every free direction unrevealed.
  const GameSpec base = experiments::example1_game();
  const IncentiveMatrix v1 = incentive_matrix(base, 0);
  Matrix mixed = v1.V.mat() + (-v1.V.mat());
  const PsdMatrix s = single_sender_optimum(
      base.prior(), IncentiveMatrix{SymMatrix(mixed), -1});
  EXPECT_LT(max_abs(s.mat()), 1e-12);

  EXPECT_THROW(cooperative_optimum(base, {0.0, 0.0}), InvalidWeights);
  EXPECT_THROW(cooperative_optimum(base, {1.0, -1.0}), InvalidWeights);
}

TEST(StableSetShrinkage, TrivialAndNestedSets) {
  const GameSpec table1 = experiments::table1_game();
  EXPECT_TRUE(stable_set_shrinkage_check(table1, {0, 1, 2}, {0, 1, 2}));
  EXPECT_TRUE(stable_set_shrinkage_check(table1, {0, 1}, {0, 1, 2}));

  // Sender-count family with rho = 0.25 and two senders.
  const GameSpec fam(PsdMatrix(experiments::sender_count_prior(0.25, 2)),
                     experiments::sender_count_costs(2),
                     experiments::tracking_receiver(3));
  EXPECT_TRUE(stable_set_shrinkage_check(fam, {0}, {0, 1}));
  EXPECT_THROW(stable_set_shrinkage_check(fam, {1}, {0}), DimError);
}

// --- module-level randomized invariants ---

TEST(EquilibriumInvariants, RandomGamesAreStableAchievableAndUndominated) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 25; ++trial) {
    const int p = 2 + static_cast<int>(rng() % 4);
    const int m = 1 + static_cast<int>(rng() % 3);
    const GameSpec g = random_game(p, m, rng);
    std::vector<int> ordering(m);
    std::iota(ordering.begin(), ordering.end(), 0);
    const EquilibriumResult res = solve_ordering(g, ordering);
    ASSERT_GE(res.min_certificate(), -1e-7);
    // Achievability: the projection representation reconstructs the
    // posterior and the policy lands on it.
    const Matrix root = detail::psd_sqrt_raw(g.prior().mat());
    ASSERT_LT(max_abs(root * res.projection.mat() * root -
                      res.posterior.mat()),
              1e-7 * std::max(1.0, max_abs(res.posterior.mat())));
    ASSERT_LT(max_abs(induced_posterior(g.prior().mat(), res.policy.L) -
                      res.posterior.mat()),
              1e-7 * std::max(1.0, max_abs(res.posterior.mat())));
    // Sampled more-informative deviations never help any sender.
    for (int i = 0; i < m; ++i) {
      const Matrix v = incentive_matrix(g, i).V.mat();
      const double base = (v * res.posterior.mat()).trace();
      for (int sample = 0; sample < 100; ++sample) {
        const PsdMatrix dev = random_refinement(res.posterior, g.prior(), rng);
        ASSERT_GE((v * dev.mat()).trace(), base - 1e-7);
      }
    }
  }
}

TEST(EquilibriumInvariants, UpwardStability) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const GameSpec g = random_game(3, 1, rng);
    const IncentiveMatrix v = incentive_matrix(g, 0);
    const PsdMatrix stable = single_sender_optimum(g.prior(), v);
    ASSERT_TRUE(is_stable_for(stable, v, g.prior()).stable);
    for (int sample = 0; sample < 200; ++sample) {
      const PsdMatrix refined = random_refinement(stable, g.prior(), rng);
      ASSERT_TRUE(is_stable_for(refined, v, g.prior()).stable);
    }
  }
}

TEST(EquilibriumInvariants, MonotoneInformationEffectForReceiver) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 3);
    const GameSpec g = random_game(3, m, rng);
    std::vector<int> ordering(m);
    std::iota(ordering.begin(), ordering.end(), 0);
    const EquilibriumResult res = solve_ordering(g, ordering);
    const double jr_none = expected_costs(g, PsdMatrix::zero(3)).back();
    const double jr_full = expected_costs(g, g.prior()).back();
    ASSERT_LE(res.costs.back(), jr_none + 1e-9);
    ASSERT_GE(res.costs.back(), jr_full - 1e-9);
  }
}

}  // namespace
