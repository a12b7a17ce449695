#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ranslice/equilibrium.hpp"
#include "ranslice/rng.hpp"
#include "util.hpp"

using namespace ranslice;

namespace {

// Projected gradient on one player's quadratic, an independent check of the
// breakpoint scan.
std::vector<double> pg_best_response(const GameInstance& game, const AllocationPolicy& xi,
                                     std::size_t m, double step, std::size_t iters) {
  const std::vector<double> f = best_response_linear_term(game, xi, m);
  const std::size_t rr = game.rrh_count();
  std::vector<double> x(rr, game.mvno(m).user_count / static_cast<double>(rr));
  std::vector<double> g(rr);
  for (std::size_t it = 0; it < iters; ++it) {
    for (std::size_t r = 0; r < rr; ++r)
      g[r] = x[r] - step * (f[r] + 2.0 * x[r] / game.rrh(r).qoe_users);
    detail::project_simplex(g, game.mvno(m).user_count);
    x.swap(g);
  }
  return x;
}

GameInstance symmetric_game(std::size_t mvnos, std::size_t rrhs, double users,
                            double n_cap) {
  std::vector<Rrh> rs(rrhs);
  for (auto& r : rs) {
    r.capacity = 2.0 * n_cap;
    r.qoe_users = n_cap;
    r.price = 1.0;
  }
  std::vector<Mvno> ms(mvnos);
  for (auto& m : ms) {
    m.user_count = users;
    m.price_weight = 1e-3;
  }
  return GameInstance(std::move(rs), std::move(ms));
}

}  // namespace

TEST(SimplexQp, KktCertificate) {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(10);
    std::vector<double> f(n), scale(n);
    for (auto& v : f) v = rng.uniform(-5.0, 5.0);
    for (auto& v : scale) v = rng.uniform(5.0, 50.0);
    const double budget = rng.uniform(0.5, 40.0);
    const auto x = detail::separable_simplex_qp(f, scale, budget);

    double sum = 0.0, lambda = 0.0;
    std::size_t active = 0;
    for (std::size_t r = 0; r < n; ++r) {
      EXPECT_GE(x[r], 0.0);
      sum += x[r];
      if (x[r] > 1e-12) {
        lambda += f[r] + 2.0 * x[r] / scale[r];
        ++active;
      }
    }
    ASSERT_GT(active, 0u);
    lambda /= static_cast<double>(active);
    EXPECT_NEAR(sum, budget, 1e-9 * std::max(1.0, budget));
    for (std::size_t r = 0; r < n; ++r) {
      const double grad = f[r] + 2.0 * x[r] / scale[r];
      if (x[r] > 1e-12) EXPECT_NEAR(grad, lambda, 1e-8);
      else EXPECT_GE(grad, lambda - 1e-8);
    }
  }
}

TEST(SimplexQp, ZeroBudgetIsZero) {
  const auto x = detail::separable_simplex_qp({1.0, -2.0}, {10.0, 10.0}, 0.0);
  EXPECT_DOUBLE_EQ(x[0], 0.0);
  EXPECT_DOUBLE_EQ(x[1], 0.0);
}

TEST(BestResponse, SingleRrhTakesEverything) {
  const auto g = symmetric_game(1, 1, 7.0, 20.0);
  const auto br = best_response(g, AllocationPolicy(1, 1), 0);
  EXPECT_DOUBLE_EQ(br[0], 7.0);
}

TEST(BestResponse, SymmetryGivesEvenSplit) {
  auto g = symmetric_game(1, 2, 8.0, 20.0);
  std::vector<Mvno> ms = g.mvnos();
  ms[0].price_weight = 0.0;
  g = GameInstance(g.rrhs(), ms);
  const auto br = best_response(g, AllocationPolicy(1, 2), 0);
  EXPECT_NEAR(br[0], 4.0, 1e-12);
  EXPECT_NEAR(br[1], 4.0, 1e-12);
}

TEST(BestResponse, MatchesProjectedGradientOracle) {
  Rng rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    auto g = testutil::random_game(rng, 3, 5, 0.05);
    auto xi = testutil::random_policy(rng, g);
    const std::size_t m = rng.below(3);
    const auto br = best_response(g, xi, m);
    const auto pg = pg_best_response(g, xi, m, 1e-3, 1000000);
    for (std::size_t r = 0; r < 5; ++r) EXPECT_NEAR(br[r], pg[r], 1e-6);
  }
}

TEST(BestResponse, NoProfitableDeviation) {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testutil::random_game(rng, 2 + rng.below(3), 2 + rng.below(5));
    auto xi = testutil::random_policy(rng, g);
    const std::size_t m = rng.below(g.mvno_count());
    auto with_row = [&](const std::vector<double>& row) {
      auto out = xi;
      for (std::size_t r = 0; r < g.rrh_count(); ++r) out.at(m, r) = row[r];
      return out;
    };
    const auto br = best_response(g, xi, m);
    const double best = player_cost(g, with_row(br), m).total;
    for (int probe = 0; probe < 10; ++probe) {
      const auto alt = testutil::random_policy(rng, g);
      std::vector<double> row(g.rrh_count());
      for (std::size_t r = 0; r < g.rrh_count(); ++r) row[r] = alt.at(m, r);
      EXPECT_LE(best, player_cost(g, with_row(row), m).total + 1e-9);
    }
  }
}

TEST(SolveBrd, SinglePlayerImmediate) {
  Rng rng(44);
  auto g = testutil::random_game(rng, 1, 6);
  const auto start = feasible_uniform(g);
  const SolveReport rep = solve_brd(g, start);
  EXPECT_TRUE(rep.converged);
  EXPECT_LE(rep.iterations, 2u);
  const auto br = best_response(g, start, 0);
  for (std::size_t r = 0; r < 6; ++r)
    EXPECT_NEAR(rep.final_policy.at(0, r), br[r], 1e-12);
}

TEST(SolveBrd, SymmetricTwoPlayerSplitsEvenly) {
  const auto g = symmetric_game(2, 2, 10.0, 25.0);
  const SolveReport rep = solve_brd(g, feasible_uniform(g));
  EXPECT_TRUE(rep.converged);
  for (std::size_t m = 0; m < 2; ++m)
    for (std::size_t r = 0; r < 2; ++r)
      EXPECT_NEAR(rep.final_policy.at(m, r), 5.0, 1e-6);
}

TEST(SolveBrd, FixedPointOfBestResponse) {
  Rng rng(45);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testutil::random_game(rng, 2 + rng.below(4), 2 + rng.below(6));
    SolveOptions opts;
    const SolveReport rep = solve_brd(g, feasible_uniform(g), opts);
    ASSERT_TRUE(rep.converged);
    for (std::size_t m = 0; m < g.mvno_count(); ++m) {
      const auto br = best_response(g, rep.final_policy, m);
      const double scale = std::max(1.0, g.mvno(m).user_count);
      for (std::size_t r = 0; r < g.rrh_count(); ++r)
        EXPECT_LE(std::abs(br[r] - rep.final_policy.at(m, r)) / scale,
                  10.0 * opts.tol);
    }
  }
}

TEST(SolveBrd, PotentialNonIncreasingPerUpdate) {
  Rng rng(46);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = testutil::random_game(rng, 3, 5);
    auto xi = testutil::random_policy(rng, g);
    double phi = potential(g, xi);
    for (int round = 0; round < 20; ++round) {
      for (std::size_t m = 0; m < g.mvno_count(); ++m) {
        const auto br = best_response(g, xi, m);
        for (std::size_t r = 0; r < g.rrh_count(); ++r) xi.at(m, r) = br[r];
        const double next = potential(g, xi);
        EXPECT_LE(next, phi + 1e-9);
        phi = next;
      }
    }
  }
}

TEST(SolveBrd, TrajectoryRecordsMonotonePotential) {
  Rng rng(47);
  auto g = testutil::random_game(rng, 4, 6);
  SolveOptions opts;
  opts.record_trajectory = true;
  const SolveReport rep = solve_brd(g, testutil::random_policy(rng, g), opts);
  ASSERT_GE(rep.trajectory.size(), 2u);
  for (std::size_t i = 1; i < rep.trajectory.size(); ++i)
    EXPECT_LE(rep.trajectory[i].potential, rep.trajectory[i - 1].potential + 1e-9);
}

TEST(SolveBrd, MultiStartAgreement) {
  Rng rng(48);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = testutil::random_game(rng, 2 + rng.below(3), 2 + rng.below(5));
    std::vector<AllocationPolicy> finals;
    for (int s = 0; s < 5; ++s) {
      const SolveReport rep = solve_brd(g, testutil::random_policy(rng, g));
      ASSERT_TRUE(rep.converged);
      finals.push_back(rep.final_policy);
    }
    for (std::size_t i = 0; i < finals.size(); ++i)
      for (std::size_t j = i + 1; j < finals.size(); ++j)
        EXPECT_LE(finals[i].max_abs_diff(finals[j]), 1e-3);
  }
}

TEST(StepRule, FixedAndDecaying) {
  const StepRule fixed = StepRule::fixed(0.25);
  EXPECT_DOUBLE_EQ(fixed.at(1), 0.25);
  EXPECT_DOUBLE_EQ(fixed.at(1000), 0.25);

  const StepRule dec = StepRule::decaying(0.75);
  EXPECT_DOUBLE_EQ(dec.at(1), 1.0);
  EXPECT_NEAR(dec.at(4), 0.3535533905932738, 1e-15);
  EXPECT_THROW(StepRule::decaying(0.5), std::invalid_argument);
  EXPECT_THROW(StepRule::decaying(1.1), std::invalid_argument);
  EXPECT_NO_THROW(StepRule::decaying(1.0));
}

TEST(DefaultFixedStep, InverseLipschitzScale) {
  std::vector<Rrh> rs(2);
  rs[0].capacity = rs[1].capacity = 100;
  rs[0].qoe_users = 10;
  rs[1].qoe_users = 20;
  std::vector<Mvno> ms(2);
  ms[0].user_count = 5;
  ms[1].user_count = 8;
  const GameInstance g(rs, ms);
  EXPECT_DOUBLE_EQ(default_fixed_step(g), 0.5 / (0.1 * 8.0));
}

TEST(LearningStep, ZeroStepKeepsUniform) {
  const auto g = symmetric_game(2, 4, 8.0, 30.0);
  LearnerState state(2, 4, StepRule::fixed(0.0));
  const auto xi0 = detail::policy_from_scores(g, state.scores);
  const auto xi1 = learning_step(g, state, xi0);
  for (std::size_t m = 0; m < 2; ++m)
    for (std::size_t r = 0; r < 4; ++r) EXPECT_DOUBLE_EQ(xi1.at(m, r), 2.0);
  EXPECT_EQ(state.iteration, 1u);
}

TEST(LearningStep, EqualScoresGiveUniformRows) {
  const auto g = symmetric_game(1, 5, 10.0, 30.0);
  Matrix z(1, 5, 3.7);
  const auto xi = detail::policy_from_scores(g, z);
  for (std::size_t r = 0; r < 5; ++r) EXPECT_NEAR(xi.at(0, r), 2.0, 1e-12);
}

TEST(LearningStep, ConservationByConstruction) {
  Rng rng(49);
  auto g = testutil::random_game(rng, 3, 6);
  LearnerState state(3, 6, StepRule::fixed(default_fixed_step(g)));
  auto xi = detail::policy_from_scores(g, state.scores);
  for (int it = 0; it < 50; ++it) {
    xi = learning_step(g, state, xi);
    for (std::size_t m = 0; m < 3; ++m) {
      const double n = g.mvno(m).user_count;
      EXPECT_LE(std::abs(xi.row_sum(m) - n), 1e-9 * std::max(1.0, n));
    }
  }
}

TEST(SolveLearning, FixedStepMatchesBrd) {
  // Scales chosen so a plain 0.5 step is stable: marginals stay order one.
  Rng rng(50);
  std::vector<Rrh> rs(5);
  for (auto& r : rs) {
    r.qoe_users = rng.uniform(20.0, 50.0);
    r.capacity = 2.0 * r.qoe_users;
    r.price = rng.uniform(0.0, 20.0);
  }
  std::vector<Mvno> ms(3);
  for (auto& m : ms) {
    m.user_count = rng.uniform(2.0, 6.0);
    m.price_weight = rng.uniform(0.0, 1e-3);
  }
  const GameInstance g(rs, ms);
  const SolveReport brd = solve_brd(g, feasible_uniform(g));
  ASSERT_TRUE(brd.converged);

  const SolveReport learn = solve_learning(g, StepRule::fixed(0.5));
  EXPECT_LE(learn.final_policy.max_abs_diff(brd.final_policy), 1e-3);
}

TEST(SolveLearning, DefaultStepMatchesBrdAcrossInstances) {
  Rng rng(51);
  for (int trial = 0; trial < 5; ++trial) {
    auto g = testutil::random_game(rng, 2 + rng.below(3), 2 + rng.below(5), 1e-3);
    const SolveReport brd = solve_brd(g, feasible_uniform(g));
    const SolveReport learn =
        solve_learning(g, StepRule::fixed(default_fixed_step(g)));
    ASSERT_TRUE(brd.converged);
    EXPECT_LE(learn.final_policy.max_abs_diff(brd.final_policy), 1e-3);
  }
}

TEST(SolveLearning, WarmStartNeedsPositiveRows) {
  const auto g = symmetric_game(2, 3, 6.0, 20.0);
  AllocationPolicy start(2, 3);
  start.at(0, 0) = 6.0;  // zero entries elsewhere
  start.at(1, 0) = 6.0;
  EXPECT_THROW(solve_learning(g, start, StepRule::fixed(0.1)),
               std::invalid_argument);
}

TEST(SolveLearning, WarmStartFromInteriorConverges) {
  Rng rng(52);
  auto g = testutil::random_game(rng, 2, 4, 1e-3);
  const auto start = feasible_uniform(g);
  const SolveReport rep = solve_learning(g, start, StepRule::fixed(default_fixed_step(g)));
  const SolveReport brd = solve_brd(g, feasible_uniform(g));
  EXPECT_LE(rep.final_policy.max_abs_diff(brd.final_policy), 1e-3);
}

TEST(ProjectSimplex, Properties) {
  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    std::vector<double> x(n);
    for (auto& v : x) v = rng.uniform(-5.0, 10.0);
    const double budget = rng.uniform(0.1, 20.0);
    auto p = x;
    detail::project_simplex(p, budget);
    double sum = 0.0;
    for (double v : p) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, budget, 1e-9 * std::max(1.0, budget));

    auto q = p;
    detail::project_simplex(q, budget);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(q[i], p[i], 1e-12);
  }
  std::vector<double> z{3.0, 4.0};
  detail::project_simplex(z, 0.0);
  EXPECT_DOUBLE_EQ(z[0], 0.0);
  EXPECT_DOUBLE_EQ(z[1], 0.0);
}

TEST(SocialOptimum, SinglePlayerEqualsBestResponse) {
  Rng rng(54);
  auto g = testutil::random_game(rng, 1, 5);
  const SolveReport opt = solve_social_optimum(g);
  ASSERT_TRUE(opt.converged);
  const auto br = best_response(g, AllocationPolicy(1, 5), 0);
  for (std::size_t r = 0; r < 5; ++r)
    EXPECT_NEAR(opt.final_policy.at(0, r), br[r], 1e-6);
}

TEST(SocialOptimum, SymmetricInstanceSymmetricOptimum) {
  const auto g = symmetric_game(2, 2, 10.0, 25.0);
  const SolveReport opt = solve_social_optimum(g);
  ASSERT_TRUE(opt.converged);
  const double total0 = opt.final_policy.at(0, 0) + opt.final_policy.at(1, 0);
  const double total1 = opt.final_policy.at(0, 1) + opt.final_policy.at(1, 1);
  EXPECT_NEAR(total0, total1, 1e-6);
  EXPECT_LE(social_welfare(g, opt.final_policy),
            social_welfare(g, solve_brd(g, feasible_uniform(g)).final_policy) + 1e-9);
}

TEST(SocialOptimum, NeverAboveEquilibriumCost) {
  Rng rng(55);
  for (int trial = 0; trial < 15; ++trial) {
    auto g = testutil::random_game(rng, 2 + rng.below(4), 2 + rng.below(6));
    const SolveReport ne = solve_brd(g, feasible_uniform(g));
    const SolveReport opt = solve_social_optimum(g, {}, &ne.final_policy);
    const double c_ne = social_welfare(g, ne.final_policy);
    const double c_opt = social_welfare(g, opt.final_policy);
    EXPECT_LE(c_opt, c_ne + 1e-9 * std::max(1.0, c_ne));
  }
}

TEST(PoaBound, KnownValues) {
  EXPECT_DOUBLE_EQ(poa_bound(1), 1.0);
  EXPECT_DOUBLE_EQ(poa_bound(4), 1.3);
  EXPECT_NEAR(poa_bound(1000000), 1.5, 1e-5);
}

TEST(PriceOfAnarchy, SinglePlayerIsOne) {
  Rng rng(56);
  for (int trial = 0; trial < 5; ++trial) {
    auto g = testutil::random_game(rng, 1, 2 + rng.below(5));
    const PoaResult res = price_of_anarchy(g);
    EXPECT_DOUBLE_EQ(res.bound, 1.0);
    EXPECT_NEAR(res.poa, 1.0, 1e-4);
  }
}

TEST(PriceOfAnarchy, SandwichOnRandomInstances) {
  Rng rng(57);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = testutil::random_game(rng, 2 + rng.below(4), 2 + rng.below(6));
    const PoaResult res = price_of_anarchy(g);
    EXPECT_GE(res.poa, 1.0 - 1e-6);
    EXPECT_LE(res.poa, res.bound + 1e-3);
    EXPECT_GT(res.cost_opt, 0.0);
    EXPECT_DOUBLE_EQ(res.poa, res.cost_ne / res.cost_opt);
  }
}

TEST(PriceOfAnarchy, DegenerateDemandThrows) {
  std::vector<Rrh> rs(2);
  for (auto& r : rs) {
    r.capacity = 10;
    r.qoe_users = 5;
  }
  std::vector<Mvno> ms(2);  // zero demand
  const GameInstance g(rs, ms);
  EXPECT_THROW(price_of_anarchy(g), DegenerateWelfareError);
}
