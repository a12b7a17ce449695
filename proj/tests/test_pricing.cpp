#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ranslice/equilibrium.hpp"
#include "ranslice/pricing.hpp"
#include "ranslice/rng.hpp"
#include "util.hpp"

using namespace ranslice;

namespace {

GameInstance flat_game(std::size_t mvnos, std::size_t rrhs, double users,
                       double n_cap) {
  std::vector<Rrh> rs(rrhs);
  for (auto& r : rs) {
    r.capacity = 2.0 * n_cap;
    r.qoe_users = n_cap;
  }
  std::vector<Mvno> ms(mvnos);
  for (auto& m : ms) m.user_count = users;
  return GameInstance(std::move(rs), std::move(ms));
}

}  // namespace

TEST(PricingState, ConstructorValidation) {
  EXPECT_THROW(make_pricing_state({1.0}, 0.0), std::invalid_argument);
  EXPECT_THROW(make_pricing_state({1.0}, -0.1), std::invalid_argument);
  EXPECT_THROW(make_pricing_state({1.0}, 0.1, -1.0), std::invalid_argument);
  EXPECT_THROW(make_pricing_state({-1.0}), std::invalid_argument);
  const PricingState st = make_pricing_state({2.0, 3.0}, 0.2, 0.5);
  EXPECT_DOUBLE_EQ(st.sigma, 0.2);
  EXPECT_DOUBLE_EQ(st.to_cost_coeff, 0.5);
  EXPECT_EQ(st.slot, 0u);
}

TEST(ServedLoad, SinglePlayerSingleRrh) {
  const auto g = flat_game(1, 1, 10.0, 20.0);
  AllocationPolicy xi(1, 1);
  xi.at(0, 0) = 10.0;
  const auto load = served_load(g, xi);
  ASSERT_EQ(load.size(), 1u);
  EXPECT_DOUBLE_EQ(load[0], 10.0);
}

TEST(ServedLoad, SymmetricSplitEqualEntries) {
  const auto g = flat_game(2, 2, 8.0, 20.0);
  const auto xi = feasible_uniform(g);
  const auto load = served_load(g, xi);
  EXPECT_DOUBLE_EQ(load[0], 8.0);
  EXPECT_DOUBLE_EQ(load[1], 8.0);
}

TEST(ServedLoad, ConservesTotalDemand) {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testutil::random_game(rng, 1 + rng.below(5), 1 + rng.below(6));
    const auto xi = testutil::random_policy(rng, g);
    const auto load = served_load(g, xi);
    double total_load = 0.0, total_demand = 0.0;
    for (double v : load) total_load += v;
    for (std::size_t m = 0; m < g.mvno_count(); ++m)
      total_demand += g.mvno(m).user_count;
    EXPECT_NEAR(total_load, total_demand, 1e-9 * std::max(1.0, total_demand));
  }
}

TEST(ServedLoad, ShapeMismatchThrows) {
  const auto g = flat_game(2, 2, 8.0, 20.0);
  EXPECT_THROW(served_load(g, AllocationPolicy(1, 2)), std::invalid_argument);
}

TEST(Profit, ZeroCostIsPureRevenue) {
  const PricingState st = make_pricing_state({2.0, 5.0}, 0.1, 0.0);
  EXPECT_DOUBLE_EQ(profit(st, {3.0, 4.0}), 6.0 + 20.0);
}

TEST(Profit, BreakEvenAtCostPrice) {
  const PricingState st = make_pricing_state({1.5, 1.5}, 0.1, 1.5);
  EXPECT_DOUBLE_EQ(profit(st, {7.0, 11.0}), 0.0);
}

TEST(Profit, MatchesManualSum) {
  Rng rng(62);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    std::vector<double> prices(n), load(n);
    for (auto& p : prices) p = rng.uniform(0.0, 15.0);
    for (auto& l : load) l = rng.uniform(0.0, 100.0);
    const double c0 = rng.uniform(0.0, 2.0);
    const PricingState st = make_pricing_state(prices, 0.1, c0);
    double manual = 0.0;
    for (std::size_t r = 0; r < n; ++r) manual += prices[r] * load[r] - c0 * load[r];
    EXPECT_NEAR(profit(st, load), manual, 1e-9 * std::max(1.0, std::abs(manual)));
  }
}

TEST(Profit, SizeMismatchThrows) {
  const PricingState st = make_pricing_state({1.0, 2.0});
  EXPECT_THROW(profit(st, {1.0}), std::invalid_argument);
}

TEST(UpdatePrices, FirstCallOnlyRecords) {
  PricingState st = make_pricing_state({4.0, 6.0}, 0.5, 0.1);
  st = update_prices(st, {10.0, 20.0});
  EXPECT_DOUBLE_EQ(st.prices[0], 4.0);
  EXPECT_DOUBLE_EQ(st.prices[1], 6.0);
  EXPECT_EQ(st.slot, 1u);
  ASSERT_EQ(st.last_load.size(), 2u);
  EXPECT_TRUE(st.prev_load.empty());
}

TEST(UpdatePrices, FlatLoadLeavesPricesAlone) {
  PricingState st = make_pricing_state({4.0, 6.0}, 0.5, 0.1);
  st = update_prices(st, {10.0, 20.0});
  st = update_prices(st, {10.0, 20.0});
  EXPECT_DOUBLE_EQ(st.prices[0], 4.0);
  EXPECT_DOUBLE_EQ(st.prices[1], 6.0);
  EXPECT_EQ(st.slot, 2u);
}

TEST(UpdatePrices, RisingLoadRaisesPrice) {
  PricingState st = make_pricing_state({4.0}, 0.5, 0.1);
  st = update_prices(st, {10.0});
  st = update_prices(st, {14.0});
  EXPECT_DOUBLE_EQ(st.prices[0], 4.0 + 0.5 * 4.0);
}

TEST(UpdatePrices, FallingLoadClampsToFloor) {
  PricingState st = make_pricing_state({1.0}, 2.0, 1.0);
  st = update_prices(st, {30.0});
  st = update_prices(st, {20.0});
  // Proposed 1 - 20 = -19, floor c0 * 20 = 20.
  EXPECT_DOUBLE_EQ(st.prices[0], 20.0);
}

TEST(UpdatePrices, SignFollowsLoadTrendOffFloor) {
  Rng rng(63);
  for (int trial = 0; trial < 200; ++trial) {
    const double p0 = rng.uniform(50.0, 100.0);  // far above any floor below
    PricingState st = make_pricing_state({p0}, rng.uniform(0.01, 0.5), 0.1);
    const double l1 = rng.uniform(0.0, 30.0);
    const double l2 = rng.uniform(0.0, 30.0);
    st = update_prices(st, {l1});
    st = update_prices(st, {l2});
    const double delta = st.prices[0] - p0;
    if (l2 > l1) EXPECT_GT(delta, 0.0);
    else if (l2 < l1) EXPECT_LT(delta, 0.0);
    else EXPECT_DOUBLE_EQ(delta, 0.0);
  }
}

TEST(UpdatePrices, StationaryLoadIsFixedPoint) {
  PricingState st = make_pricing_state({9.0, 12.0}, 0.3, 0.2);
  const std::vector<double> load{15.0, 25.0};
  st = update_prices(st, load);
  for (int t = 0; t < 10; ++t) {
    st = update_prices(st, load);
    EXPECT_DOUBLE_EQ(st.prices[0], 9.0);
    EXPECT_DOUBLE_EQ(st.prices[1], 12.0);
  }
}

TEST(UpdatePrices, FloorInvariantUnderRandomWalk) {
  Rng rng(64);
  PricingState st = make_pricing_state({5.0, 5.0, 5.0}, 0.4, 0.8);
  std::vector<double> load(3);
  for (int t = 0; t < 500; ++t) {
    for (auto& l : load) l = rng.uniform(0.0, 40.0);
    st = update_prices(st, load);
    if (t >= 1)
      for (std::size_t r = 0; r < 3; ++r)
        EXPECT_GE(st.prices[r], 0.8 * load[r] - 1e-12);
  }
}

TEST(UpdatePrices, SizeMismatchThrows) {
  PricingState st = make_pricing_state({1.0, 2.0});
  EXPECT_THROW(update_prices(st, {1.0}), std::invalid_argument);
}

TEST(MakePolicy, UniformIsFlat) {
  const auto g = flat_game(2, 3, 5.0, 20.0);
  const auto prices = make_policy(PricePolicyKind::Uniform, g, 10.0);
  for (double p : prices) EXPECT_DOUBLE_EQ(p, 10.0);
}

TEST(MakePolicy, WeightedScalesByCapacity) {
  std::vector<Rrh> rs(3);
  rs[0].qoe_users = 10;
  rs[1].qoe_users = 40;
  rs[2].qoe_users = 20;
  for (auto& r : rs) r.capacity = 100;
  std::vector<Mvno> ms(1);
  ms[0].user_count = 5;
  const GameInstance g(rs, ms);
  const auto prices = make_policy(PricePolicyKind::Weighted, g, 10.0);
  EXPECT_DOUBLE_EQ(prices[0], 2.5);
  EXPECT_DOUBLE_EQ(prices[1], 10.0);  // the largest RRH pins the mean price
  EXPECT_DOUBLE_EQ(prices[2], 5.0);
}

TEST(MakePolicy, WeightedEqualCapacitiesCollapseToUniform) {
  const auto g = flat_game(1, 4, 5.0, 30.0);
  const auto prices = make_policy(PricePolicyKind::Weighted, g, 7.0);
  for (double p : prices) EXPECT_DOUBLE_EQ(p, 7.0);
}

TEST(MakePolicy, AdaptiveStartsUniform) {
  const auto g = flat_game(1, 3, 5.0, 30.0);
  const auto prices = make_policy(PricePolicyKind::Adaptive, g, 10.0);
  for (double p : prices) EXPECT_DOUBLE_EQ(p, 10.0);
}

TEST(MakePolicy, NonPositiveMeanThrows) {
  const auto g = flat_game(1, 2, 5.0, 30.0);
  EXPECT_THROW(make_policy(PricePolicyKind::Uniform, g, 0.0), std::invalid_argument);
}

TEST(ParsePricePolicy, NamesAndErrors) {
  EXPECT_EQ(parse_price_policy("uniform"), PricePolicyKind::Uniform);
  EXPECT_EQ(parse_price_policy("weighted"), PricePolicyKind::Weighted);
  EXPECT_EQ(parse_price_policy("adaptive"), PricePolicyKind::Adaptive);
  EXPECT_THROW(parse_price_policy("surge"), std::invalid_argument);
}
