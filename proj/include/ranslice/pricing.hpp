#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ranslice/model.hpp"

namespace ranslice {

// Slot-indexed operator-side pricing. Prices never fall below the linear
// serving cost C(n) = to_cost_coeff * n of the most recent load.
struct PricingState {
  std::vector<double> prices;     // p_r(t), price units
  std::vector<double> prev_load;  // n_r(t-1), empty until two loads seen
  std::vector<double> last_load;  // n_r(t), empty until the first record
  double sigma = 0.1;             // price step per unit of load change
  double to_cost_coeff = 1.0;     // c0 in C(n) = c0 * n
  std::size_t slot = 0;
};

inline PricingState make_pricing_state(std::vector<double> prices, double sigma = 0.1,
                                       double to_cost_coeff = 1.0) {
  if (!(sigma > 0.0)) throw std::invalid_argument("pricing: sigma must be > 0");
  if (to_cost_coeff < 0.0)
    throw std::invalid_argument("pricing: cost coefficient must be >= 0");
  for (double p : prices)
    if (p < 0.0) throw std::invalid_argument("pricing: prices must be >= 0");
  PricingState st;
  st.prices = std::move(prices);
  st.sigma = sigma;
  st.to_cost_coeff = to_cost_coeff;
  return st;
}

// Load served per RRH under a solved allocation: column sums of xi.
inline std::vector<double> served_load(const GameInstance& game, const AllocationPolicy& xi) {
  if (xi.mvno_count() != game.mvno_count() || xi.rrh_count() != game.rrh_count())
    throw std::invalid_argument("served_load: policy shape does not match game");
  return xi.rrh_loads();
}

// Operator profit for one slot: revenue minus linear serving cost.
inline double profit(const PricingState& state, const std::vector<double>& load) {
  if (load.size() != state.prices.size())
    throw std::invalid_argument("profit: load size does not match prices");
  double total = 0.0;
  for (std::size_t r = 0; r < load.size(); ++r)
    total += state.prices[r] * load[r] - state.to_cost_coeff * load[r];
  return total;
}

// Advance one slot. The first observation is only recorded; from the second
// on, each price moves with the load trend and is clamped to the cost floor:
// p_r <- max(C(n_r(t)), p_r + sigma * (n_r(t) - n_r(t-1))).
inline PricingState update_prices(PricingState state, const std::vector<double>& new_load) {
  if (new_load.size() != state.prices.size())
    throw std::invalid_argument("update_prices: load size does not match prices");
  if (state.last_load.empty()) {
    state.last_load = new_load;
    state.slot += 1;
    return state;
  }
  state.prev_load = std::move(state.last_load);
  state.last_load = new_load;
  for (std::size_t r = 0; r < state.prices.size(); ++r) {
    const double floor = state.to_cost_coeff * state.last_load[r];
    const double proposed =
        state.prices[r] + state.sigma * (state.last_load[r] - state.prev_load[r]);
    state.prices[r] = std::max(floor, proposed);
  }
  state.slot += 1;
  return state;
}

enum class PricePolicyKind { Uniform, Weighted, Adaptive };

inline PricePolicyKind parse_price_policy(const std::string& name) {
  if (name == "uniform") return PricePolicyKind::Uniform;
  if (name == "weighted") return PricePolicyKind::Weighted;
  if (name == "adaptive") return PricePolicyKind::Adaptive;
  throw std::invalid_argument("unknown pricing policy: " + name);
}

// Initial per-RRH prices for a policy. Uniform and adaptive start flat at
// mean_price (adaptive then evolves via update_prices); weighted scales each
// price by the RRH's user capacity relative to the cluster maximum.
inline std::vector<double> make_policy(PricePolicyKind kind, const GameInstance& game,
                                       double mean_price) {
  if (!(mean_price > 0.0)) throw std::invalid_argument("make_policy: mean price must be > 0");
  std::vector<double> prices(game.rrh_count(), mean_price);
  if (kind == PricePolicyKind::Weighted) {
    double max_n = 0.0;
    for (const auto& r : game.rrhs()) max_n = std::max(max_n, r.qoe_users);
    for (std::size_t r = 0; r < game.rrh_count(); ++r)
      prices[r] = mean_price * game.rrh(r).qoe_users / max_n;
  }
  return prices;
}

}  // namespace ranslice
