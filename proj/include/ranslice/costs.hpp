#pragma once

#include <cstddef>
#include <vector>

#include "ranslice/model.hpp"

namespace ranslice {

struct CostBreakdown {
  double congestion_cost = 0.0;  // load-weighted congestion across the slice
  double monetary_cost = 0.0;    // price-weighted deployment spend
  double total = 0.0;
};

// Aggregate load on RRH r normalized by its QoE capacity N_r.
inline double congestion_level(const GameInstance& game, const AllocationPolicy& xi,
                               std::size_t r) {
  double load = 0.0;
  for (std::size_t m = 0; m < game.mvno_count(); ++m) load += xi.at(m, r);
  return load / game.rrh(r).qoe_users;
}

inline std::vector<double> congestion_levels(const GameInstance& game,
                                             const AllocationPolicy& xi) {
  std::vector<double> levels(game.rrh_count());
  for (std::size_t r = 0; r < game.rrh_count(); ++r) levels[r] = congestion_level(game, xi, r);
  return levels;
}

// Per-unit cost MVNO m sees on RRH r: congestion plus weighted price.
inline double unit_cost(const GameInstance& game, const AllocationPolicy& xi,
                        std::size_t m, std::size_t r) {
  return congestion_level(game, xi, r) + game.mvno(m).price_weight * game.rrh(r).price;
}

// Partial derivative of m's total cost in its own allocation at r.
inline double marginal_cost(const GameInstance& game, const AllocationPolicy& xi,
                            std::size_t m, std::size_t r) {
  return unit_cost(game, xi, m, r) + xi.at(m, r) / game.rrh(r).qoe_users;
}

inline CostBreakdown player_cost(const GameInstance& game, const AllocationPolicy& xi,
                                 std::size_t m) {
  CostBreakdown out;
  const double weight = game.mvno(m).price_weight;
  for (std::size_t r = 0; r < game.rrh_count(); ++r) {
    const double amount = xi.at(m, r);
    out.congestion_cost += amount * congestion_level(game, xi, r);
    out.monetary_cost += weight * amount * game.rrh(r).price;
  }
  out.total = out.congestion_cost + out.monetary_cost;
  return out;
}

inline double social_welfare(const GameInstance& game, const AllocationPolicy& xi) {
  double total = 0.0;
  for (std::size_t m = 0; m < game.mvno_count(); ++m) total += player_cost(game, xi, m).total;
  return total;
}

// Exact potential of the game: any unilateral deviation changes it by exactly
// the deviating player's cost change. The cross term runs over the canonical
// player order of the GameInstance.
inline double potential(const GameInstance& game, const AllocationPolicy& xi) {
  double phi = 0.0;
  for (std::size_t r = 0; r < game.rrh_count(); ++r) {
    const double inv_n = 1.0 / game.rrh(r).qoe_users;
    const double price = game.rrh(r).price;
    double below = 0.0;  // running sum of xi_{k,r} for k < m
    for (std::size_t m = 0; m < game.mvno_count(); ++m) {
      const double x = xi.at(m, r);
      phi += inv_n * x * x + game.mvno(m).price_weight * price * x + inv_n * x * below;
      below += x;
    }
  }
  return phi;
}

}  // namespace ranslice
