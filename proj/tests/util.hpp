#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ranslice/model.hpp"
#include "ranslice/rng.hpp"

namespace testutil {

// Random game with capacities and demands in the scales the solvers target.
inline ranslice::GameInstance random_game(ranslice::Rng& rng, std::size_t mvnos,
                                          std::size_t rrhs, double max_weight = 5e-3) {
  std::vector<ranslice::Rrh> rs(rrhs);
  for (std::size_t r = 0; r < rrhs; ++r) {
    rs[r].id = "r" + std::to_string(r);
    rs[r].price = rng.uniform(0.0, 20.0);
    rs[r].qoe_users = rng.uniform(5.0, 50.0);
    rs[r].capacity = rs[r].qoe_users * 2.0;
  }
  std::vector<ranslice::Mvno> ms(mvnos);
  for (std::size_t m = 0; m < mvnos; ++m) {
    ms[m].id = "m" + std::to_string(m);
    ms[m].user_count = rng.uniform(1.0, 30.0);
    ms[m].price_weight = rng.uniform(0.0, max_weight);
  }
  return ranslice::GameInstance(std::move(rs), std::move(ms));
}

// Random feasible policy: positive rows normalized to each player's demand.
inline ranslice::AllocationPolicy random_policy(ranslice::Rng& rng,
                                                const ranslice::GameInstance& game) {
  ranslice::AllocationPolicy xi(game.mvno_count(), game.rrh_count());
  for (std::size_t m = 0; m < game.mvno_count(); ++m) {
    double sum = 0.0;
    std::vector<double> raw(game.rrh_count());
    for (auto& v : raw) {
      v = rng.uniform(0.01, 1.0);
      sum += v;
    }
    for (std::size_t r = 0; r < game.rrh_count(); ++r)
      xi.at(m, r) = raw[r] / sum * game.mvno(m).user_count;
  }
  return xi;
}

}  // namespace testutil
