#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ranslice/costs.hpp"
#include "ranslice/model.hpp"

namespace ranslice {

struct DegenerateWelfareError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrajectoryPoint {
  AllocationPolicy policy;
  double potential = 0.0;
  std::vector<double> congestion;
};

struct SolveReport {
  AllocationPolicy final_policy;
  std::size_t iterations = 0;
  bool converged = false;
  double residual = 0.0;  // convergence metric at exit
  std::vector<TrajectoryPoint> trajectory;
};

// ---------------------------------------------------------------------------
// Best response: minimize f.x + x'diag(2/N)x/2 over the scaled simplex
// {x >= 0, sum x = n_m}. Separable KKT system; x_r(lambda) =
// max(0, (lambda - f_r) N_r / 2), with lambda fixed by the budget. Solved
// exactly with a sorted breakpoint scan.
// ---------------------------------------------------------------------------

namespace detail {

// Generic scaled-simplex QP: min sum_r (f_r x_r + x_r^2 / n_scale_r), i.e.
// quadratic coefficient q_r = 2 / n_scale_r, subject to x >= 0, sum x = budget.
inline std::vector<double> separable_simplex_qp(const std::vector<double>& f,
                                                const std::vector<double>& n_scale,
                                                double budget) {
  const std::size_t r_count = f.size();
  std::vector<double> x(r_count, 0.0);
  if (budget <= 0.0) return x;

  std::vector<std::size_t> order(r_count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });

  // Scan prefixes of the sorted costs; the active set is the largest prefix
  // whose water level exceeds its own last breakpoint.
  double weight_sum = 0.0;  // sum of N_r/2 over the candidate active set
  double fw_sum = 0.0;      // sum of f_r * N_r/2
  double lambda = 0.0;
  std::size_t active = 0;
  for (std::size_t i = 0; i < r_count; ++i) {
    const std::size_t r = order[i];
    const double w = 0.5 * n_scale[r];
    weight_sum += w;
    fw_sum += f[r] * w;
    const double cand = (budget + fw_sum) / weight_sum;
    if (cand > f[r]) {
      lambda = cand;
      active = i + 1;
    } else {
      break;  // f is sorted, so no later prefix can reopen
    }
  }
  for (std::size_t i = 0; i < active; ++i) {
    const std::size_t r = order[i];
    x[r] = std::max(0.0, (lambda - f[r]) * 0.5 * n_scale[r]);
  }
  return x;
}

}  // namespace detail

// Opponent-dependent linear term of the best-response QP.
inline std::vector<double> best_response_linear_term(const GameInstance& game,
                                                     const AllocationPolicy& xi,
                                                     std::size_t m) {
  std::vector<double> f(game.rrh_count());
  for (std::size_t r = 0; r < game.rrh_count(); ++r) {
    double others = 0.0;
    for (std::size_t k = 0; k < game.mvno_count(); ++k)
      if (k != m) others += xi.at(k, r);
    f[r] = others / game.rrh(r).qoe_users +
           game.mvno(m).price_weight * game.rrh(r).price;
  }
  return f;
}

// Unique cost-minimizing row for player m against the opponents in xi.
inline std::vector<double> best_response(const GameInstance& game,
                                         const AllocationPolicy& xi, std::size_t m) {
  const std::vector<double> f = best_response_linear_term(game, xi, m);
  std::vector<double> n_scale(game.rrh_count());
  for (std::size_t r = 0; r < game.rrh_count(); ++r) n_scale[r] = game.rrh(r).qoe_users;
  return detail::separable_simplex_qp(f, n_scale, game.mvno(m).user_count);
}

struct SolveOptions {
  double tol = 1e-8;
  std::size_t max_rounds = 1000;
  bool record_trajectory = false;
};

namespace detail {

inline TrajectoryPoint make_snapshot(const GameInstance& game, const AllocationPolicy& xi) {
  return TrajectoryPoint{xi, potential(game, xi), congestion_levels(game, xi)};
}

}  // namespace detail

// Sequential best-response dynamics. Each full round replaces every row in
// canonical order; stops when the max per-coordinate change in a round,
// relative to max(1, n_m), drops to tol.
inline SolveReport solve_brd(const GameInstance& game, const AllocationPolicy& start,
                             const SolveOptions& opts = {}) {
  AllocationPolicy xi = start;
  SolveReport report;
  if (opts.record_trajectory) report.trajectory.push_back(detail::make_snapshot(game, xi));

  double residual = std::numeric_limits<double>::infinity();
  std::size_t round = 0;
  for (; round < opts.max_rounds; ++round) {
    residual = 0.0;
    for (std::size_t m = 0; m < game.mvno_count(); ++m) {
      const std::vector<double> br = best_response(game, xi, m);
      const double scale = std::max(1.0, game.mvno(m).user_count);
      for (std::size_t r = 0; r < game.rrh_count(); ++r) {
        residual = std::max(residual, std::abs(br[r] - xi.at(m, r)) / scale);
        xi.at(m, r) = br[r];
      }
    }
    if (opts.record_trajectory) report.trajectory.push_back(detail::make_snapshot(game, xi));
    if (residual <= opts.tol) {
      ++round;
      break;
    }
  }
  report.final_policy = std::move(xi);
  report.iterations = round;
  report.converged = residual <= opts.tol;
  report.residual = residual;
  return report;
}

// ---------------------------------------------------------------------------
// Exponential learning (multiplicative-weights style score dynamics).
// ---------------------------------------------------------------------------

struct StepRule {
  enum class Kind { Fixed, Decaying } kind = Kind::Fixed;
  double gamma = 0.5;  // fixed step, or unused under the decaying rule
  double beta = 0.75;  // decay exponent in (0.5, 1]

  static StepRule fixed(double gamma) { return StepRule{Kind::Fixed, gamma, 0.0}; }
  static StepRule decaying(double beta) {
    if (!(beta > 0.5 && beta <= 1.0))
      throw std::invalid_argument("StepRule: decay exponent must lie in (0.5, 1]");
    return StepRule{Kind::Decaying, 0.0, beta};
  }

  double at(std::size_t n) const {
    if (kind == Kind::Fixed) return gamma;
    return 1.0 / std::pow(static_cast<double>(n), beta);
  }
};

// Default fixed step: inverse-Lipschitz heuristic over the game's scales.
inline double default_fixed_step(const GameInstance& game) {
  double max_inv_n = 0.0;
  for (const auto& r : game.rrhs()) max_inv_n = std::max(max_inv_n, 1.0 / r.qoe_users);
  double max_users = 0.0;
  for (const auto& m : game.mvnos()) max_users = std::max(max_users, m.user_count);
  if (max_inv_n <= 0.0 || max_users <= 0.0) return 0.5;
  return 0.5 / (max_inv_n * max_users);
}

struct LearnerState {
  Matrix scores;  // z, one row per MVNO
  StepRule step_rule;
  std::size_t iteration = 0;  // completed steps; step n+1 uses gamma_{n+1}

  LearnerState(std::size_t mvnos, std::size_t rrhs, StepRule rule)
      : scores(mvnos, rrhs, 0.0), step_rule(rule) {}
};

namespace detail {

// Row-wise exponential map onto the scaled simplex. Max-subtraction keeps the
// exponentials bounded; the scores themselves are recentred by the caller.
inline AllocationPolicy policy_from_scores(const GameInstance& game, const Matrix& z) {
  AllocationPolicy xi(game.mvno_count(), game.rrh_count());
  for (std::size_t m = 0; m < game.mvno_count(); ++m) {
    const double n_m = game.mvno(m).user_count;
    double zmax = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < game.rrh_count(); ++r) zmax = std::max(zmax, z(m, r));
    double denom = 0.0;
    for (std::size_t r = 0; r < game.rrh_count(); ++r) denom += std::exp(z(m, r) - zmax);
    for (std::size_t r = 0; r < game.rrh_count(); ++r)
      xi.at(m, r) = n_m * std::exp(z(m, r) - zmax) / denom;
  }
  return xi;
}

inline void recenter_rows(Matrix& z) {
  for (std::size_t m = 0; m < z.rows(); ++m) {
    double mean = 0.0;
    for (std::size_t r = 0; r < z.cols(); ++r) mean += z(m, r);
    mean /= static_cast<double>(z.cols());
    for (std::size_t r = 0; r < z.cols(); ++r) z(m, r) -= mean;
  }
}

}  // namespace detail

// One simultaneous learning step: every marginal cost is evaluated at the
// incoming policy, scores move against the gradient, and the exponential map
// produces the next policy. O(R*M) per call. Only the public congestion
// levels and the player's own data enter each row's update.
inline AllocationPolicy learning_step(const GameInstance& game, LearnerState& state,
                                      const AllocationPolicy& xi) {
  const std::size_t n = state.iteration + 1;
  const double gamma = state.step_rule.at(n);

  std::vector<double> congestion(game.rrh_count());
  for (std::size_t r = 0; r < game.rrh_count(); ++r) {
    double load = 0.0;
    for (std::size_t m = 0; m < game.mvno_count(); ++m) load += xi.at(m, r);
    congestion[r] = load / game.rrh(r).qoe_users;
  }
  for (std::size_t m = 0; m < game.mvno_count(); ++m) {
    const double weight = game.mvno(m).price_weight;
    for (std::size_t r = 0; r < game.rrh_count(); ++r) {
      const double v = congestion[r] + weight * game.rrh(r).price +
                       xi.at(m, r) / game.rrh(r).qoe_users;
      state.scores(m, r) -= gamma * v;
    }
  }
  detail::recenter_rows(state.scores);
  state.iteration = n;
  return detail::policy_from_scores(game, state.scores);
}

struct LearningOptions {
  double tol = 1e-6;                // max per-coordinate policy change
  std::size_t max_iters = 1000000;
  bool record_trajectory = false;
};

// Iterate the exponential learning scheme from zero scores (uniform split).
inline SolveReport solve_learning(const GameInstance& game, const StepRule& rule,
                                  const LearningOptions& opts = {}) {
  LearnerState state(game.mvno_count(), game.rrh_count(), rule);
  AllocationPolicy xi = detail::policy_from_scores(game, state.scores);
  SolveReport report;
  if (opts.record_trajectory) report.trajectory.push_back(detail::make_snapshot(game, xi));

  double residual = std::numeric_limits<double>::infinity();
  std::size_t iter = 0;
  while (iter < opts.max_iters) {
    AllocationPolicy next = learning_step(game, state, xi);
    residual = next.max_abs_diff(xi);
    xi = std::move(next);
    ++iter;
    if (opts.record_trajectory) report.trajectory.push_back(detail::make_snapshot(game, xi));
    if (residual <= opts.tol) break;
  }
  report.final_policy = std::move(xi);
  report.iterations = iter;
  report.converged = residual <= opts.tol;
  report.residual = residual;
  return report;
}

// Same scheme started from a strictly positive policy (scores from logs).
inline SolveReport solve_learning(const GameInstance& game, const AllocationPolicy& start,
                                  const StepRule& rule, const LearningOptions& opts = {}) {
  LearnerState state(game.mvno_count(), game.rrh_count(), rule);
  for (std::size_t m = 0; m < game.mvno_count(); ++m) {
    const double n_m = game.mvno(m).user_count;
    for (std::size_t r = 0; r < game.rrh_count(); ++r) {
      const double share = n_m > 0.0 ? start.at(m, r) / n_m : 1.0;
      if (!(share > 0.0))
        throw std::invalid_argument("solve_learning: start must have strictly positive rows");
      state.scores(m, r) = std::log(share);
    }
  }
  detail::recenter_rows(state.scores);
  AllocationPolicy xi = detail::policy_from_scores(game, state.scores);
  SolveReport report;
  if (opts.record_trajectory) report.trajectory.push_back(detail::make_snapshot(game, xi));

  double residual = std::numeric_limits<double>::infinity();
  std::size_t iter = 0;
  while (iter < opts.max_iters) {
    AllocationPolicy next = learning_step(game, state, xi);
    residual = next.max_abs_diff(xi);
    xi = std::move(next);
    ++iter;
    if (opts.record_trajectory) report.trajectory.push_back(detail::make_snapshot(game, xi));
    if (residual <= opts.tol) break;
  }
  report.final_policy = std::move(xi);
  report.iterations = iter;
  report.converged = residual <= opts.tol;
  report.residual = residual;
  return report;
}

// ---------------------------------------------------------------------------
// Social optimum: projected gradient with backtracking on the convex
// quadratic sum of costs, over the product of per-player scaled simplices.
// ---------------------------------------------------------------------------

namespace detail {

// Euclidean projection onto {x >= 0, sum x = budget}.
inline void project_simplex(std::vector<double>& x, double budget) {
  const std::size_t n = x.size();
  if (budget <= 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return;
  }
  std::vector<double> u = x;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    css += u[i];
    const double t = (css - budget) / static_cast<double>(i + 1);
    if (u[i] > t) theta = t;  // largest prefix with positive water level wins
  }
  for (auto& v : x) v = std::max(0.0, v - theta);
}

inline void project_rows(const GameInstance& game, AllocationPolicy& xi) {
  std::vector<double> row(game.rrh_count());
  for (std::size_t m = 0; m < game.mvno_count(); ++m) {
    for (std::size_t r = 0; r < game.rrh_count(); ++r) row[r] = xi.at(m, r);
    project_simplex(row, game.mvno(m).user_count);
    for (std::size_t r = 0; r < game.rrh_count(); ++r) xi.at(m, r) = row[r];
  }
}

// Social cost and its gradient, via the aggregate-load identity
// C = sum_r (X_r^2 / N_r + sum_m eta_{m,r} xi_{m,r}).
inline double social_cost_and_gradient(const GameInstance& game, const AllocationPolicy& xi,
                                       Matrix* grad) {
  std::vector<double> loads = xi.rrh_loads();
  double cost = 0.0;
  for (std::size_t r = 0; r < game.rrh_count(); ++r)
    cost += loads[r] * loads[r] / game.rrh(r).qoe_users;
  for (std::size_t m = 0; m < game.mvno_count(); ++m) {
    const double weight = game.mvno(m).price_weight;
    for (std::size_t r = 0; r < game.rrh_count(); ++r) {
      const double eta = weight * game.rrh(r).price;
      cost += eta * xi.at(m, r);
      if (grad)
        (*grad)(m, r) = 2.0 * loads[r] / game.rrh(r).qoe_users + eta;
    }
  }
  return cost;
}

}  // namespace detail

struct SocialOptions {
  double tol = 1e-8;  // sup-norm of the unit-step projected-gradient residual
  std::size_t max_iters = 200000;
};

inline SolveReport solve_social_optimum(const GameInstance& game,
                                        const SocialOptions& opts = {},
                                        const AllocationPolicy* warm_start = nullptr) {
  AllocationPolicy xi = warm_start ? *warm_start : feasible_uniform(game);
  detail::project_rows(game, xi);

  Matrix grad(game.mvno_count(), game.rrh_count());
  double cost = detail::social_cost_and_gradient(game, xi, &grad);

  // Lipschitz seed for the step size: 2 M / min N_r bounds the Hessian.
  double min_n = std::numeric_limits<double>::infinity();
  for (const auto& r : game.rrhs()) min_n = std::min(min_n, r.qoe_users);
  double step = min_n / (2.0 * static_cast<double>(game.mvno_count()));

  SolveReport report;
  double residual = std::numeric_limits<double>::infinity();
  std::size_t iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    // Unit-step projected-gradient residual, the exit criterion.
    AllocationPolicy probe = xi;
    for (std::size_t m = 0; m < game.mvno_count(); ++m)
      for (std::size_t r = 0; r < game.rrh_count(); ++r)
        probe.at(m, r) -= grad(m, r);
    detail::project_rows(game, probe);
    residual = probe.max_abs_diff(xi);
    if (residual <= opts.tol) break;

    // Backtracking proximal step.
    bool accepted = false;
    for (int bt = 0; bt < 60 && !accepted; ++bt) {
      AllocationPolicy cand = xi;
      for (std::size_t m = 0; m < game.mvno_count(); ++m)
        for (std::size_t r = 0; r < game.rrh_count(); ++r)
          cand.at(m, r) -= step * grad(m, r);
      detail::project_rows(game, cand);

      double lin = 0.0, sq = 0.0;
      for (std::size_t m = 0; m < game.mvno_count(); ++m)
        for (std::size_t r = 0; r < game.rrh_count(); ++r) {
          const double d = cand.at(m, r) - xi.at(m, r);
          lin += grad(m, r) * d;
          sq += d * d;
        }
      const double cand_cost = detail::social_cost_and_gradient(game, cand, nullptr);
      if (cand_cost <= cost + lin + sq / (2.0 * step) + 1e-15 * std::abs(cost)) {
        xi = std::move(cand);
        cost = cand_cost;
        accepted = true;
      } else {
        step *= 0.5;
      }
    }
    if (!accepted) break;  // step underflow; residual reported as-is
    detail::social_cost_and_gradient(game, xi, &grad);
    step *= 1.3;  // let the step recover between backtracks
  }

  report.final_policy = std::move(xi);
  report.iterations = iter;
  report.converged = residual <= opts.tol;
  report.residual = residual;
  return report;
}

struct PoaResult {
  double poa = 0.0;
  double bound = 0.0;  // (3M+1)/(2M+2)
  double cost_ne = 0.0;
  double cost_opt = 0.0;
  AllocationPolicy ne_policy;
  AllocationPolicy opt_policy;
};

inline double poa_bound(std::size_t mvno_count) {
  const double m = static_cast<double>(mvno_count);
  return (3.0 * m + 1.0) / (2.0 * m + 2.0);
}

// Efficiency of the unique NE against the social optimum. The optimum search
// starts from the NE, so its cost estimate never exceeds the NE cost.
inline PoaResult price_of_anarchy(const GameInstance& game,
                                  const SolveOptions& brd_opts = {},
                                  const SocialOptions& social_opts = {}) {
  SolveReport ne = solve_brd(game, feasible_uniform(game), brd_opts);
  SolveReport opt = solve_social_optimum(game, social_opts, &ne.final_policy);

  PoaResult out;
  out.cost_ne = social_welfare(game, ne.final_policy);
  out.cost_opt = social_welfare(game, opt.final_policy);
  out.bound = poa_bound(game.mvno_count());
  if (!(out.cost_opt > 1e-12))
    throw DegenerateWelfareError("price_of_anarchy: social optimum cost is ~0");
  out.poa = out.cost_ne / out.cost_opt;
  out.ne_policy = std::move(ne.final_policy);
  out.opt_policy = std::move(opt.final_policy);
  return out;
}

}  // namespace ranslice
