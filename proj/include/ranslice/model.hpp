#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ranslice {

// Remote radio head: one congestible resource node of the game.
struct Rrh {
  std::string id;
  double x = 0.0;           // meters, local planar projection
  double y = 0.0;
  int class_id = 0;         // performance class in [0, L)
  double price = 0.0;       // leasing price p_r, Price Units
  double capacity = 0.0;    // resource budget per slot
  double qoe_users = 0.0;   // max MUs servable without QoE degradation
};

// Mobile virtual network operator: one player.
struct Mvno {
  std::string id;
  double user_count = 0.0;    // expected MUs in the cluster
  double price_weight = 0.0;  // weight of the monetary term in the cost
};

// Dense row-major matrix, just enough for policies and learner scores.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double row_sum(std::size_t r) const {
    double s = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) s += v_[r * cols_ + c];
    return s;
  }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  double max_abs_diff(const Matrix& o) const {
    double d = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) d = std::max(d, std::abs(v_[i] - o.v_[i]));
    return d;
  }

  const std::vector<double>& data() const { return v_; }
  std::vector<double>& data() { return v_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> v_;
};

// The strategy profile: one row per MVNO, one column per RRH. Entries are
// fractional MU counts; every row must sum to that MVNO's user count.
class AllocationPolicy {
 public:
  AllocationPolicy() = default;
  AllocationPolicy(std::size_t mvnos, std::size_t rrhs) : m_(mvnos, rrhs) {}
  explicit AllocationPolicy(Matrix m) : m_(std::move(m)) {}

  double& at(std::size_t mvno, std::size_t rrh) { return m_(mvno, rrh); }
  double at(std::size_t mvno, std::size_t rrh) const { return m_(mvno, rrh); }

  std::size_t mvno_count() const { return m_.rows(); }
  std::size_t rrh_count() const { return m_.cols(); }

  double row_sum(std::size_t mvno) const { return m_.row_sum(mvno); }

  // Aggregate load per RRH (column sums).
  std::vector<double> rrh_loads() const {
    std::vector<double> loads(m_.cols(), 0.0);
    for (std::size_t m = 0; m < m_.rows(); ++m)
      for (std::size_t r = 0; r < m_.cols(); ++r) loads[r] += m_(m, r);
    return loads;
  }

  double max_abs_diff(const AllocationPolicy& o) const { return m_.max_abs_diff(o.m_); }

  const Matrix& matrix() const { return m_; }
  Matrix& matrix() { return m_; }

 private:
  Matrix m_;
};

// Immutable bundle defining one game on one cluster.
class GameInstance {
 public:
  GameInstance(std::vector<Rrh> rrhs, std::vector<Mvno> mvnos)
      : rrhs_(std::move(rrhs)), mvnos_(std::move(mvnos)) {
    if (rrhs_.empty()) throw std::invalid_argument("GameInstance: no RRHs");
    if (mvnos_.empty()) throw std::invalid_argument("GameInstance: no MVNOs");
    for (const auto& r : rrhs_) {
      if (!(r.capacity > 0.0)) throw std::invalid_argument("GameInstance: capacity must be positive");
      if (r.price < 0.0) throw std::invalid_argument("GameInstance: price must be non-negative");
      if (!(r.qoe_users > 0.0)) throw std::invalid_argument("GameInstance: qoe_users must be populated");
    }
    for (const auto& m : mvnos_) {
      if (m.user_count < 0.0) throw std::invalid_argument("GameInstance: user_count must be non-negative");
      if (m.price_weight < 0.0) throw std::invalid_argument("GameInstance: price_weight must be non-negative");
    }
  }

  const std::vector<Rrh>& rrhs() const { return rrhs_; }
  const std::vector<Mvno>& mvnos() const { return mvnos_; }

  std::size_t rrh_count() const { return rrhs_.size(); }
  std::size_t mvno_count() const { return mvnos_.size(); }

  const Rrh& rrh(std::size_t r) const { return rrhs_.at(r); }
  const Mvno& mvno(std::size_t m) const { return mvnos_.at(m); }

 private:
  std::vector<Rrh> rrhs_;
  std::vector<Mvno> mvnos_;
};

// Canonical interior starting point: every MVNO splits its users evenly.
inline AllocationPolicy feasible_uniform(const GameInstance& game) {
  AllocationPolicy xi(game.mvno_count(), game.rrh_count());
  const double r_inv = 1.0 / static_cast<double>(game.rrh_count());
  for (std::size_t m = 0; m < game.mvno_count(); ++m) {
    const double share = game.mvno(m).user_count * r_inv;
    for (std::size_t r = 0; r < game.rrh_count(); ++r) xi.at(m, r) = share;
  }
  return xi;
}

// Resources granted to MVNO m at RRH r under proportional slicing.
// An unoccupied RRH grants nothing.
inline double proportional_share(const GameInstance& game, const AllocationPolicy& xi,
                                 std::size_t m, std::size_t r) {
  if (m >= game.mvno_count() || r >= game.rrh_count())
    throw std::out_of_range("proportional_share: index out of range");
  double total = 0.0;
  for (std::size_t k = 0; k < game.mvno_count(); ++k) total += xi.at(k, r);
  if (total <= 0.0) return 0.0;
  return xi.at(m, r) / total * game.rrh(r).capacity;
}

// Same game with leasing prices replaced (one per RRH, canonical order).
inline GameInstance with_prices(const GameInstance& game, const std::vector<double>& prices) {
  if (prices.size() != game.rrh_count())
    throw std::invalid_argument("with_prices: price count does not match RRHs");
  std::vector<Rrh> rrhs = game.rrhs();
  for (std::size_t r = 0; r < rrhs.size(); ++r) rrhs[r].price = prices[r];
  return GameInstance(std::move(rrhs), game.mvnos());
}

// Same game with per-MVNO demand replaced.
inline GameInstance with_user_counts(const GameInstance& game,
                                     const std::vector<double>& counts) {
  if (counts.size() != game.mvno_count())
    throw std::invalid_argument("with_user_counts: count does not match MVNOs");
  std::vector<Mvno> mvnos = game.mvnos();
  for (std::size_t m = 0; m < mvnos.size(); ++m) mvnos[m].user_count = counts[m];
  return GameInstance(game.rrhs(), std::move(mvnos));
}

// Row-conservation check used everywhere a policy is produced or consumed.
inline bool is_feasible(const GameInstance& game, const AllocationPolicy& xi,
                        double tol = 1e-9) {
  if (xi.mvno_count() != game.mvno_count() || xi.rrh_count() != game.rrh_count()) return false;
  for (std::size_t m = 0; m < game.mvno_count(); ++m) {
    double s = 0.0;
    for (std::size_t r = 0; r < game.rrh_count(); ++r) {
      if (xi.at(m, r) < -tol) return false;
      s += xi.at(m, r);
    }
    const double n = game.mvno(m).user_count;
    if (std::abs(s - n) > tol * std::max(1.0, n)) return false;
  }
  return true;
}

}  // namespace ranslice
