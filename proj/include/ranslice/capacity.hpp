#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>

namespace ranslice {

struct InfeasibleSinrError : std::domain_error {
  using std::domain_error::domain_error;
};

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Path-loss / SINR / access-rate parameters. All values linear (not dB);
// conversions from dB happen at the config boundary.
struct RadioParams {
  double k = 9.89e-5;     // transceiver constant
  double d0 = 1.0;        // far-field reference distance, meters
  double alpha = 3.0;     // path-loss exponent
  double noise = 8.0e-14; // channel noise power, watts
  double sinr_min = 1.0;  // minimum SINR requirement, linear
  double mu = 0.8;        // access rate fraction in (0, 1]

  void validate() const {
    if (!(k > 0.0)) throw std::invalid_argument("RadioParams: k must be positive");
    if (!(d0 > 0.0)) throw std::invalid_argument("RadioParams: d0 must be positive");
    if (!(alpha >= 1.0)) throw std::invalid_argument("RadioParams: alpha must be >= 1");
    if (!(noise > 0.0)) throw std::invalid_argument("RadioParams: noise must be positive");
    if (!(sinr_min > 0.0)) throw std::invalid_argument("RadioParams: sinr_min must be positive");
    if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("RadioParams: mu must be in (0, 1]");
  }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Noise power in watts for a -174 dBm/Hz floor over the given bandwidth.
inline double noise_watts_from_bandwidth(double bandwidth_hz,
                                         double floor_dbm_per_hz = -174.0) {
  const double dbm = floor_dbm_per_hz + 10.0 * std::log10(bandwidth_hz);
  return std::pow(10.0, dbm / 10.0) * 1e-3;
}

// Received power at distance d under the far-field path-loss model.
inline double received_power(const RadioParams& p, double d) {
  if (d < p.d0) throw std::domain_error("received_power: d < d0 (far-field model invalid)");
  return p.k * std::pow(p.d0 / d, p.alpha);
}

namespace detail {

// Unclamped QoE user count at distance d; NaN when the SINR target is
// unreachable there. Shared by the throwing wrapper and the quadrature.
inline double qoe_users_unclamped_or_nan(const RadioParams& p, double capacity, double d) {
  const double pw = p.k * std::pow(p.d0 / std::max(d, p.d0), p.alpha);
  const double s = p.sinr_min;
  const double num = pw * (1.0 + s) - s * p.noise;
  const double den = pw * (1.0 + 2.0 * s) - s * p.noise;
  if (den <= 0.0 || num < 0.0) return std::nan("");
  return capacity / p.mu * num / den;
}

}  // namespace detail

// Max MUs servable at distance d while meeting the SINR target, before the
// capacity clamp. Needed by tests that close the loop through the SINR model.
inline double qoe_users_at_distance_unclamped(const RadioParams& p, double capacity, double d) {
  p.validate();
  if (!(capacity > 0.0)) throw std::invalid_argument("qoe_users_at_distance: capacity must be positive");
  if (d < p.d0) throw std::domain_error("qoe_users_at_distance: d < d0");
  const double n = detail::qoe_users_unclamped_or_nan(p, capacity, d);
  if (std::isnan(n)) throw InfeasibleSinrError("qoe_users_at_distance: SINR target unreachable at this distance");
  return n;
}

// Same, clamped into [0, capacity]: the RRH cannot admit more arrivals than
// it has resources.
inline double qoe_users_at_distance(const RadioParams& p, double capacity, double d) {
  const double n = qoe_users_at_distance_unclamped(p, capacity, d);
  return std::min(std::max(n, 0.0), capacity);
}

// A distance density over [0, d_max]. pdf must be non-negative and integrate
// to ~1 over the support.
struct DistanceDensity {
  std::function<double(double)> pdf;
  double d_max = 0.0;
};

// Uniform MU placement in a disk of the given radius: f(d) = 2 d / d_max^2.
inline DistanceDensity disk_density(double d_max) {
  if (!(d_max > 0.0)) throw std::invalid_argument("disk_density: d_max must be positive");
  return DistanceDensity{[d_max](double d) {
                           return (d >= 0.0 && d <= d_max) ? 2.0 * d / (d_max * d_max) : 0.0;
                         },
                         d_max};
}

struct ExpectedQoe {
  double value = 0.0;
  // Set when some of the density's support lies past the feasibility radius
  // (those distances contribute zero).
  bool infeasible_region = false;
};

namespace detail {

template <typename F>
double trapezoid_refine(F&& f, double a, double b, std::size_t n_new, double prev) {
  // Adds the midpoints of the previous grid; n_new is the new interval count.
  const double h = (b - a) / static_cast<double>(n_new);
  double sum = 0.0;
  for (std::size_t i = 1; i < n_new; i += 2) sum += f(a + h * static_cast<double>(i));
  return 0.5 * prev + h * sum;
}

}  // namespace detail

// Expected QoE user count over the distance distribution (numerical
// quadrature of the density against the clamped per-distance count).
// Composite Simpson via trapezoid refinement, panels doubled until the
// relative change drops below tol.
inline ExpectedQoe expected_qoe_users(const RadioParams& p, double capacity,
                                      const DistanceDensity& density,
                                      double tol = 1e-8,
                                      std::size_t max_panels = (std::size_t{1} << 20)) {
  p.validate();
  if (!density.pdf || !(density.d_max > 0.0))
    throw std::invalid_argument("expected_qoe_users: invalid density");

  bool hit_infeasible = false;
  auto integrand = [&](double d) {
    const double f = density.pdf(d);
    if (f <= 0.0) return 0.0;
    const double n = detail::qoe_users_unclamped_or_nan(p, capacity, d);
    if (std::isnan(n)) {
      hit_infeasible = true;
      return 0.0;
    }
    return f * std::min(std::max(n, 0.0), capacity);
  };

  const double a = 0.0, b = density.d_max;
  std::size_t n = 16;
  double trap = (b - a) / static_cast<double>(n) *
                (0.5 * (integrand(a) + integrand(b)) + [&] {
                  double s = 0.0;
                  for (std::size_t i = 1; i < n; ++i)
                    s += integrand(a + (b - a) * static_cast<double>(i) / static_cast<double>(n));
                  return s;
                }());
  double simpson_prev = trap;  // placeholder until the first refinement
  bool have_prev = false;
  double trap_prev = trap;

  while (n < max_panels) {
    n *= 2;
    trap = detail::trapezoid_refine(integrand, a, b, n, trap);
    const double simpson = (4.0 * trap - trap_prev) / 3.0;
    trap_prev = trap;
    if (have_prev) {
      const double change = std::abs(simpson - simpson_prev);
      if (change <= tol * std::max(std::abs(simpson), 1e-300)) {
        return ExpectedQoe{std::min(std::max(simpson, 0.0), capacity), hit_infeasible};
      }
    }
    simpson_prev = simpson;
    have_prev = true;
  }
  throw QuadratureError("expected_qoe_users: quadrature did not converge");
}

}  // namespace ranslice
