#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ranslice/capacity.hpp"
#include "ranslice/model.hpp"
#include "ranslice/rng.hpp"
#include "ranslice/text.hpp"

namespace ranslice {

struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One row of an OpenCellID-style tower dump. Identity fields stay opaque.
struct TowerRecord {
  std::string radio;
  std::string mcc, net, area, cell, unit;
  double lon = 0.0;   // degrees
  double lat = 0.0;   // degrees
  double range = 0.0; // meters, 0 when absent

  std::string site_id() const {
    return radio + "-" + mcc + "-" + net + "-" + area + "-" + cell;
  }
};

struct ParseResult {
  std::vector<TowerRecord> records;
  std::size_t skipped = 0;  // malformed rows dropped with a warning
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(field);
      field.clear();
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  out.push_back(field);
  return out;
}

}  // namespace detail

// Reads the public OpenCellID CSV column order: radio, mcc, net, area, cell,
// unit, lon, lat, range, samples, changeable, created, updated, averageSignal.
// A leading header row is detected and skipped. Malformed rows (too few
// columns, unparseable or out-of-range coordinates) are counted, not fatal.
// radio_filter empty means accept every radio type.
inline ParseResult parse_towers(const std::string& path,
                                const std::set<std::string>& radio_filter = {}) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open tower file: " + path);

  ParseResult result;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> f = detail::split_csv_line(line);
    if (first) {
      first = false;
      if (!f.empty() && f[0] == "radio") continue;  // header row
    }
    if (f.size() < 8) {
      ++result.skipped;
      continue;
    }
    TowerRecord rec;
    rec.radio = f[0];
    rec.mcc = f[1];
    rec.net = f[2];
    rec.area = f[3];
    rec.cell = f[4];
    rec.unit = f[5];
    if (!parse_double(f[6], rec.lon) || !parse_double(f[7], rec.lat) ||
        rec.lat < -90.0 || rec.lat > 90.0 || rec.lon < -180.0 || rec.lon > 180.0 ||
        rec.radio.empty()) {
      ++result.skipped;
      continue;
    }
    if (f.size() > 8 && !f[8].empty()) {
      if (!parse_double(f[8], rec.range)) rec.range = 0.0;
      if (rec.range < 0.0) rec.range = 0.0;
    }
    if (!radio_filter.empty() && !radio_filter.count(rec.radio)) continue;
    result.records.push_back(std::move(rec));
  }
  if (result.records.empty()) throw IngestError("no valid tower rows in " + path);
  return result;
}

// ---------------------------------------------------------------------------
// Geographic region selection and local planar projection.
// ---------------------------------------------------------------------------

inline constexpr double kEarthRadiusM = 6371000.0;

// Equirectangular projection about a reference point; adequate at city scale.
inline std::pair<double, double> project_to_meters(double lat, double lon, double ref_lat,
                                                   double ref_lon) {
  const double deg = M_PI / 180.0;
  const double x = kEarthRadiusM * std::cos(ref_lat * deg) * (lon - ref_lon) * deg;
  const double y = kEarthRadiusM * (lat - ref_lat) * deg;
  return {x, y};
}

struct Region {
  enum class Kind { BBox, Disk } kind = Kind::BBox;
  double lat_min = 0, lat_max = 0, lon_min = 0, lon_max = 0;
  double center_lat = 0, center_lon = 0, radius_m = 0;

  static Region bbox(double lat_min, double lat_max, double lon_min, double lon_max) {
    if (lat_min > lat_max || lon_min > lon_max)
      throw IngestError("region bbox: min exceeds max");
    Region rg;
    rg.kind = Kind::BBox;
    rg.lat_min = lat_min;
    rg.lat_max = lat_max;
    rg.lon_min = lon_min;
    rg.lon_max = lon_max;
    return rg;
  }

  static Region disk(double center_lat, double center_lon, double radius_m) {
    if (!(radius_m > 0)) throw IngestError("region disk: radius must be > 0");
    Region rg;
    rg.kind = Kind::Disk;
    rg.center_lat = center_lat;
    rg.center_lon = center_lon;
    rg.radius_m = radius_m;
    return rg;
  }

  bool contains(double lat, double lon) const {
    if (kind == Kind::BBox)
      return lat >= lat_min && lat <= lat_max && lon >= lon_min && lon <= lon_max;
    auto [x, y] = project_to_meters(lat, lon, center_lat, center_lon);
    return x * x + y * y <= radius_m * radius_m;
  }
};

struct ClusterSite {
  std::string id;
  std::string radio;
  double lat = 0, lon = 0;  // degrees
  double x = 0, y = 0;      // meters about the cluster reference point
};

struct Cluster {
  std::vector<ClusterSite> sites;
  double ref_lat = 0, ref_lon = 0;
  double width_m = 0, height_m = 0;  // bounding box of the selected sites
  double area_km2 = 0;
};

// Uniformly samples r_count towers inside the region, without replacement and
// deterministically in (records, region, r_count, seed). Candidate and output
// orders are canonicalized, so the input row order never matters.
inline Cluster build_cluster(const std::vector<TowerRecord>& records, const Region& region,
                             std::size_t r_count, std::uint64_t seed) {
  if (r_count == 0) throw IngestError("build_cluster: need at least one RRH");
  std::vector<const TowerRecord*> cand;
  for (const auto& rec : records)
    if (region.contains(rec.lat, rec.lon)) cand.push_back(&rec);
  if (cand.size() < r_count)
    throw IngestError("build_cluster: region holds " + std::to_string(cand.size()) +
                      " towers, need " + std::to_string(r_count));

  auto canonical = [](const TowerRecord* a, const TowerRecord* b) {
    return std::tie(a->lat, a->lon, a->radio, a->mcc, a->net, a->area, a->cell) <
           std::tie(b->lat, b->lon, b->radio, b->mcc, b->net, b->area, b->cell);
  };
  std::sort(cand.begin(), cand.end(), canonical);

  // Partial Fisher-Yates over the canonical order.
  Rng rng(seed);
  for (std::size_t i = 0; i < r_count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(cand.size() - i));
    std::swap(cand[i], cand[j]);
  }
  cand.resize(r_count);
  std::sort(cand.begin(), cand.end(), canonical);

  Cluster cluster;
  double lat_sum = 0, lon_sum = 0;
  for (const auto* rec : cand) {
    lat_sum += rec->lat;
    lon_sum += rec->lon;
  }
  cluster.ref_lat = lat_sum / static_cast<double>(r_count);
  cluster.ref_lon = lon_sum / static_cast<double>(r_count);

  double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
  bool first = true;
  for (const auto* rec : cand) {
    ClusterSite site;
    site.id = rec->site_id();
    site.radio = rec->radio;
    site.lat = rec->lat;
    site.lon = rec->lon;
    std::tie(site.x, site.y) =
        project_to_meters(rec->lat, rec->lon, cluster.ref_lat, cluster.ref_lon);
    if (first) {
      x_min = x_max = site.x;
      y_min = y_max = site.y;
      first = false;
    } else {
      x_min = std::min(x_min, site.x);
      x_max = std::max(x_max, site.x);
      y_min = std::min(y_min, site.y);
      y_max = std::max(y_max, site.y);
    }
    cluster.sites.push_back(std::move(site));
  }
  cluster.width_m = x_max - x_min;
  cluster.height_m = y_max - y_min;
  cluster.area_km2 = cluster.width_m * cluster.height_m / 1e6;
  return cluster;
}

// ---------------------------------------------------------------------------
// Scenario generation.
// ---------------------------------------------------------------------------

struct ScenarioConfig {
  std::size_t mvno_count = 4;
  std::size_t rrh_count = 8;
  int n_rb = 100;              // resource blocks: 25, 50 or 100
  double bandwidth_mhz = 0.0;  // 5, 10 or 20; 0 derives it from n_rb
  double sinr_min_db = 0.0;
  bool sinr_random = false;  // per-RRH draw from {-5, 0, 5} dB
  double mu = 0.8;
  bool mu_random = false;  // scenario-level draw from (0, 1]
  double max_price_weight = 5e-4;
  double price_mean = 10.0;
  double price_stddev = 4.0;
  double device_density_per_km2 = 5000.0;
  double demand_area_km2 = 0.0;  // 0 derives demand from the cluster bounding box
  double cell_radius_m = 200.0;  // support of the MU distance density
  double lambda_override = 0.0;  // 0 keeps capacity = n_rb * 7 * 12
  double pathloss_k = 9.89e-5;
  double pathloss_d0 = 1.0;
  double pathloss_alpha = 3.0;
  std::uint64_t seed = 1;

  void validate() const {
    if (mvno_count == 0) throw IngestError("scenario: need at least one MVNO");
    if (rrh_count == 0) throw IngestError("scenario: need at least one RRH");
    if (n_rb != 25 && n_rb != 50 && n_rb != 100)
      throw IngestError("scenario: n_rb must be 25, 50 or 100");
    const double bw = bandwidth();
    if (bw != 5.0 && bw != 10.0 && bw != 20.0)
      throw IngestError("scenario: bandwidth must be 5, 10 or 20 MHz");
    if (!mu_random && !(mu > 0.0 && mu <= 1.0))
      throw IngestError("scenario: mu must lie in (0, 1]");
    if (max_price_weight < 0.0) throw IngestError("scenario: price weight bound < 0");
    if (!(price_mean > 0.0)) throw IngestError("scenario: price mean must be > 0");
    if (price_stddev < 0.0) throw IngestError("scenario: price stddev < 0");
    if (device_density_per_km2 < 0.0) throw IngestError("scenario: device density < 0");
    if (demand_area_km2 < 0.0) throw IngestError("scenario: demand area < 0");
    if (!(cell_radius_m > pathloss_d0))
      throw IngestError("scenario: cell radius must exceed the reference distance");
    if (lambda_override < 0.0) throw IngestError("scenario: capacity override < 0");
  }

  double bandwidth() const {
    if (bandwidth_mhz > 0.0) return bandwidth_mhz;
    return n_rb == 25 ? 5.0 : n_rb == 50 ? 10.0 : 20.0;
  }

  double capacity() const {
    return lambda_override > 0.0 ? lambda_override : static_cast<double>(n_rb) * 7.0 * 12.0;
  }
};

struct Scenario {
  GameInstance game;
  RadioParams radio;                  // sinr_min holds the scalar config value
  std::vector<double> rrh_sinr_db;    // the level each surviving RRH used
  double users_per_mvno = 0.0;
  double area_km2 = 0.0;
  std::size_t infeasible_rrh_warnings = 0;  // partial infeasible-region flags
  std::size_t dropped_rrhs = 0;             // zero-capacity sites removed
};

// Draws a full game from a cluster. Every random quantity gets its own seed
// stream: per-site streams for prices and SINR classes (keyed by site id), a
// per-index stream for each MVNO's price weight, a scenario stream for mu.
// A site therefore keeps its draws when the surrounding cluster grows or
// shrinks, which lets sweeps over the cluster size share randomness across
// grid points. Capacity integrals run last, cached per distinct SINR level.
inline Scenario generate_scenario(const Cluster& cluster, const ScenarioConfig& config) {
  config.validate();
  if (cluster.sites.size() < config.rrh_count)
    throw IngestError("scenario: cluster smaller than requested RRH count");

  std::vector<double> prices(config.rrh_count);
  for (std::size_t r = 0; r < config.rrh_count; ++r) {
    Rng rng(derive_seed(config.seed, fnv1a64(cluster.sites[r].id), 11));
    double draw = rng.normal(config.price_mean, config.price_stddev);
    while (draw < 0.0) draw = rng.normal(config.price_mean, config.price_stddev);
    prices[r] = draw;
  }
  std::vector<double> weights(config.mvno_count);
  for (std::size_t m = 0; m < config.mvno_count; ++m)
    weights[m] = Rng(derive_seed(config.seed, m, 12)).uniform(0.0, config.max_price_weight);

  RadioParams radio;
  radio.k = config.pathloss_k;
  radio.d0 = config.pathloss_d0;
  radio.alpha = config.pathloss_alpha;
  radio.noise = noise_watts_from_bandwidth(config.bandwidth() * 1e6);
  radio.mu =
      config.mu_random ? Rng(derive_seed(config.seed, 0, 13)).uniform01_open_low() : config.mu;
  radio.sinr_min = db_to_linear(config.sinr_min_db);
  radio.validate();

  static constexpr double kSinrLevelsDb[3] = {-5.0, 0.0, 5.0};
  std::vector<double> sinr_db(config.rrh_count, config.sinr_min_db);
  if (config.sinr_random)
    for (std::size_t r = 0; r < config.rrh_count; ++r)
      sinr_db[r] = kSinrLevelsDb[Rng(derive_seed(config.seed, fnv1a64(cluster.sites[r].id), 14))
                                     .below(3)];

  const DistanceDensity density = disk_density(config.cell_radius_m);
  std::map<double, ExpectedQoe> qoe_by_sinr;
  std::vector<Rrh> rrhs;
  std::vector<double> sinr_used;
  std::size_t infeasible_warnings = 0;
  std::size_t dropped = 0;
  for (std::size_t r = 0; r < config.rrh_count; ++r) {
    auto it = qoe_by_sinr.find(sinr_db[r]);
    if (it == qoe_by_sinr.end()) {
      RadioParams rp = radio;
      rp.sinr_min = db_to_linear(sinr_db[r]);
      it = qoe_by_sinr.emplace(sinr_db[r], expected_qoe_users(rp, config.capacity(), density))
               .first;
    }
    const ExpectedQoe& qoe = it->second;
    if (qoe.infeasible_region) ++infeasible_warnings;
    if (!(qoe.value > 0.0)) {
      ++dropped;
      continue;
    }
    const ClusterSite& site = cluster.sites[r];
    Rrh rrh;
    rrh.id = site.id;
    rrh.x = site.x;
    rrh.y = site.y;
    rrh.class_id = static_cast<int>(
        std::find(kSinrLevelsDb, kSinrLevelsDb + 3, sinr_db[r]) - kSinrLevelsDb);
    if (rrh.class_id > 2) rrh.class_id = 0;
    rrh.price = prices[r];
    rrh.capacity = config.capacity();
    rrh.qoe_users = qoe.value;
    rrhs.push_back(std::move(rrh));
    sinr_used.push_back(sinr_db[r]);
  }
  if (rrhs.empty())
    throw IngestError("scenario: every RRH has zero QoE capacity under these parameters");

  const double demand_area =
      config.demand_area_km2 > 0.0 ? config.demand_area_km2 : cluster.area_km2;
  const double users_per_mvno = config.device_density_per_km2 * demand_area /
                                static_cast<double>(config.mvno_count);
  std::vector<Mvno> mvnos(config.mvno_count);
  for (std::size_t m = 0; m < config.mvno_count; ++m) {
    mvnos[m].id = "mvno-" + std::to_string(m);
    mvnos[m].user_count = users_per_mvno;
    mvnos[m].price_weight = weights[m];
  }

  return Scenario{GameInstance(std::move(rrhs), std::move(mvnos)),
                  radio,
                  std::move(sinr_used),
                  users_per_mvno,
                  demand_area,
                  infeasible_warnings,
                  dropped};
}

// Human-readable provenance snapshot: key/value header plus one table per
// entity kind. Deterministic formatting, shortest round-trip numbers.
inline void write_scenario_snapshot(std::ostream& os, const Scenario& sc) {
  os << "users_per_mvno: " << fmt_double(sc.users_per_mvno) << "\n";
  os << "area_km2: " << fmt_double(sc.area_km2) << "\n";
  os << "radio.k: " << fmt_double(sc.radio.k) << "\n";
  os << "radio.d0: " << fmt_double(sc.radio.d0) << "\n";
  os << "radio.alpha: " << fmt_double(sc.radio.alpha) << "\n";
  os << "radio.noise_w: " << fmt_double(sc.radio.noise) << "\n";
  os << "radio.mu: " << fmt_double(sc.radio.mu) << "\n";
  os << "radio.sinr_min_linear: " << fmt_double(sc.radio.sinr_min) << "\n";
  os << "infeasible_rrh_warnings: " << sc.infeasible_rrh_warnings << "\n";
  os << "dropped_rrhs: " << sc.dropped_rrhs << "\n";
  os << "rrh: id class x_m y_m price capacity qoe_users sinr_db\n";
  for (std::size_t r = 0; r < sc.game.rrh_count(); ++r) {
    const Rrh& rrh = sc.game.rrh(r);
    os << "  " << rrh.id << " " << rrh.class_id << " " << fmt_double(rrh.x) << " "
       << fmt_double(rrh.y) << " " << fmt_double(rrh.price) << " "
       << fmt_double(rrh.capacity) << " " << fmt_double(rrh.qoe_users) << " "
       << fmt_double(sc.rrh_sinr_db[r]) << "\n";
  }
  os << "mvno: id user_count price_weight\n";
  for (std::size_t m = 0; m < sc.game.mvno_count(); ++m) {
    const Mvno& mv = sc.game.mvno(m);
    os << "  " << mv.id << " " << fmt_double(mv.user_count) << " "
       << fmt_double(mv.price_weight) << "\n";
  }
}

}  // namespace ranslice
