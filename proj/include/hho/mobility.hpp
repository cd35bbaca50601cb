#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "hho/geometry.hpp"
#include "hho/random.hpp"

namespace hho {

/// Modified random waypoint parameters. Each transition length is a Rayleigh
/// base length, extended with probability `p_z` by a second Rayleigh length.
struct MobilityConfig {
  double sigma_rwp = 200.0;      // m
  double p_z = 0.3;
  double sigma_z = 200.0;        // m
  double velocity = 60.0 / 3.6;  // m/s
  double pause = 2.0;            // s

  void validate() const {
    if (!(sigma_rwp > 0.0)) throw std::invalid_argument("MobilityConfig: sigma_rwp must be > 0");
    if (!(p_z >= 0.0 && p_z <= 1.0)) throw std::invalid_argument("MobilityConfig: p_z must lie in [0, 1]");
    if (!(sigma_z > 0.0)) throw std::invalid_argument("MobilityConfig: sigma_z must be > 0");
    if (!(velocity > 0.0)) throw std::invalid_argument("MobilityConfig: velocity must be > 0");
    if (!(pause >= 0.0)) throw std::invalid_argument("MobilityConfig: pause must be >= 0");
  }

  friend bool operator==(const MobilityConfig&, const MobilityConfig&) = default;
};

struct Trajectory {
  std::vector<Point2> waypoints;
  double velocity = 1.0;  // m/s, constant over the run
  double pause = 0.0;     // s, after every move

  std::size_t moves() const noexcept { return waypoints.empty() ? 0 : waypoints.size() - 1; }

  double segment_length(std::size_t k) const noexcept { return distance(waypoints[k], waypoints[k + 1]); }

  double path_length() const noexcept {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < waypoints.size(); ++k) total += segment_length(k);
    return total;
  }

  /// Travel plus pause time over all moves.
  double duration() const noexcept { return path_length() / velocity + pause * static_cast<double>(moves()); }
};

/// L' = L + mu * Z. Always consumes three variates so that runs differing only
/// in p_z see the same base lengths and directions.
inline double draw_transition_length(const MobilityConfig& cfg, Rng& rng) {
  cfg.validate();
  const double base = rng.rayleigh(cfg.sigma_rwp);
  const bool extend = rng.bernoulli(cfg.p_z);
  const double extra = rng.rayleigh(cfg.sigma_z);
  return extend ? base + extra : base;
}

/// Move `length` from `current` along bearing `theta`, stopping at the region
/// boundary if the ray leaves it first.
inline Point2 move_clamped(Point2 current, double length, double theta, const Region& region) noexcept {
  const double dx = std::cos(theta), dy = std::sin(theta);
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double tx = dx > 0.0 ? (region.x_max() - current.x) / dx : dx < 0.0 ? (region.x_min() - current.x) / dx : inf;
  const double ty = dy > 0.0 ? (region.y_max() - current.y) / dy : dy < 0.0 ? (region.y_min() - current.y) / dy : inf;
  if (length <= tx && length <= ty) {
    Point2 p{current.x + length * dx, current.y + length * dy};
    p.x = std::clamp(p.x, region.x_min(), region.x_max());
    p.y = std::clamp(p.y, region.y_min(), region.y_max());
    return p;
  }
  Point2 p;
  if (tx <= ty) {
    p.x = dx > 0.0 ? region.x_max() : region.x_min();
    p.y = std::clamp(current.y + tx * dy, region.y_min(), region.y_max());
  } else {
    p.y = dy > 0.0 ? region.y_max() : region.y_min();
    p.x = std::clamp(current.x + ty * dx, region.x_min(), region.x_max());
  }
  return p;
}

/// One MRWP move. May return `current` itself (zero-length draw, or a start on
/// the boundary heading outward); `generate_trajectory` redraws those.
inline Point2 next_waypoint(Point2 current, const Region& region, const MobilityConfig& cfg, Rng& rng) {
  const double length = draw_transition_length(cfg, rng);
  const double theta = 2.0 * std::numbers::pi * rng.uniform();
  return move_clamped(current, length, theta, region);
}

inline Trajectory generate_trajectory(Point2 start, std::size_t n_moves, const Region& region,
                                      const MobilityConfig& cfg, Rng& rng) {
  cfg.validate();
  if (n_moves < 1) throw std::invalid_argument("generate_trajectory: n_moves must be >= 1");
  if (!region.contains(start)) throw std::invalid_argument("generate_trajectory: start outside region");
  Trajectory t;
  t.velocity = cfg.velocity;
  t.pause = cfg.pause;
  t.waypoints.reserve(n_moves + 1);
  t.waypoints.push_back(start);
  Point2 cur = start;
  for (std::size_t k = 0; k < n_moves; ++k) {
    Point2 next = next_waypoint(cur, region, cfg, rng);
    while (next == cur) next = next_waypoint(cur, region, cfg, rng);
    t.waypoints.push_back(next);
    cur = next;
  }
  return t;
}

/// Fraction of all waypoints falling in each of the five sub-regions.
inline std::array<double, 5> empirical_occupancy(std::span<const Trajectory> trajectories,
                                                 const FivePartition& partition) {
  std::array<std::size_t, 5> counts{};
  std::size_t total = 0;
  for (const auto& t : trajectories) {
    for (const auto& p : t.waypoints) {
      ++counts[partition.locate(p)];
      ++total;
    }
  }
  if (total == 0) throw std::invalid_argument("empirical_occupancy: no waypoints");
  std::array<double, 5> out{};
  for (std::size_t i = 0; i < 5; ++i) out[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  return out;
}

/// E[L'] = sqrt(pi/2) (sigma_rwp + p_z sigma_z), the unclamped mean transition length.
inline double expected_transition_length(const MobilityConfig& cfg) {
  cfg.validate();
  return std::sqrt(std::numbers::pi / 2.0) * (cfg.sigma_rwp + cfg.p_z * cfg.sigma_z);
}

/// Mean time per move: travel at constant velocity plus the pause.
inline double expected_movement_time(const MobilityConfig& cfg) {
  return expected_transition_length(cfg) / cfg.velocity + cfg.pause;
}

/// CSV with header `user_id,seq,x_m,y_m`.
inline void write_trajectories_csv(std::ostream& os, std::span<const Trajectory> trajectories) {
  os << "user_id,seq,x_m,y_m\n";
  const auto old = os.precision(17);
  for (std::size_t u = 0; u < trajectories.size(); ++u) {
    const auto& w = trajectories[u].waypoints;
    for (std::size_t k = 0; k < w.size(); ++k) os << u << ',' << k << ',' << w[k].x << ',' << w[k].y << '\n';
  }
  os.precision(old);
}

}  // namespace hho
