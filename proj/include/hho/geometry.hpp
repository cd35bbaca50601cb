#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hho/random.hpp"

namespace hho {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point2, Point2) noexcept = default;
};

constexpr double dot(Point2 a, Point2 b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double norm2(Point2 a) noexcept { return dot(a, a); }
inline double norm(Point2 a) noexcept { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) noexcept { return norm(a - b); }

/// Axis-aligned rectangle in meters.
class Region {
 public:
  Region(double x_min, double x_max, double y_min, double y_max)
      : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max) {
    if (!(x_max > x_min) || !(y_max > y_min) || !std::isfinite(area()))
      throw std::invalid_argument("Region: require x_max > x_min and y_max > y_min");
  }

  static Region square(double side_m) { return Region(0.0, side_m, 0.0, side_m); }

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double y_min() const noexcept { return y_min_; }
  double y_max() const noexcept { return y_max_; }
  double width() const noexcept { return x_max_ - x_min_; }
  double height() const noexcept { return y_max_ - y_min_; }
  double area() const noexcept { return width() * height(); }
  Point2 center() const noexcept { return {0.5 * (x_min_ + x_max_), 0.5 * (y_min_ + y_max_)}; }

  /// Closed containment test.
  bool contains(Point2 p) const noexcept {
    return p.x >= x_min_ && p.x <= x_max_ && p.y >= y_min_ && p.y <= y_max_;
  }

  /// The region grown by `margin` on every side.
  Region dilated(double margin) const {
    return Region(x_min_ - margin, x_max_ + margin, y_min_ - margin, y_max_ + margin);
  }

  friend bool operator==(const Region&, const Region&) = default;

 private:
  double x_min_, x_max_, y_min_, y_max_;
};

enum class Tier { Macro, Small, Hotspot };

inline constexpr std::array<Tier, 3> kAllTiers = {Tier::Macro, Tier::Small, Tier::Hotspot};

constexpr std::string_view tier_name(Tier t) noexcept {
  switch (t) {
    case Tier::Macro: return "M";
    case Tier::Small: return "S";
    case Tier::Hotspot: return "S'";
  }
  return "?";
}

constexpr std::size_t tier_index(Tier t) noexcept { return static_cast<std::size_t>(t); }

struct PointSet {
  Tier tier = Tier::Macro;
  std::vector<Point2> points;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

/// Thomas cluster process parameters.
struct ClusterConfig {
  double lambda_p = 2e-6;       // parent density, 1/m^2
  double sigma = 150.0;         // scattering standard deviation, m
  double mean_offspring = 5.0;  // mean children per parent

  double implied_density() const noexcept { return lambda_p * mean_offspring; }

  void validate() const {
    if (!(lambda_p > 0.0) || !(sigma > 0.0) || !(mean_offspring > 0.0))
      throw std::invalid_argument("ClusterConfig: lambda_p, sigma and mean_offspring must be > 0");
  }
};

struct TcpSample {
  PointSet parents;
  PointSet offspring;
  std::vector<std::size_t> parent_index;  // parent of each offspring point
};

/// Homogeneous PPP on `region`: Poisson count, then i.i.d. uniform placement.
inline PointSet sample_ppp(const Region& region, double density, Rng& rng, Tier tier = Tier::Macro) {
  if (!(density > 0.0) || !std::isfinite(density))
    throw std::invalid_argument("sample_ppp: density must be positive and finite");
  PointSet out{tier, {}};
  const auto n = rng.poisson(density * region.area());
  out.points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = rng.uniform(region.x_min(), region.x_max());
    const double y = rng.uniform(region.y_min(), region.y_max());
    out.points.push_back({x, y});
  }
  return out;
}

/// Isotropic normal displacement of one child around `parent`.
inline Point2 scatter_offspring(Point2 parent, double sigma, Rng& rng) noexcept {
  const auto [gx, gy] = rng.normal_pair();
  return {parent.x + sigma * gx, parent.y + sigma * gy};
}

/// Thomas cluster process. Parents are a PPP inside `region`; offspring are
/// kept wherever they land, including outside the region.
inline TcpSample sample_tcp(const Region& region, const ClusterConfig& cfg, Rng& rng) {
  cfg.validate();
  TcpSample out;
  out.parents = sample_ppp(region, cfg.lambda_p, rng, Tier::Hotspot);
  out.offspring.tier = Tier::Hotspot;
  for (std::size_t p = 0; p < out.parents.size(); ++p) {
    const auto n = rng.poisson(cfg.mean_offspring);
    for (std::uint64_t c = 0; c < n; ++c) {
      out.offspring.points.push_back(scatter_offspring(out.parents.points[p], cfg.sigma, rng));
      out.parent_index.push_back(p);
    }
  }
  return out;
}

/// Index and distance of the point in `targets` closest to `query` (linear scan).
struct Nearest {
  std::size_t index = 0;
  double distance = 0.0;
};

inline Nearest nearest_neighbor(Point2 query, std::span<const Point2> targets) {
  if (targets.empty()) throw std::out_of_range("nearest_neighbor: no BS in tier");
  Nearest best{0, std::numeric_limits<double>::infinity()};
  double best2 = best.distance;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double d2 = norm2(targets[i] - query);
    if (d2 < best2) {
      best2 = d2;
      best.index = i;
    }
  }
  best.distance = std::sqrt(best2);
  return best;
}

inline double nearest_neighbor_distance(Point2 query, const PointSet& targets) {
  return nearest_neighbor(query, targets.points).distance;
}

/// Uniform bucket grid for repeated nearest-neighbour queries on a fixed set.
/// Results are identical to `nearest_neighbor` (ties resolve to the lowest index).
class GridIndex {
 public:
  GridIndex(std::span<const Point2> points, double cell_size) : pts_(points.begin(), points.end()) {
    if (pts_.empty()) return;
    if (!(cell_size > 0.0)) throw std::invalid_argument("GridIndex: cell_size must be > 0");
    cell_ = cell_size;
    x0_ = y0_ = std::numeric_limits<double>::infinity();
    double x1 = -x0_, y1 = -y0_;
    for (const auto& p : pts_) {
      x0_ = std::min(x0_, p.x);
      y0_ = std::min(y0_, p.y);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
    nx_ = static_cast<long>((x1 - x0_) / cell_) + 1;
    ny_ = static_cast<long>((y1 - y0_) / cell_) + 1;
    buckets_.assign(static_cast<std::size_t>(nx_ * ny_), {});
    for (std::size_t i = 0; i < pts_.size(); ++i)
      buckets_[bucket_of(cell_x(pts_[i].x), cell_y(pts_[i].y))].push_back(i);
  }

  bool empty() const noexcept { return pts_.empty(); }
  std::span<const Point2> points() const noexcept { return pts_; }

  Nearest nearest(Point2 q) const {
    if (pts_.empty()) throw std::out_of_range("GridIndex::nearest: no BS in tier");
    const long cx = std::clamp(cell_x(q.x), 0L, nx_ - 1);
    const long cy = std::clamp(cell_y(q.y), 0L, ny_ - 1);
    double best2 = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    const long max_ring = std::max(nx_, ny_);
    for (long ring = 0; ring <= max_ring; ++ring) {
      for (long ix = cx - ring; ix <= cx + ring; ++ix) {
        for (long iy = cy - ring; iy <= cy + ring; ++iy) {
          if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != ring) continue;
          if (ix < 0 || iy < 0 || ix >= nx_ || iy >= ny_) continue;
          for (auto i : buckets_[bucket_of(ix, iy)]) {
            const double d2 = norm2(pts_[i] - q);
            if (d2 < best2 || (d2 == best2 && i < best)) {
              best2 = d2;
              best = i;
            }
          }
        }
      }
      // Every unvisited cell is at least `ring * cell_` away from q's cell
      // boundary, so once the best distance is within that we can stop.
      const double reach = ring * cell_ - outside_gap(q);
      if (best2 < std::numeric_limits<double>::infinity() && reach > 0.0 && best2 <= reach * reach) break;
    }
    return {best, std::sqrt(best2)};
  }

 private:
  long cell_x(double x) const noexcept { return static_cast<long>(std::floor((x - x0_) / cell_)); }
  long cell_y(double y) const noexcept { return static_cast<long>(std::floor((y - y0_) / cell_)); }
  std::size_t bucket_of(long ix, long iy) const noexcept { return static_cast<std::size_t>(ix * ny_ + iy); }

  // Distance from q to the grid's bounding box (0 if inside); a query outside
  // the grid is clamped onto the border cell, which shrinks the safe radius.
  double outside_gap(Point2 q) const noexcept {
    const double gx = std::max({x0_ - q.x, 0.0, q.x - (x0_ + nx_ * cell_)});
    const double gy = std::max({y0_ - q.y, 0.0, q.y - (y0_ + ny_ * cell_)});
    return std::hypot(gx, gy);
  }

  std::vector<Point2> pts_;
  std::vector<std::vector<std::size_t>> buckets_;
  double cell_ = 1.0, x0_ = 0.0, y0_ = 0.0;
  long nx_ = 0, ny_ = 0;
};

/// Central rectangle plus four border strips. The south and north strips span
/// the full width; west and east cover the remaining middle band.
class FivePartition {
 public:
  enum Part : std::size_t { Center = 0, South = 1, North = 2, West = 3, East = 4 };

  FivePartition(const Region& region, double border_fraction) : region_(region) {
    if (!(border_fraction > 0.0 && border_fraction < 0.5))
      throw std::invalid_argument("partition_five: border_fraction must lie in (0, 0.5)");
    cx0_ = region.x_min() + border_fraction * region.width();
    cx1_ = region.x_max() - border_fraction * region.width();
    cy0_ = region.y_min() + border_fraction * region.height();
    cy1_ = region.y_max() - border_fraction * region.height();
  }

  const Region& region() const noexcept { return region_; }

  /// Sub-region of a point inside the region (half-open inner edges).
  Part locate(Point2 p) const noexcept {
    if (p.y < cy0_) return South;
    if (p.y >= cy1_) return North;
    if (p.x < cx0_) return West;
    if (p.x >= cx1_) return East;
    return Center;
  }

  std::array<double, 5> areas() const noexcept {
    const double w = region_.width();
    const double strip_h = cy0_ - region_.y_min();
    const double band_h = cy1_ - cy0_;
    return {(cx1_ - cx0_) * band_h, strip_h * w, (region_.y_max() - cy1_) * w,
            (cx0_ - region_.x_min()) * band_h, (region_.x_max() - cx1_) * band_h};
  }

 private:
  Region region_;
  double cx0_, cx1_, cy0_, cy1_;
};

inline FivePartition partition_five(const Region& region, double border_fraction) {
  return FivePartition(region, border_fraction);
}

/// CSV with header `tier,x_m,y_m`.
inline void write_points_csv(std::ostream& os, std::span<const PointSet> sets) {
  os << "tier,x_m,y_m\n";
  const auto old = os.precision(17);
  for (const auto& s : sets)
    for (const auto& p : s.points) os << tier_name(s.tier) << ',' << p.x << ',' << p.y << '\n';
  os.precision(old);
}

}  // namespace hho
