#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hho/analytics.hpp"
#include "hho/geometry.hpp"
#include "hho/mobility.hpp"
#include "hho/radio.hpp"
#include "hho/random.hpp"

namespace hho {

// ---------------------------------------------------------------------------
// Segment / circle intersection

/// Where a segment p0 -> p1 meets a circle. Parameters are fractions of the
/// segment in [0, 1]; `inside_begin`/`inside_end` bound the part strictly
/// inside the circle (empty when inside_end <= inside_begin).
struct SegmentCrossing {
  int count = 0;
  std::array<double, 2> params{};
  double inside_begin = 0.0;
  double inside_end = 0.0;
  double chord_length = 0.0;
};

inline SegmentCrossing segment_circle_crossings(Point2 p0, Point2 p1, const Circle& c) {
  const Point2 d = p1 - p0;
  const double a = norm2(d);
  if (!(a > 0.0)) throw std::invalid_argument("segment_circle_crossings: zero-length segment");
  const Point2 f = p0 - c.center;
  const double half_b = dot(f, d);
  const double cc = norm2(f) - c.radius * c.radius;
  const double disc = half_b * half_b - a * cc;
  SegmentCrossing out;
  if (disc < 0.0) return out;
  if (disc == 0.0) {
    const double t = -half_b / a;
    if (t >= 0.0 && t <= 1.0) out.params[out.count++] = t;
    return out;
  }
  // Numerically stable pair of roots.
  const double sq = std::sqrt(disc);
  const double qr = -(half_b + std::copysign(sq, half_b));
  double t1 = qr / a;
  double t2 = qr != 0.0 ? cc / qr : -t1;
  if (t1 > t2) std::swap(t1, t2);
  for (double t : {t1, t2})
    if (t >= 0.0 && t <= 1.0) out.params[out.count++] = t;
  out.inside_begin = std::clamp(t1, 0.0, 1.0);
  out.inside_end = std::clamp(t2, 0.0, 1.0);
  out.chord_length = std::max(0.0, out.inside_end - out.inside_begin) * std::sqrt(a);
  return out;
}

// ---------------------------------------------------------------------------
// Configuration and results

struct SimConfig {
  Region region = Region::square(5000.0);
  double guard = 1000.0;  // BSs are deployed on the region grown by this margin
  std::array<TierRadioParams, 3> tiers = {default_tier_params(Tier::Macro), default_tier_params(Tier::Small),
                                          default_tier_params(Tier::Hotspot)};
  double lambda_m = 2e-6;
  double lambda_s = 2e-5;
  ClusterConfig cluster{2e-6, 150.0, 5.0};
  MobilityConfig mobility;
  HandoverThresholds thresholds;
  std::size_t n_users = 50;
  std::size_t n_moves = 50;
  std::size_t n_trials = 200;
  std::uint64_t master_seed = 1;
  std::size_t workers = 1;

  void validate() const {
    if (!(guard >= 0.0)) throw std::invalid_argument("SimConfig: guard must be >= 0");
    if (!(lambda_m > 0.0) || !(lambda_s > 0.0)) throw std::invalid_argument("SimConfig: densities must be > 0");
    cluster.validate();
    mobility.validate();
    thresholds.validate();
    for (const auto& t : tiers) t.validate();
    if (n_users < 1 || n_moves < 1 || n_trials < 1) throw std::invalid_argument("SimConfig: counts must be >= 1");
    if (workers < 1) throw std::invalid_argument("SimConfig: workers must be >= 1");
  }

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct PairCounts {
  std::uint64_t triggered = 0;
  std::uint64_t handovers = 0;
  std::uint64_t failures = 0;
  std::uint64_t pingpongs = 0;
  std::uint64_t censored = 0;  // trajectory ended inside before T elapsed
  std::uint64_t overlap = 0;   // one pass counted as both handover and failure
  std::uint64_t n_bs = 0;      // target BSs inside the user region
  std::uint64_t skipped = 0;   // pairs without a usable circle (lambda* xi >= 1)

  PairCounts& operator+=(const PairCounts& o) noexcept {
    triggered += o.triggered;
    handovers += o.handovers;
    failures += o.failures;
    pingpongs += o.pingpongs;
    censored += o.censored;
    overlap += o.overlap;
    n_bs += o.n_bs;
    skipped += o.skipped;
    return *this;
  }
  friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

struct EventCounts {
  std::array<PairCounts, 3> pairs{};
  double exposure_time = 0.0;  // s, summed over users

  const PairCounts& operator[](PairKind p) const noexcept { return pairs[pair_index(p)]; }
  PairCounts& operator[](PairKind p) noexcept { return pairs[pair_index(p)]; }
  friend bool operator==(const EventCounts&, const EventCounts&) = default;
};

// ---------------------------------------------------------------------------
// Trial internals

namespace detail {

struct PairInstance {
  PairKind kind;
  Point2 serving;
  Point2 target;
  ErbPair erb;
};

struct Interval {
  double start;
  double end;
  std::size_t segment;  // segment during which the interval starts
  bool entry;           // starts with a genuine boundary crossing
  bool censored;        // still inside when the trajectory ends
};

// Segment k starts at start[k], travels for travel[k], then pauses.
struct Timeline {
  std::vector<double> start;
  std::vector<double> travel;
  double pause = 0.0;
  double total = 0.0;

  explicit Timeline(const Trajectory& t) : pause(t.pause) {
    double now = 0.0;
    for (std::size_t k = 0; k < t.moves(); ++k) {
      start.push_back(now);
      travel.push_back(t.segment_length(k) / t.velocity);
      now += travel.back() + t.pause;
    }
    total = now;
  }
};

inline constexpr double kTimeEps = 1e-9;

/// Maximal time intervals the user spends strictly inside `c`.
inline std::vector<Interval> inside_intervals(const Circle& c, const Trajectory& traj, const Timeline& tl) {
  std::vector<Interval> raw;
  const double r2 = c.radius * c.radius;
  for (std::size_t k = 0; k < traj.moves(); ++k) {
    const Point2 a = traj.waypoints[k], b = traj.waypoints[k + 1];
    // Cheap reject: distance from the center to the segment's bounding box.
    const double gx = std::max({std::min(a.x, b.x) - c.center.x, 0.0, c.center.x - std::max(a.x, b.x)});
    const double gy = std::max({std::min(a.y, b.y) - c.center.y, 0.0, c.center.y - std::max(a.y, b.y)});
    if (gx * gx + gy * gy < r2) {
      const auto x = segment_circle_crossings(a, b, c);
      if (x.inside_end > x.inside_begin) {
        const double t0 = tl.start[k] + x.inside_begin * tl.travel[k];
        const double t1 = tl.start[k] + x.inside_end * tl.travel[k];
        raw.push_back({t0, t1, k, x.inside_begin > 0.0 || (k == 0 ? false : !c.contains(a)), false});
      }
    }
    if (tl.pause > 0.0 && c.contains(b)) {
      const double t0 = tl.start[k] + tl.travel[k];
      raw.push_back({t0, t0 + tl.pause, k, false, false});
    }
  }
  std::vector<Interval> merged;
  for (const auto& iv : raw) {
    if (!merged.empty() && iv.start <= merged.back().end + kTimeEps) {
      merged.back().end = std::max(merged.back().end, iv.end);
    } else {
      merged.push_back(iv);
    }
  }
  for (auto& iv : merged) {
    iv.entry = iv.start > kTimeEps;
    iv.censored = iv.end >= tl.total - kTimeEps;
  }
  return merged;
}

inline Point2 position_at(const Trajectory& traj, const Timeline& tl, std::size_t k, double t) {
  const double frac = tl.travel[k] > 0.0 ? std::clamp((t - tl.start[k]) / tl.travel[k], 0.0, 1.0) : 1.0;
  return traj.waypoints[k] + frac * (traj.waypoints[k + 1] - traj.waypoints[k]);
}

/// ln RSS_serving - ln RSS_target; positive where the original BS is stronger.
struct RssMargin {
  Point2 serving, target;
  TierRadioParams sp, tp;
  double operator()(Point2 p) const {
    const double ds = std::max(distance(p, serving), 1e-9);
    const double dt = std::max(distance(p, target), 1e-9);
    return std::log(sp.reference_rss()) - sp.pathloss_exponent * std::log(ds) - std::log(tp.reference_rss()) +
           tp.pathloss_exponent * std::log(dt);
  }
};

/// First time >= t_from at which the margin has sign `want_positive`, searched
/// up to t_limit. Moving parts are sampled and refined by bisection; pauses
/// hold a fixed position.
inline std::optional<double> first_time_with_sign(const RssMargin& margin, bool want_positive,
                                                  const Trajectory& traj, const Timeline& tl, std::size_t k0,
                                                  double t_from, double t_limit) {
  auto ok = [&](Point2 p) { return want_positive ? margin(p) > 0.0 : margin(p) < 0.0; };
  constexpr int kSamples = 64;
  for (std::size_t k = k0; k < traj.moves(); ++k) {
    const double seg_begin = std::max(t_from, tl.start[k]);
    const double seg_end = tl.start[k] + tl.travel[k];
    if (seg_begin > t_limit) return std::nullopt;
    if (seg_begin <= seg_end) {
      double prev_t = seg_begin;
      if (ok(position_at(traj, tl, k, prev_t))) return prev_t;
      for (int i = 1; i <= kSamples; ++i) {
        const double t = seg_begin + (seg_end - seg_begin) * i / kSamples;
        if (ok(position_at(traj, tl, k, t))) {
          double lo = prev_t, hi = t;
          for (int it = 0; it < 80 && hi - lo > 1e-9; ++it) {
            const double mid = 0.5 * (lo + hi);
            (ok(position_at(traj, tl, k, mid)) ? hi : lo) = mid;
          }
          return hi;
        }
        prev_t = t;
      }
    }
    // Pause at the end of segment k.
    const double pause_begin = std::max(t_from, seg_end);
    if (tl.pause > 0.0 && pause_begin <= seg_end + tl.pause && ok(traj.waypoints[k + 1])) return pause_begin;
  }
  return std::nullopt;
}

/// Uniform grid over circle bounding boxes.
class CircleGrid {
 public:
  CircleGrid(const Region& area, double cell, const std::vector<PairInstance>& items)
      : x0_(area.x_min()), y0_(area.y_min()), cell_(cell) {
    nx_ = static_cast<long>(std::ceil(area.width() / cell_)) + 1;
    ny_ = static_cast<long>(std::ceil(area.height() / cell_)) + 1;
    cells_.assign(static_cast<std::size_t>(nx_ * ny_), {});
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto& c = items[i].erb.handover_circle;
      for_cells(c.center.x - c.radius, c.center.y - c.radius, c.center.x + c.radius, c.center.y + c.radius,
                [&](std::size_t idx) { cells_[idx].push_back(i); });
    }
  }

  template <class F>
  void for_cells(double xa, double ya, double xb, double yb, F&& f) const {
    const long ix0 = std::clamp(static_cast<long>(std::floor((xa - x0_) / cell_)), 0L, nx_ - 1);
    const long ix1 = std::clamp(static_cast<long>(std::floor((xb - x0_) / cell_)), 0L, nx_ - 1);
    const long iy0 = std::clamp(static_cast<long>(std::floor((ya - y0_) / cell_)), 0L, ny_ - 1);
    const long iy1 = std::clamp(static_cast<long>(std::floor((yb - y0_) / cell_)), 0L, ny_ - 1);
    for (long ix = ix0; ix <= ix1; ++ix)
      for (long iy = iy0; iy <= iy1; ++iy) f(static_cast<std::size_t>(ix * ny_ + iy));
  }

  const std::vector<std::size_t>& cell(std::size_t idx) const { return cells_[idx]; }

 private:
  double x0_, y0_, cell_;
  long nx_ = 0, ny_ = 0;
  std::vector<std::vector<std::size_t>> cells_;
};

/// Events produced by one user against one (serving, target) pair.
inline void count_pair_events(const PairInstance& inst, const SimConfig& cfg, const Trajectory& traj,
                              const Timeline& tl, PairCounts& out) {
  const auto ho = inside_intervals(inst.erb.handover_circle, traj, tl);
  if (ho.empty()) return;
  const auto fail = inside_intervals(inst.erb.failure_circle, traj, tl);
  const double T = cfg.thresholds.t_threshold;
  const double Tp = cfg.thresholds.t_pingpong;
  const auto& sp = cfg.tiers[tier_index(serving_tier(inst.kind))];
  const auto& tp = cfg.tiers[tier_index(target_tier(inst.kind))];
  const bool exact_circle = sp.pathloss_exponent == tp.pathloss_exponent;
  const RssMargin margin{inst.serving, inst.target, sp, tp};

  for (const auto& iv : ho) {
    if (!iv.entry) continue;
    ++out.triggered;
    const double sojourn = iv.end - iv.start;
    bool handed_over = false;
    if (sojourn >= T) {
      handed_over = true;
      ++out.handovers;
    } else if (iv.censored) {
      ++out.censored;
    }

    bool failed = false;
    for (const auto& f : fail) {
      if (f.start + kTimeEps < iv.start || f.start > iv.end + kTimeEps) continue;
      if (f.start - iv.start < T) failed = true;
      break;
    }
    if (failed) {
      ++out.failures;
      if (handed_over) ++out.overlap;
    }

    // Return to the original BS's service area, judged by exact DL-RSS.
    std::optional<double> back;
    if (exact_circle) {
      if (!iv.censored) back = iv.end;
    } else {
      const double limit = iv.start + Tp + 1.0;
      const auto in_target = first_time_with_sign(margin, false, traj, tl, iv.segment, iv.start, limit);
      if (in_target) {
        std::size_t k = iv.segment;
        while (k + 1 < traj.moves() && tl.start[k + 1] <= *in_target) ++k;
        back = first_time_with_sign(margin, true, traj, tl, k, *in_target, limit);
      }
    }
    if (back) {
      const double dwell = *back - iv.start;
      if (dwell >= T && dwell < Tp) ++out.pingpongs;
    }
  }
}

}  // namespace detail

/// One independent realization: deployment, n_users MRWP users, event counts.
inline EventCounts run_trial(const SimConfig& cfg, std::uint64_t trial_index) {
  cfg.validate();
  Rng rng(derive_seed(cfg.master_seed, trial_index));
  const Region deploy = cfg.region.dilated(cfg.guard);

  const PointSet macro = sample_ppp(deploy, cfg.lambda_m, rng, Tier::Macro);
  const PointSet small = sample_ppp(deploy, cfg.lambda_s, rng, Tier::Small);
  const TcpSample hot = sample_tcp(deploy, cfg.cluster, rng);

  const double cell = 250.0;
  const GridIndex macro_idx(macro.points, cell);
  const GridIndex small_idx(small.points, cell);

  EventCounts counts;
  std::vector<detail::PairInstance> pairs;
  auto add = [&](PairKind kind, Point2 serving, Point2 target) {
    const auto& sp = cfg.tiers[tier_index(serving_tier(kind))];
    const auto& tp = cfg.tiers[tier_index(target_tier(kind))];
    if (serving == target) {
      ++counts[kind].skipped;
      return;
    }
    try {
      auto erb = make_erb_pair(serving, target, sp, tp, cfg.thresholds.q_out);
      if (!erb.handover_circle.target_inside || !erb.failure_circle.target_inside) {
        ++counts[kind].skipped;
        return;
      }
      pairs.push_back({kind, serving, target, erb});
    } catch (const DegenerateBoundary&) {
      ++counts[kind].skipped;
    }
  };

  for (const auto& s : small.points) {
    if (cfg.region.contains(s)) ++counts[PairKind::SM].n_bs;
    if (!macro_idx.empty()) add(PairKind::SM, macro.points[macro_idx.nearest(s).index], s);
  }
  for (std::size_t i = 0; i < hot.offspring.size(); ++i) {
    const Point2 child = hot.offspring.points[i];
    const Point2 parent = hot.parents.points[hot.parent_index[i]];
    if (cfg.region.contains(child)) {
      ++counts[PairKind::SpS].n_bs;
      ++counts[PairKind::SpM].n_bs;
    }
    if (!small_idx.empty()) add(PairKind::SpS, small.points[small_idx.nearest(parent).index], child);
    if (!macro_idx.empty()) add(PairKind::SpM, macro.points[macro_idx.nearest(parent).index], child);
  }

  const detail::CircleGrid grid(deploy, cell, pairs);
  std::vector<std::size_t> stamp(pairs.size(), 0);
  std::vector<std::size_t> candidates;

  for (std::size_t u = 0; u < cfg.n_users; ++u) {
    const Point2 start{rng.uniform(cfg.region.x_min(), cfg.region.x_max()),
                       rng.uniform(cfg.region.y_min(), cfg.region.y_max())};
    const Trajectory traj = generate_trajectory(start, cfg.n_moves, cfg.region, cfg.mobility, rng);
    const detail::Timeline tl(traj);
    counts.exposure_time += tl.total;

    candidates.clear();
    for (std::size_t k = 0; k < traj.moves(); ++k) {
      const Point2 a = traj.waypoints[k], b = traj.waypoints[k + 1];
      grid.for_cells(std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y),
                     [&](std::size_t idx) {
                       for (auto i : grid.cell(idx)) {
                         if (stamp[i] == u + 1) continue;
                         stamp[i] = u + 1;
                         candidates.push_back(i);
                       }
                     });
    }
    std::sort(candidates.begin(), candidates.end());
    for (auto i : candidates) detail::count_pair_events(pairs[i], cfg, traj, tl, counts[pairs[i].kind]);
  }
  return counts;
}

// ---------------------------------------------------------------------------
// Campaigns

struct Estimate {
  double value = 0.0;
  double half_width = std::numeric_limits<double>::quiet_NaN();  // 95%, NaN with < 2 trials

  bool has_interval() const noexcept { return std::isfinite(half_width); }
};

struct PairEstimate {
  Estimate triggered_rate;
  Estimate handover_rate;
  Estimate failure_rate;
  Estimate pingpong_rate;
  double mean_n_bs = 0.0;
  PairCounts totals;
};

struct MetricsEstimate {
  std::array<PairEstimate, 3> pairs{};
  std::vector<EventCounts> trials;
  double exposure_time = 0.0;

  const PairEstimate& operator[](PairKind p) const noexcept { return pairs[pair_index(p)]; }
};

namespace detail {

// Pooled ratio of sums; half-width from the spread of per-trial ratios.
inline Estimate pooled_estimate(const std::vector<double>& num, const std::vector<double>& den) {
  Estimate e;
  double sn = 0.0, sd = 0.0;
  std::vector<double> per;
  for (std::size_t i = 0; i < num.size(); ++i) {
    sn += num[i];
    sd += den[i];
    if (den[i] > 0.0) per.push_back(num[i] / den[i]);
  }
  e.value = sd > 0.0 ? sn / sd : 0.0;
  if (per.size() >= 2) {
    double mean = 0.0;
    for (double v : per) mean += v;
    mean /= static_cast<double>(per.size());
    double var = 0.0;
    for (double v : per) var += (v - mean) * (v - mean);
    var /= static_cast<double>(per.size() - 1);
    e.half_width = 1.959963984540054 * std::sqrt(var / static_cast<double>(per.size()));
  }
  return e;
}

}  // namespace detail

inline MetricsEstimate summarize(std::vector<EventCounts> trials) {
  MetricsEstimate m;
  const std::size_t n = trials.size();
  for (const auto& t : trials) m.exposure_time += t.exposure_time;
  if (!(m.exposure_time > 0.0)) throw std::invalid_argument("run_campaign: zero exposure time");
  for (auto p : kAllPairs) {
    std::vector<double> trig(n), ho(n), fail(n), pp(n), expo(n);
    auto& pe = m.pairs[pair_index(p)];
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = trials[i][p];
      trig[i] = static_cast<double>(c.triggered);
      ho[i] = static_cast<double>(c.handovers);
      fail[i] = static_cast<double>(c.failures);
      pp[i] = static_cast<double>(c.pingpongs);
      expo[i] = trials[i].exposure_time;
      pe.totals += c;
    }
    pe.triggered_rate = detail::pooled_estimate(trig, expo);
    pe.handover_rate = detail::pooled_estimate(ho, expo);
    pe.failure_rate = detail::pooled_estimate(fail, trig);
    pe.pingpong_rate = detail::pooled_estimate(pp, expo);
    pe.mean_n_bs = static_cast<double>(pe.totals.n_bs) / static_cast<double>(n);
  }
  m.trials = std::move(trials);
  return m;
}

/// Runs cfg.n_trials trials on cfg.workers threads. Trial i always uses the
/// stream derived from (master_seed, i), so results do not depend on the
/// worker count or scheduling.
inline MetricsEstimate run_campaign(const SimConfig& cfg) {
  cfg.validate();
  std::vector<EventCounts> results(cfg.n_trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i = next++; i < cfg.n_trials && !failed; i = next++) {
      try {
        results[i] = run_trial(cfg, i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::min(cfg.workers, cfg.n_trials);
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t w = 0; w < n_threads; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return summarize(std::move(results));
}

// ---------------------------------------------------------------------------
// Analytic cross-check

enum class Metric { TriggeredRate, HandoverRate, FailureRate, PingpongRate };

inline constexpr std::array<Metric, 4> kAllMetrics = {Metric::TriggeredRate, Metric::HandoverRate,
                                                      Metric::FailureRate, Metric::PingpongRate};

constexpr std::string_view metric_name(Metric m) noexcept {
  switch (m) {
    case Metric::TriggeredRate: return "H_t";
    case Metric::HandoverRate: return "H";
    case Metric::FailureRate: return "H_f";
    case Metric::PingpongRate: return "H_p";
  }
  return "?";
}

struct ComparisonRow {
  PairKind pair;
  Metric metric;
  double analytic;     // closed form with the quadrature mean distance
  double analytic_ub;  // closed form with the upper-bound mean distance (NaN if out of range)
  double simulated;
  double half_width;
  double ratio;        // simulated / analytic
  bool ub_below_sim;   // upper-bound-based value below the simulated mean
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  MetricsEstimate simulated;

  const ComparisonRow& at(PairKind p, Metric m) const {
    for (const auto& r : rows)
      if (r.pair == p && r.metric == m) return r;
    throw std::out_of_range("Comparison::at: no such row");
  }
};

inline AnalyticInputs analytic_inputs(const SimConfig& cfg, PairKind pair, double n_bs_mean) {
  AnalyticInputs in;
  in.pair = pair;
  in.tiers = cfg.tiers;
  in.lambda_m = cfg.lambda_m;
  in.lambda_s = cfg.lambda_s;
  in.sigma = cfg.cluster.sigma;
  in.mobility = cfg.mobility;
  in.thresholds = cfg.thresholds;
  in.region_area = cfg.region.area();
  in.n_bs_mean = n_bs_mean;
  return in;
}

inline double metric_value(const HandoverMetrics& h, Metric m) noexcept {
  switch (m) {
    case Metric::TriggeredRate: return h.triggered_rate;
    case Metric::HandoverRate: return h.handover_rate;
    case Metric::FailureRate: return h.failure_rate;
    case Metric::PingpongRate: return h.pingpong_rate;
  }
  return 0.0;
}

inline const Estimate& metric_estimate(const PairEstimate& p, Metric m) noexcept {
  switch (m) {
    case Metric::TriggeredRate: return p.triggered_rate;
    case Metric::HandoverRate: return p.handover_rate;
    case Metric::FailureRate: return p.failure_rate;
    case Metric::PingpongRate: break;
  }
  return p.pingpong_rate;
}

/// Analytic rates use the measured mean number of target BSs per trial.
inline Comparison compare_to_analytics(const SimConfig& cfg, const MetricsEstimate& sim) {
  Comparison out;
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (auto p : kAllPairs) {
    const auto& ps = sim[p];
    const auto in = analytic_inputs(cfg, p, ps.mean_n_bs);
    std::optional<HandoverMetrics> exact, ub;
    try {
      exact = evaluate_metrics(in, MeanDistanceMode::Quadrature);
    } catch (const std::exception&) {
    }
    try {
      ub = evaluate_metrics(in, MeanDistanceMode::UpperBound);
    } catch (const std::exception&) {
    }
    for (auto m : kAllMetrics) {
      ComparisonRow row{p, m, nan, nan, 0.0, nan, nan, false};
      const auto& est = metric_estimate(ps, m);
      row.simulated = est.value;
      row.half_width = est.half_width;
      if (exact) row.analytic = metric_value(*exact, m);
      if (ub) row.analytic_ub = metric_value(*ub, m);
      if (row.analytic > 0.0) row.ratio = row.simulated / row.analytic;
      row.ub_below_sim = ub && row.analytic_ub < row.simulated;
      out.rows.push_back(row);
    }
  }
  out.simulated = sim;
  return out;
}

inline Comparison compare_to_analytics(const SimConfig& cfg) { return compare_to_analytics(cfg, run_campaign(cfg)); }

}  // namespace hho
