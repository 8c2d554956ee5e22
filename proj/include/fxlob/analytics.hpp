#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fxlob/book.hpp"
#include "fxlob/depth.hpp"
#include "fxlob/types.hpp"

namespace fxlob::flow {
struct Session;
}

namespace fxlob::analytics {

// One event of either the generated or the reconstructed order flow. `side`
// is the book side the event acts on, so a trade on the ask side was buyer
// initiated. Market orders of the generated flow appear as trades without a
// price.
struct FlowEvent {
  TimeMs time{0};
  FlowKind kind{FlowKind::LimitOrder};
  Side side{Side::Bid};
  std::optional<TickPrice> price;
  Volume volume{0};

  SliceIndex slice() const noexcept { return slice_of(time); }
};

// Six event types as in the generator: kind * 2 + side.
inline constexpr std::size_t kFlowTypes = 6;
constexpr std::size_t flow_type(FlowKind k, Side s) noexcept {
  return static_cast<std::size_t>(k) * 2 + static_cast<std::size_t>(s);
}
std::string flow_type_name(std::size_t type);

struct PricedSide {
  TickPrice price;
  Side side;
};

// Generated flow in analysis form: limit orders and cancels as submitted,
// trades as per-aggressor deals.
std::vector<FlowEvent> truth_flow(const flow::Session& session);

std::vector<PricedSide> limit_prices(std::span<const FlowEvent> events);
std::vector<PricedSide> trade_prices(std::span<const FlowEvent> events);

// ---------------------------------------------------------------------------
// Digits

struct DigitDistribution {
  std::array<std::int64_t, 10> counts{};
  std::int64_t n{0};

  double frequency(int d) const noexcept;
  // 95% half-width 1.96 sqrt(p (1 - p) / n).
  double half_width(int d) const noexcept;
  int mode() const noexcept;
  // Digits by decreasing count, ties by digit.
  std::array<int, 10> ranking() const noexcept;
};

DigitDistribution digit_distribution(std::span<const PricedSide> prices);
DigitDistribution digit_distribution(std::span<const std::int64_t> counts);

struct Chi2Result {
  double statistic{0.0};
  int dof{9};
  double p_value{1.0};
  bool reject{false};  // at the 1% level
  bool low_sample{false};
};

Chi2Result chi2_uniformity(std::span<const std::int64_t, 10> counts);
double chi2_critical_value(double level, int dof);

// Best-quote digit occupancy sampled every `period` slices, per side.
struct Occupancy {
  DigitDistribution bid;
  DigitDistribution ask;
};
Occupancy barrier_occupancy(const SnapshotSeries& snapshots, SliceIndex period = 1);

// ---------------------------------------------------------------------------
// Book shape and spread

// Mean visible volume at each distance 0..max_distance from the same-side
// best, averaged over slices where the side is non-empty.
std::vector<double> average_shape(const SnapshotSeries& snapshots, Side side,
                                  std::int64_t max_distance);

// Mean gap in ticks between visible levels k and k+1 (k = 1..9), over
// slices showing both levels. Element k-1 holds level k.
struct GapProfile {
  std::array<double, kVisibleDepth - 1> mean{};
  std::array<std::int64_t, kVisibleDepth - 1> samples{};
};
GapProfile average_gap(const SnapshotSeries& snapshots, Side side);

struct Histogram {
  std::map<std::int64_t, std::int64_t> counts;
  std::int64_t total{0};

  void add(std::int64_t key, std::int64_t n = 1) {
    counts[key] += n;
    total += n;
  }
  double share(std::int64_t key) const noexcept;
  std::optional<std::int64_t> argmax(std::int64_t lo, std::int64_t hi) const noexcept;
  // Strict local maxima of the share over consecutive keys in [lo, hi].
  std::vector<std::int64_t> local_modes(std::int64_t lo, std::int64_t hi) const;
};

// Spread in ticks, sampled at the end of every `period`-th slice with both
// sides quoted.
Histogram spread_distribution(const SnapshotSeries& snapshots, SliceIndex period = 10);

// ---------------------------------------------------------------------------
// Placement

// delta = b0 - b for bids, a - a0 for asks, against the same-side best at the
// end of the previous slice.
struct Placement {
  Histogram delta;
  std::int64_t skipped{0};  // no same-side best before the event
};
Placement placement_distribution(std::span<const FlowEvent> events, const SnapshotSeries& snapshots);

// Placement histograms conditioned on the last digit of the prior best.
struct ConditionalPlacement {
  std::array<Histogram, 10> by_digit;
  std::int64_t skipped{0};

  // The delta in [lo, hi] standing furthest above the mean of its two
  // neighbours for the given conditioning digit; near-best placements
  // decay smoothly and would otherwise mask the round-price bumps.
  std::optional<std::int64_t> peak(int digit, std::int64_t lo = 1, std::int64_t hi = 20) const;
};
ConditionalPlacement placement_conditional(std::span<const FlowEvent> events,
                                           const SnapshotSeries& snapshots);

// ---------------------------------------------------------------------------
// Arrival statistics

std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag);
double pearson(std::span<const double> x, std::span<const double> y);

// First lag L >= 1 such that every lag in [L, 2L] lies within +-band;
// nothing if no such L fits in the computed range.
std::optional<std::size_t> decay_horizon(std::span<const double> acf, double band);

// The cumulative ACF levels off: its change over the second half of the lag
// range is small against both its value and the noise of that sum.
bool saturates(std::span<const double> acf, std::size_t windows);

struct ArrivalStats {
  double window_s{10.0};
  std::size_t windows{0};
  std::array<std::vector<double>, kFlowTypes> counts;
  std::array<std::array<double, kFlowTypes>, kFlowTypes> correlation{};
  std::array<std::vector<double>, kFlowTypes> acf;
  std::array<std::vector<double>, kFlowTypes> cumulative_acf;
  double band{0.0};  // 1.96 / sqrt(windows)

  double min_off_diagonal() const noexcept;
  double max_off_diagonal() const noexcept;
};
ArrivalStats event_count_correlations(std::span<const FlowEvent> events, TimeMs duration_ms,
                                      double window_s = 10.0, std::size_t max_lag = 60);

struct SignMemory {
  std::vector<double> acf;
  double band{0.0};
  std::optional<std::size_t> horizon_lags;
  std::optional<double> horizon_minutes(double window_s) const noexcept;
};
struct SignStats {
  double window_s{10.0};
  SignMemory market;
  SignMemory limit;
};
// Mean sign (+1 buying interest) per window; windows without events count 0.
SignStats sign_memory(std::span<const FlowEvent> events, TimeMs duration_ms, double window_s = 10.0,
                      std::size_t max_lag = 120);

// ---------------------------------------------------------------------------
// Volumes

struct PowerLawFit {
  double alpha{0.0};
  std::int64_t xmin{1};
  double log_likelihood{0.0};
  std::int64_t n_tail{0};
  double ks_distance{0.0};
  bool low_sample{false};
};

// Discrete power-law MLE for a fixed xmin.
PowerLawFit fit_power_law(std::span<const std::int64_t> values, std::int64_t xmin = 1);
// Chooses xmin in [1, max_xmin] by the Kolmogorov-Smirnov distance.
PowerLawFit fit_power_law_ks(std::span<const std::int64_t> values, std::int64_t max_xmin = 20);

struct GeometricFit {
  double mean{0.0};
  double rate{0.0};  // exponential rate, ln(mean / (mean - 1)); inf when all ones
  std::int64_t n{0};
};
GeometricFit fit_geometric(std::span<const std::int64_t> values);

// Multiples of 5 whose count exceeds both neighbours.
std::vector<std::int64_t> round_volume_peaks(const Histogram& volumes, std::int64_t max_volume = 50);

struct VolumeSplit {
  Histogram integer_volumes;
  Histogram decimal_volumes;
  PowerLawFit integer_fit;
  GeometricFit decimal_fit;
  std::vector<std::int64_t> peaks;
};
VolumeSplit volume_split_fit(std::span<const FlowEvent> events);

// ---------------------------------------------------------------------------
// Spread typology

// A best-quote digit configuration, canonicalised so that bid_digit <=
// ask_digit (mirror configurations are merged).
struct DigitPair {
  int bid_digit;
  int ask_digit;
  auto operator<=>(const DigitPair&) const = default;
};

struct SpreadTypology {
  std::int64_t spread{0};
  std::int64_t samples{0};
  std::map<DigitPair, std::int64_t> configurations;
  std::int64_t integer_samples{0};  // at least one integer best quote

  double share(DigitPair p) const noexcept;
  double integer_share() const noexcept;
};

// Digit configurations at `spread`, the canonical pairs being those with
// bid_digit + ask_digit = 10 - spread (mod 10).
std::vector<DigitPair> spread_configurations(std::int64_t spread);
DigitPair canonical_pair(TickPrice bid, TickPrice ask) noexcept;

SpreadTypology spread_typology(const SnapshotSeries& snapshots, std::int64_t spread,
                               SliceIndex period = 1);
SpreadTypology spread_typology(std::span<const std::pair<TickPrice, TickPrice>> quotes,
                               std::int64_t spread);

}  // namespace fxlob::analytics
