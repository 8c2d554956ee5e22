#include "fxlob/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>

#include "fxlob/distributions.hpp"
#include "fxlob/feed.hpp"
#include "fxlob/flowgen.hpp"
#include "fxlob/instrument.hpp"

namespace fxlob::analytics {

std::string flow_type_name(std::size_t type) {
  static constexpr const char* kNames[kFlowTypes] = {"limit_bid",  "limit_ask",  "cancel_bid",
                                                      "cancel_ask", "market_bid", "market_ask"};
  return type < kFlowTypes ? kNames[type] : "?";
}

std::vector<FlowEvent> truth_flow(const flow::Session& session) {
  std::vector<FlowEvent> out;
  const auto deals = feed::aggregate_deals(session.trades);
  out.reserve(session.events.size() + deals.size());
  auto d = deals.begin();
  for (const auto& e : session.events) {
    if (e.kind == flow::EventKind::MarketOrder) continue;
    while (d != deals.end() && d->time < e.time) {
      out.push_back({d->time, FlowKind::Trade, d->book_side(), d->price, d->volume});
      ++d;
    }
    out.push_back({e.time, e.kind == flow::EventKind::LimitOrder ? FlowKind::LimitOrder : FlowKind::Cancel,
                   e.side, e.price, e.volume});
  }
  for (; d != deals.end(); ++d) out.push_back({d->time, FlowKind::Trade, d->book_side(), d->price, d->volume});
  return out;
}

std::vector<PricedSide> limit_prices(std::span<const FlowEvent> events) {
  std::vector<PricedSide> out;
  for (const auto& e : events)
    if (e.kind == FlowKind::LimitOrder && e.price) out.push_back({*e.price, e.side});
  return out;
}

std::vector<PricedSide> trade_prices(std::span<const FlowEvent> events) {
  std::vector<PricedSide> out;
  for (const auto& e : events)
    if (e.kind == FlowKind::Trade && e.price) out.push_back({*e.price, e.side});
  return out;
}

// ---------------------------------------------------------------------------
// Digits

double DigitDistribution::frequency(int d) const noexcept {
  return n > 0 ? static_cast<double>(counts[static_cast<std::size_t>(d)]) / static_cast<double>(n)
               : 0.0;
}

double DigitDistribution::half_width(int d) const noexcept {
  if (n == 0) return 0.0;
  const double p = frequency(d);
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

int DigitDistribution::mode() const noexcept { return ranking()[0]; }

std::array<int, 10> DigitDistribution::ranking() const noexcept {
  std::array<int, 10> order;
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [this](int a, int b) {
    return counts[static_cast<std::size_t>(a)] > counts[static_cast<std::size_t>(b)];
  });
  return order;
}

DigitDistribution digit_distribution(std::span<const PricedSide> prices) {
  DigitDistribution d;
  for (const auto& p : prices) ++d.counts[static_cast<std::size_t>(last_digit(p.price, p.side))];
  d.n = static_cast<std::int64_t>(prices.size());
  return d;
}

DigitDistribution digit_distribution(std::span<const std::int64_t> counts) {
  if (counts.size() != 10) throw std::invalid_argument("digit_distribution: need 10 counts");
  DigitDistribution d;
  for (std::size_t i = 0; i < 10; ++i) {
    if (counts[i] < 0) throw std::invalid_argument("digit_distribution: negative count");
    d.counts[i] = counts[i];
    d.n += counts[i];
  }
  return d;
}

Chi2Result chi2_uniformity(std::span<const std::int64_t, 10> counts) {
  Chi2Result r;
  const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::int64_t{0}));
  r.low_sample = n < 100;
  if (n <= 0) return r;
  const double expected = n / 10.0;
  for (auto c : counts) r.statistic += (c - expected) * (c - expected) / expected;
  r.p_value = boost::math::gamma_q(r.dof / 2.0, r.statistic / 2.0);
  r.reject = r.p_value < 0.01;
  return r;
}

double chi2_critical_value(double level, int dof) {
  const boost::math::chi_squared_distribution<double> dist(dof);
  return boost::math::quantile(boost::math::complement(dist, level));
}

namespace {
// Samples are taken at the end of slices k * period + period - 1; counts
// those falling in [first, first + count).
SliceIndex samples_in(SliceIndex first, SliceIndex count, SliceIndex period) noexcept {
  return std::max<SliceIndex>(0, (first + count) / period - (first + period) / period + 1);
}
}  // namespace

Occupancy barrier_occupancy(const SnapshotSeries& snapshots, SliceIndex period) {
  if (period < 1) throw std::invalid_argument("barrier_occupancy: period must be >= 1");
  Occupancy occ;
  snapshots.for_each_run([&](const DepthSnapshot& s, SliceIndex first, SliceIndex count) {
    const SliceIndex n = samples_in(first, count, period);
    if (n == 0) return;
    if (auto b = s.bids.best()) {
      occ.bid.counts[static_cast<std::size_t>(last_digit(*b, Side::Bid))] += n;
      occ.bid.n += n;
    }
    if (auto a = s.asks.best()) {
      occ.ask.counts[static_cast<std::size_t>(last_digit(*a, Side::Ask))] += n;
      occ.ask.n += n;
    }
  });
  return occ;
}

// ---------------------------------------------------------------------------
// Shape, gap, spread

std::vector<double> average_shape(const SnapshotSeries& snapshots, Side side,
                                  std::int64_t max_distance) {
  if (max_distance < 0) throw std::invalid_argument("average_shape: negative distance");
  std::vector<double> sum(static_cast<std::size_t>(max_distance + 1), 0.0);
  std::int64_t samples = 0;
  const std::int64_t dir = side == Side::Bid ? -1 : 1;
  snapshots.for_each_run([&](const DepthSnapshot& s, SliceIndex, SliceIndex count) {
    const auto& depth = s.side(side);
    if (depth.empty()) return;
    samples += count;
    const TickPrice best = depth[0].price;
    for (const auto& lv : depth.levels()) {
      const std::int64_t d = (lv.price - best) * dir;
      if (d <= max_distance) sum[static_cast<std::size_t>(d)] += static_cast<double>(lv.volume * count);
    }
  });
  if (samples == 0) throw std::invalid_argument("average_shape: no slice quotes this side");
  for (auto& v : sum) v /= static_cast<double>(samples);
  return sum;
}

GapProfile average_gap(const SnapshotSeries& snapshots, Side side) {
  GapProfile g;
  std::array<double, kVisibleDepth - 1> sum{};
  snapshots.for_each_run([&](const DepthSnapshot& s, SliceIndex, SliceIndex count) {
    const auto& depth = s.side(side);
    for (std::size_t k = 0; k + 1 < depth.size(); ++k) {
      sum[k] += static_cast<double>(std::abs(depth[k + 1].price - depth[k].price) * count);
      g.samples[k] += count;
    }
  });
  for (std::size_t k = 0; k < sum.size(); ++k)
    g.mean[k] = g.samples[k] ? sum[k] / static_cast<double>(g.samples[k]) : 0.0;
  return g;
}

double Histogram::share(std::int64_t key) const noexcept {
  if (total == 0) return 0.0;
  const auto it = counts.find(key);
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

std::optional<std::int64_t> Histogram::argmax(std::int64_t lo, std::int64_t hi) const noexcept {
  std::optional<std::int64_t> best;
  std::int64_t best_count = 0;
  for (auto it = counts.lower_bound(lo); it != counts.end() && it->first <= hi; ++it) {
    if (it->second > best_count) {
      best_count = it->second;
      best = it->first;
    }
  }
  return best;
}

std::vector<std::int64_t> Histogram::local_modes(std::int64_t lo, std::int64_t hi) const {
  std::vector<std::int64_t> out;
  auto at = [this](std::int64_t k) {
    const auto it = counts.find(k);
    return it == counts.end() ? 0 : it->second;
  };
  for (std::int64_t k = lo; k <= hi; ++k) {
    const auto c = at(k);
    if (c > 0 && c > at(k - 1) && c > at(k + 1)) out.push_back(k);
  }
  return out;
}

Histogram spread_distribution(const SnapshotSeries& snapshots, SliceIndex period) {
  if (period < 1) throw std::invalid_argument("spread_distribution: period must be >= 1");
  Histogram h;
  snapshots.for_each_run([&](const DepthSnapshot& s, SliceIndex first, SliceIndex count) {
    const auto spread = s.spread();
    if (!spread) return;
    if (const SliceIndex n = samples_in(first, count, period)) h.add(*spread, n);
  });
  return h;
}

// ---------------------------------------------------------------------------
// Placement

namespace {

template <class Fn>
void for_each_placement(std::span<const FlowEvent> events, const SnapshotSeries& snapshots,
                        std::int64_t& skipped, Fn&& fn) {
  for (const auto& e : events) {
    if (e.kind != FlowKind::LimitOrder || !e.price) continue;
    const SliceIndex s = e.slice();
    const auto best = s > 0 ? snapshots.at(s - 1).side(e.side).best() : std::nullopt;
    if (!best) {
      ++skipped;
      continue;
    }
    const std::int64_t delta = e.side == Side::Bid ? *best - *e.price : *e.price - *best;
    fn(delta, *best, e.side);
  }
}

}  // namespace

Placement placement_distribution(std::span<const FlowEvent> events, const SnapshotSeries& snapshots) {
  Placement p;
  for_each_placement(events, snapshots, p.skipped,
                     [&](std::int64_t delta, TickPrice, Side) { p.delta.add(delta); });
  return p;
}

ConditionalPlacement placement_conditional(std::span<const FlowEvent> events,
                                           const SnapshotSeries& snapshots) {
  ConditionalPlacement c;
  for_each_placement(events, snapshots, c.skipped, [&](std::int64_t delta, TickPrice best, Side side) {
    c.by_digit[static_cast<std::size_t>(last_digit(best, side))].add(delta);
  });
  return c;
}

std::optional<std::int64_t> ConditionalPlacement::peak(int digit, std::int64_t lo,
                                                       std::int64_t hi) const {
  const auto& h = by_digit.at(static_cast<std::size_t>(digit));
  auto at = [&h](std::int64_t k) {
    const auto it = h.counts.find(k);
    return it == h.counts.end() ? 0.0 : static_cast<double>(it->second);
  };
  std::optional<std::int64_t> best;
  double best_excess = 0.0;
  for (std::int64_t k = lo; k <= hi; ++k) {
    const double excess = at(k) - 0.5 * (at(k - 1) + at(k + 1));
    if (excess > best_excess) {
      best_excess = excess;
      best = k;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Arrival statistics

std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  std::vector<double> acf(max_lag + 1, 0.0);
  if (n == 0) return acf;
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  if (var <= 0.0) return acf;
  for (std::size_t k = 0; k <= max_lag && k < n; ++k) {
    double s = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) s += (x[t] - mean) * (x[t + k] - mean);
    acf[k] = s / var;
  }
  return acf;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("pearson: size mismatch");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

std::optional<std::size_t> decay_horizon(std::span<const double> acf, double band) {
  for (std::size_t lag = 1; 2 * lag < acf.size(); ++lag) {
    bool inside = true;
    for (std::size_t k = lag; k <= 2 * lag && inside; ++k) inside = std::abs(acf[k]) <= band;
    if (inside) return lag;
  }
  return std::nullopt;
}

bool saturates(std::span<const double> acf, std::size_t windows) {
  if (acf.size() < 3 || windows == 0) return false;
  const std::size_t last = acf.size() - 1;
  const std::size_t half = last / 2;
  double c_half = 0.0, c_last = 0.0;
  for (std::size_t k = 1; k <= last; ++k) {
    if (k <= half) c_half += acf[k];
    c_last += acf[k];
  }
  // Under white noise a sum of m sample ACF terms has standard deviation
  // about sqrt(m / N).
  const double noise = 1.96 * std::sqrt(static_cast<double>(last - half) / static_cast<double>(windows));
  return std::abs(c_last - c_half) <= 0.25 * std::abs(c_half) + noise;
}

double ArrivalStats::min_off_diagonal() const noexcept {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kFlowTypes; ++i)
    for (std::size_t j = 0; j < kFlowTypes; ++j)
      if (i != j) m = std::min(m, correlation[i][j]);
  return m;
}

double ArrivalStats::max_off_diagonal() const noexcept {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kFlowTypes; ++i)
    for (std::size_t j = 0; j < kFlowTypes; ++j)
      if (i != j) m = std::max(m, correlation[i][j]);
  return m;
}

namespace {

std::size_t window_count(TimeMs duration_ms, double window_s) {
  if (!(window_s > 0.0)) throw std::invalid_argument("window must be positive");
  const double w_ms = window_s * 1000.0;
  return static_cast<std::size_t>(std::floor(static_cast<double>(duration_ms) / w_ms));
}

std::optional<std::size_t> window_of(TimeMs t, double window_s, std::size_t windows) {
  const auto w = static_cast<std::size_t>(std::floor(static_cast<double>(t) / (window_s * 1000.0)));
  if (t < 0 || w >= windows) return std::nullopt;
  return w;
}

}  // namespace

ArrivalStats event_count_correlations(std::span<const FlowEvent> events, TimeMs duration_ms,
                                      double window_s, std::size_t max_lag) {
  ArrivalStats st;
  st.window_s = window_s;
  st.windows = window_count(duration_ms, window_s);
  for (auto& c : st.counts) c.assign(st.windows, 0.0);
  for (const auto& e : events)
    if (auto w = window_of(e.time, window_s, st.windows)) st.counts[flow_type(e.kind, e.side)][*w] += 1.0;

  st.band = st.windows ? 1.96 / std::sqrt(static_cast<double>(st.windows)) : 0.0;
  for (std::size_t i = 0; i < kFlowTypes; ++i) {
    st.correlation[i][i] = 1.0;
    for (std::size_t j = i + 1; j < kFlowTypes; ++j)
      st.correlation[i][j] = st.correlation[j][i] =
          st.windows ? pearson(st.counts[i], st.counts[j]) : 0.0;
    st.acf[i] = autocorrelation(st.counts[i], max_lag);
    st.cumulative_acf[i].resize(st.acf[i].size());
    double acc = 0.0;
    for (std::size_t k = 0; k < st.acf[i].size(); ++k) {
      if (k > 0) acc += st.acf[i][k];
      st.cumulative_acf[i][k] = acc;
    }
  }
  return st;
}

std::optional<double> SignMemory::horizon_minutes(double window_s) const noexcept {
  if (!horizon_lags) return std::nullopt;
  return static_cast<double>(*horizon_lags) * window_s / 60.0;
}

SignStats sign_memory(std::span<const FlowEvent> events, TimeMs duration_ms, double window_s,
                      std::size_t max_lag) {
  SignStats st;
  st.window_s = window_s;
  const std::size_t windows = window_count(duration_ms, window_s);
  std::vector<double> m_sum(windows, 0.0), m_n(windows, 0.0), l_sum(windows, 0.0), l_n(windows, 0.0);
  for (const auto& e : events) {
    const auto w = window_of(e.time, window_s, windows);
    if (!w) continue;
    if (e.kind == FlowKind::Trade) {
      m_sum[*w] += e.side == Side::Ask ? 1.0 : -1.0;
      m_n[*w] += 1.0;
    } else if (e.kind == FlowKind::LimitOrder) {
      l_sum[*w] += e.side == Side::Bid ? 1.0 : -1.0;
      l_n[*w] += 1.0;
    }
  }
  auto finish = [&](std::vector<double>& sum, const std::vector<double>& n, SignMemory& out) {
    for (std::size_t w = 0; w < windows; ++w) sum[w] = n[w] > 0 ? sum[w] / n[w] : 0.0;
    out.acf = autocorrelation(sum, max_lag);
    out.band = windows ? 1.96 / std::sqrt(static_cast<double>(windows)) : 0.0;
    out.horizon_lags = decay_horizon(out.acf, out.band);
  };
  finish(m_sum, m_n, st.market);
  finish(l_sum, l_n, st.limit);
  return st;
}

// ---------------------------------------------------------------------------
// Volumes

namespace {

PowerLawFit fit_tail(std::span<const std::int64_t> sorted, std::int64_t xmin) {
  PowerLawFit fit;
  fit.xmin = xmin;
  const auto first = std::lower_bound(sorted.begin(), sorted.end(), xmin);
  const std::span<const std::int64_t> tail(first, sorted.end());
  fit.n_tail = static_cast<std::int64_t>(tail.size());
  fit.low_sample = fit.n_tail < 50;
  if (tail.empty()) return fit;

  double sum_log = 0.0;
  for (auto v : tail) sum_log += std::log(static_cast<double>(v));
  const double n = static_cast<double>(tail.size());
  auto neg_ll = [&](double a) { return a * sum_log + n * std::log(hurwitz_zeta(a, xmin)); };
  const auto [a, nll] = boost::math::tools::brent_find_minima(neg_ll, 1.0001, 8.0, 40);
  fit.alpha = a;
  fit.log_likelihood = -nll;

  // KS distance between the empirical and fitted CDFs on the tail.
  const DiscretePowerLaw law(a, xmin);
  double cdf = 0.0, ks = 0.0;
  std::size_t i = 0;
  while (i < tail.size()) {
    const std::int64_t v = tail[i];
    std::size_t j = i;
    while (j < tail.size() && tail[j] == v) ++j;
    const double emp = static_cast<double>(j) / n;
    cdf = 1.0 - law.survival(v + 1);
    ks = std::max(ks, std::abs(emp - cdf));
    i = j;
  }
  fit.ks_distance = ks;
  return fit;
}

}  // namespace

PowerLawFit fit_power_law(std::span<const std::int64_t> values, std::int64_t xmin) {
  if (xmin < 1) throw std::invalid_argument("fit_power_law: xmin must be >= 1");
  std::vector<std::int64_t> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return fit_tail(sorted, xmin);
}

PowerLawFit fit_power_law_ks(std::span<const std::int64_t> values, std::int64_t max_xmin) {
  std::vector<std::int64_t> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  PowerLawFit best;
  bool have = false;
  for (std::int64_t xmin = 1; xmin <= max_xmin; ++xmin) {
    const auto fit = fit_tail(sorted, xmin);
    if (fit.n_tail < 50) break;
    if (!have || fit.ks_distance < best.ks_distance) {
      best = fit;
      have = true;
    }
  }
  return have ? best : fit_tail(sorted, 1);
}

GeometricFit fit_geometric(std::span<const std::int64_t> values) {
  GeometricFit fit;
  fit.n = static_cast<std::int64_t>(values.size());
  if (values.empty()) return fit;
  double s = 0.0;
  for (auto v : values) s += static_cast<double>(v);
  fit.mean = s / static_cast<double>(values.size());
  fit.rate = fit.mean > 1.0 ? std::log(fit.mean / (fit.mean - 1.0))
                            : std::numeric_limits<double>::infinity();
  return fit;
}

std::vector<std::int64_t> round_volume_peaks(const Histogram& volumes, std::int64_t max_volume) {
  std::vector<std::int64_t> out;
  auto at = [&](std::int64_t k) {
    const auto it = volumes.counts.find(k);
    return it == volumes.counts.end() ? 0 : it->second;
  };
  for (std::int64_t v = 5; v <= max_volume; v += 5)
    if (at(v) > at(v - 1) && at(v) > at(v + 1)) out.push_back(v);
  return out;
}

VolumeSplit volume_split_fit(std::span<const FlowEvent> events) {
  VolumeSplit out;
  std::vector<std::int64_t> integer, decimal;
  for (const auto& e : events) {
    if (e.kind != FlowKind::LimitOrder || !e.price) continue;
    if (last_digit(*e.price, e.side) == 0) {
      integer.push_back(e.volume);
      out.integer_volumes.add(e.volume);
    } else {
      decimal.push_back(e.volume);
      out.decimal_volumes.add(e.volume);
    }
  }
  out.integer_fit = fit_power_law(integer, 1);
  out.decimal_fit = fit_geometric(decimal);
  out.peaks = round_volume_peaks(out.integer_volumes);
  return out;
}

// ---------------------------------------------------------------------------
// Typology

DigitPair canonical_pair(TickPrice bid, TickPrice ask) noexcept {
  const int b = last_digit(bid, Side::Bid);
  const int a = last_digit(ask, Side::Ask);
  return b <= a ? DigitPair{b, a} : DigitPair{a, b};
}

std::vector<DigitPair> spread_configurations(std::int64_t spread) {
  const int target = static_cast<int>(((10 - spread % 10) % 10 + 10) % 10);
  std::vector<DigitPair> out;
  for (int b = 0; b < 10; ++b) {
    const int a = ((target - b) % 10 + 10) % 10;
    if (b <= a) out.push_back({b, a});
  }
  return out;
}

double SpreadTypology::share(DigitPair p) const noexcept {
  if (samples == 0) return 0.0;
  const auto it = configurations.find(p);
  return it == configurations.end() ? 0.0
                                    : static_cast<double>(it->second) / static_cast<double>(samples);
}

double SpreadTypology::integer_share() const noexcept {
  return samples ? static_cast<double>(integer_samples) / static_cast<double>(samples) : 0.0;
}

namespace {
void classify(SpreadTypology& t, TickPrice bid, TickPrice ask, std::int64_t n) {
  const DigitPair p = canonical_pair(bid, ask);
  t.configurations[p] += n;
  t.samples += n;
  if (p.bid_digit == 0) t.integer_samples += n;  // canonical pair puts a 0 first
}
}  // namespace

SpreadTypology spread_typology(const SnapshotSeries& snapshots, std::int64_t spread, SliceIndex period) {
  if (period < 1) throw std::invalid_argument("spread_typology: period must be >= 1");
  SpreadTypology t;
  t.spread = spread;
  snapshots.for_each_run([&](const DepthSnapshot& s, SliceIndex first, SliceIndex count) {
    if (s.spread() != spread) return;
    if (const SliceIndex n = samples_in(first, count, period)) classify(t, s.bids[0].price, s.asks[0].price, n);
  });
  return t;
}

SpreadTypology spread_typology(std::span<const std::pair<TickPrice, TickPrice>> quotes,
                               std::int64_t spread) {
  SpreadTypology t;
  t.spread = spread;
  for (const auto& [bid, ask] : quotes)
    if (ask - bid == spread) classify(t, bid, ask, 1);
  return t;
}

}  // namespace fxlob::analytics
