#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fxlob/analytics.hpp"
#include "fxlob/flowgen.hpp"
#include "fxlob/instrument.hpp"
#include "fxlob/rng.hpp"

using namespace fxlob;
using namespace fxlob::analytics;

namespace {

DepthSnapshot quote(SliceIndex slice, std::int64_t bid, std::int64_t ask) {
  DepthSnapshot s;
  s.slice = slice;
  s.bids.push_back({TickPrice{bid}, 1});
  s.asks.push_back({TickPrice{ask}, 1});
  return s;
}

// Zeta-distributed draws by Devroye's rejection method, kept apart from the
// library's inverse-CDF sampler so the fit is checked against a second law.
std::int64_t zipf_rejection(double alpha, Rng& rng) {
  const double b = std::pow(2.0, alpha - 1.0);
  for (;;) {
    const double u = rng.uniform_pos();
    const double v = rng.uniform();
    const double x = std::floor(std::pow(u, -1.0 / (alpha - 1.0)));
    if (x > 1e15) continue;
    const double t = std::pow(1.0 + 1.0 / x, alpha - 1.0);
    if (v * x * (t - 1.0) / (b - 1.0) <= t / b) return static_cast<std::int64_t>(x);
  }
}

std::vector<std::int64_t> zipf_sample(double alpha, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::int64_t> out(n);
  for (auto& v : out) v = zipf_rejection(alpha, rng);
  return out;
}

double naive_acf(const std::vector<double>& x, std::size_t k) {
  const double n = static_cast<double>(x.size());
  double m = 0.0;
  for (double v : x) m += v;
  m /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    den += (x[t] - m) * (x[t] - m);
    if (t + k < x.size()) num += (x[t] - m) * (x[t + k] - m);
  }
  return num / den;
}

}  // namespace

TEST_CASE("digit frequencies and half-widths") {
  std::vector<PricedSide> integers(100, PricedSide{TickPrice{135000}, Side::Bid});
  auto d = digit_distribution(integers);
  CHECK(d.frequency(0) == 1.0);
  CHECK(d.half_width(0) == 0.0);
  CHECK(d.mode() == 0);

  // ask digits count towards the next integer price above
  std::vector<PricedSide> asks{{TickPrice{135001}, Side::Ask}, {TickPrice{135009}, Side::Ask}};
  auto a = digit_distribution(asks);
  CHECK(a.counts[9] == 1);
  CHECK(a.counts[1] == 1);

  std::vector<std::int64_t> half{187'500, 187'500, 0, 0, 0, 0, 0, 0, 0, 0};
  auto h = digit_distribution(half);
  CHECK(h.n == 375'000);
  CHECK(h.half_width(0) == doctest::Approx(0.0016).epsilon(0.02));

  std::vector<std::int64_t> ranked{5, 9, 1, 9, 0, 0, 0, 0, 0, 0};
  const auto r = digit_distribution(ranked).ranking();
  CHECK(r[0] == 1);
  CHECK(r[1] == 3);
  CHECK(r[2] == 0);
  CHECK(r[3] == 2);
}

TEST_CASE("half-widths shrink as one over root n") {
  Rng rng(77);
  auto draw = [&](std::int64_t n) {
    std::vector<PricedSide> v;
    for (std::int64_t i = 0; i < n; ++i) {
      const auto digit = rng.bernoulli(0.3) ? 0 : static_cast<std::int64_t>(rng.below(10));
      v.push_back({TickPrice{135000 + digit}, Side::Bid});
    }
    return digit_distribution(v);
  };
  const auto small = draw(50'000);
  const auto big = draw(100'000);
  CHECK(small.half_width(0) / big.half_width(0) == doctest::Approx(std::sqrt(2.0)).epsilon(0.1));
}

TEST_CASE("chi-square uniformity") {
  std::array<std::int64_t, 10> equal;
  equal.fill(1000);
  auto r = chi2_uniformity(equal);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == doctest::Approx(1.0));
  CHECK_FALSE(r.reject);
  CHECK(r.dof == 9);

  // published table value for 9 degrees of freedom at 1%
  CHECK(chi2_critical_value(0.01, 9) == doctest::Approx(21.666).epsilon(1e-4));

  std::array<std::int64_t, 10> skew{150, 90, 95, 100, 105, 98, 92, 101, 99, 70};
  auto s = chi2_uniformity(skew);
  double oracle = 0.0;
  for (auto c : skew) oracle += (c - 100.0) * (c - 100.0) / 100.0;
  CHECK(s.statistic == doctest::Approx(oracle));
  CHECK(s.reject == (oracle > chi2_critical_value(0.01, 9)));

  auto shuffled = skew;
  std::reverse(shuffled.begin(), shuffled.end());
  std::rotate(shuffled.begin(), shuffled.begin() + 3, shuffled.end());
  CHECK(chi2_uniformity(shuffled).statistic == doctest::Approx(s.statistic));
  CHECK(chi2_uniformity(shuffled).p_value == doctest::Approx(s.p_value));

  std::array<std::int64_t, 10> few{};
  few[0] = 50;
  CHECK(chi2_uniformity(few).low_sample);
}

TEST_CASE("chi-square rejects uniform counts at the nominal rate") {
  Rng rng(2024);
  int rejected = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    std::array<std::int64_t, 10> c{};
    for (int i = 0; i < 2000; ++i) ++c[rng.below(10)];
    rejected += chi2_uniformity(c).reject;
  }
  const double rate = static_cast<double>(rejected) / trials;
  CHECK(rate >= 0.0);
  CHECK(rate <= 0.02);
}

TEST_CASE("power-law MLE recovers the exponent") {
  for (double alpha : {2.4, 2.6, 2.8}) {
    CAPTURE(alpha);
    const auto v = zipf_sample(alpha, 100'000, static_cast<std::uint64_t>(alpha * 100));
    const auto fit = fit_power_law(v, 1);
    CHECK(std::abs(fit.alpha - alpha) <= 0.1);
    CHECK_FALSE(fit.low_sample);
    CHECK(fit.n_tail == 100'000);
  }

  // the estimate tightens with the sample size
  std::vector<double> medians;
  for (std::size_t n : {1'000u, 10'000u, 100'000u}) {
    std::vector<double> err;
    for (std::uint64_t rep = 0; rep < 15; ++rep) err.push_back(std::abs(fit_power_law(zipf_sample(2.6, n, 1000 + rep + n), 1).alpha - 2.6));
    std::nth_element(err.begin(), err.begin() + 7, err.end());
    medians.push_back(err[7]);
  }
  CHECK(medians[0] > medians[1]);
  CHECK(medians[1] > medians[2]);

  // the KS choice keeps xmin = 1 on a pure law and flags short tails
  const auto ks = fit_power_law_ks(zipf_sample(2.6, 20'000, 5), 10);
  CHECK(std::abs(ks.alpha - 2.6) <= 0.15);
  std::vector<std::int64_t> few(30, 2);
  CHECK(fit_power_law(few, 1).low_sample);
}

TEST_CASE("library sampler agrees with the fit") {
  const DiscretePowerLaw law(2.6);
  Rng rng(8);
  std::vector<std::int64_t> v(100'000);
  for (auto& x : v) x = law.sample(rng);
  CHECK(std::abs(fit_power_law(v, 1).alpha - 2.6) <= 0.1);
}

TEST_CASE("geometric rate") {
  const Geometric1 g(1.0 / 1.25);
  Rng rng(4);
  std::vector<std::int64_t> v(100'000);
  for (auto& x : v) x = g.sample(rng);
  const auto fit = fit_geometric(v);
  CHECK(fit.mean == doctest::Approx(1.25).epsilon(0.01));
  CHECK(fit.rate == doctest::Approx(std::log(5.0)).epsilon(0.05));
  std::vector<std::int64_t> ones(10, 1);
  CHECK(std::isinf(fit_geometric(ones).rate));
}

TEST_CASE("round volume peaks") {
  Histogram h;
  for (std::int64_t v = 1; v <= 30; ++v) h.add(v, 100 / v + (v % 5 == 0 ? 20 : 0));
  const auto peaks = round_volume_peaks(h, 30);
  CHECK(peaks == std::vector<std::int64_t>{5, 10, 15, 20, 25, 30});
}

TEST_CASE("shape, gap and spread on hand-made books") {
  SnapshotSeries s(10);
  DepthSnapshot a;
  a.slice = 0;
  a.bids.push_back({TickPrice{123450}, 3});
  a.bids.push_back({TickPrice{123447}, 5});
  a.asks.push_back({TickPrice{123460}, 2});
  a.asks.push_back({TickPrice{123462}, 4});
  s.record(a);
  DepthSnapshot b = a;
  b.slice = 5;
  b.bids = SideDepth{};
  b.bids.push_back({TickPrice{123451}, 1});
  s.record(b);

  const auto ask_shape = average_shape(s, Side::Ask, 3);
  CHECK(ask_shape == std::vector<double>{2.0, 0.0, 4.0, 0.0});
  const auto bid_shape = average_shape(s, Side::Bid, 4);
  // five slices with 3 at the best and 5 three ticks behind, five with 1
  CHECK(bid_shape[0] == doctest::Approx(2.0));
  CHECK(bid_shape[3] == doctest::Approx(2.5));

  const auto gap = average_gap(s, Side::Ask);
  CHECK(gap.mean[0] == 2.0);
  CHECK(gap.samples[0] == 10);
  CHECK(average_gap(s, Side::Bid).samples[0] == 5);

  SnapshotSeries nine(100);
  nine.record(quote(0, 135000, 135009));
  const auto spread = spread_distribution(nine, 10);
  CHECK(spread.total == 10);
  CHECK(spread.share(9) == 1.0);

  // sampling at the end of every period
  SnapshotSeries two(20);
  two.record(quote(0, 100, 101));
  two.record(quote(9, 100, 102));
  const auto sp = spread_distribution(two, 10);
  CHECK(sp.counts.at(2) == 2);
  CHECK_FALSE(sp.counts.contains(1));
}

TEST_CASE("histogram modes") {
  Histogram h;
  for (auto [k, n] : std::vector<std::pair<int, int>>{{8, 5}, {9, 30}, {10, 20}, {12, 6}, {13, 9}, {14, 4}}) h.add(k, n);
  CHECK(h.argmax(1, 20) == 9);
  CHECK(h.local_modes(1, 20) == std::vector<std::int64_t>{9, 13});
  CHECK(h.share(10) == doctest::Approx(20.0 / 74.0));
  CHECK_FALSE(h.argmax(30, 40));
}

TEST_CASE("placement offsets") {
  SnapshotSeries s(10);
  s.record(quote(0, 135000, 135009));
  std::vector<FlowEvent> ev{
      {150, FlowKind::LimitOrder, Side::Bid, TickPrice{135000}, 1},
      {150, FlowKind::LimitOrder, Side::Bid, TickPrice{135001}, 1},
      {150, FlowKind::LimitOrder, Side::Bid, TickPrice{134990}, 1},
      {150, FlowKind::LimitOrder, Side::Ask, TickPrice{135015}, 1},
      {150, FlowKind::Cancel, Side::Ask, TickPrice{135009}, 1},
      {50, FlowKind::LimitOrder, Side::Ask, TickPrice{135015}, 1},
  };
  const auto p = placement_distribution(ev, s);
  CHECK(p.delta.counts.at(0) == 1);
  CHECK(p.delta.counts.at(-1) == 1);
  CHECK(p.delta.counts.at(10) == 1);
  CHECK(p.delta.counts.at(6) == 1);
  CHECK(p.delta.total == 4);
  CHECK(p.skipped == 1);

  const auto c = placement_conditional(ev, s);
  CHECK(c.by_digit[0].total == 3);
  CHECK(c.by_digit[1].counts.at(6) == 1);
}

TEST_CASE("occupancy of a pinned best quote") {
  SnapshotSeries s(1000);
  s.record(quote(0, 135000, 135013));
  const auto occ = barrier_occupancy(s, 1);
  CHECK(occ.bid.frequency(0) == 1.0);
  CHECK(occ.bid.n == 1000);
  CHECK(occ.ask.frequency(7) == 1.0);
  CHECK(barrier_occupancy(s, 10).bid.n == 100);
}

TEST_CASE("autocorrelation and pearson against direct sums") {
  Rng rng(31);
  std::vector<double> x(500), y(500);
  double ar = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ar = 0.7 * ar + rng.uniform() - 0.5;
    x[i] = ar;
    y[i] = 0.5 * ar + rng.uniform();
  }
  const auto acf = autocorrelation(x, 20);
  CHECK(acf[0] == doctest::Approx(1.0));
  for (std::size_t k = 0; k <= 20; ++k) CHECK(acf[k] == doctest::Approx(naive_acf(x, k)));
  CHECK(acf[1] == doctest::Approx(0.7).epsilon(0.15));

  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= 500.0, my /= 500.0;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  CHECK(pearson(x, y) == doctest::Approx(sxy / std::sqrt(sxx * syy)));
  CHECK(pearson(x, x) == doctest::Approx(1.0));
}

TEST_CASE("decay horizon") {
  std::vector<double> acf{1.0, 0.5, 0.3, 0.05, 0.02, 0.2, 0.01, 0.0, 0.01, 0.0, 0.0, 0.0, 0.0};
  // lags 3 to 5 all reach the spike at lag 5
  CHECK(decay_horizon(acf, 0.1) == 6u);
  CHECK_FALSE(decay_horizon(std::vector<double>{1.0, 0.9, 0.9, 0.9, 0.9}, 0.1));

  // i.i.d. signs stay inside the band
  Rng rng(12);
  std::vector<FlowEvent> ev;
  for (TimeMs t = 0; t < 3'600'000; t += 250) {
    ev.push_back({t, FlowKind::Trade, rng.bernoulli(0.5) ? Side::Ask : Side::Bid, TickPrice{100}, 1});
    ev.push_back({t, FlowKind::LimitOrder, rng.bernoulli(0.5) ? Side::Ask : Side::Bid, TickPrice{100}, 1});
  }
  const auto sm = sign_memory(ev, 3'600'000, 10.0, 60);
  CHECK(sm.market.band == doctest::Approx(1.96 / std::sqrt(360.0)));
  int outside = 0;
  for (std::size_t k = 1; k < sm.market.acf.size(); ++k) outside += std::abs(sm.market.acf[k]) > sm.market.band;
  CHECK(outside <= 8);  // about 5% of 60 lags
  CHECK(sm.market.horizon_lags.value_or(99) <= 3);
  CHECK(sm.limit.horizon_lags.value_or(99) <= 3);
}

TEST_CASE("cumulative ACF saturation") {
  std::vector<double> fading(61, 0.0);
  for (std::size_t k = 0; k < fading.size(); ++k) fading[k] = std::pow(0.8, static_cast<double>(k));
  CHECK(saturates(fading, 2000));
  std::vector<double> flat(61, 0.3);
  flat[0] = 1.0;
  CHECK_FALSE(saturates(flat, 2000));
}

TEST_CASE("count correlations form a symmetric matrix with unit diagonal") {
  const auto cfg = flow::load_config(FXLOB_SOURCE_DIR "/configs/eurusd_poisson.json");
  const auto s = flow::generate_session(cfg, 3600.0, 7);
  const auto st = event_count_correlations(truth_flow(s), s.total_slices * kSliceMs);
  CHECK(st.windows == 360);
  for (std::size_t i = 0; i < kFlowTypes; ++i) {
    CHECK(st.correlation[i][i] == 1.0);
    for (std::size_t j = 0; j < kFlowTypes; ++j) CHECK(st.correlation[i][j] == st.correlation[j][i]);
    CHECK(st.cumulative_acf[i][1] == doctest::Approx(st.acf[i][1]));
  }
  CHECK(st.max_off_diagonal() >= st.min_off_diagonal());
}

TEST_CASE("spread typology") {
  const auto nine = spread_configurations(9);
  CHECK(nine.size() == 5);
  CHECK(nine.front() == DigitPair{0, 1});
  const auto eight = spread_configurations(8);
  CHECK(eight.size() == 6);
  CHECK(std::find(eight.begin(), eight.end(), DigitPair{1, 1}) != eight.end());

  // mirrored configurations merge
  CHECK(canonical_pair(TickPrice{135000}, TickPrice{135009}) == DigitPair{0, 1});
  CHECK(canonical_pair(TickPrice{135001}, TickPrice{135010}) == DigitPair{0, 1});

  // uniformly placed quotes: every configuration at spread 9 is equally likely
  Rng rng(3);
  std::vector<std::pair<TickPrice, TickPrice>> quotes;
  for (int i = 0; i < 100'000; ++i) {
    const TickPrice b{135000 + static_cast<std::int64_t>(rng.below(1000))};
    quotes.emplace_back(b, b + 9);
  }
  const auto t = spread_typology(quotes, 9);
  CHECK(t.samples == 100'000);
  for (const auto& p : nine) CHECK(t.share(p) == doctest::Approx(0.2).epsilon(0.05));
  CHECK(t.integer_share() == doctest::Approx(t.share(DigitPair{0, 1})));

  // at spread 8 the self-mirrored pairs (1,1) and (6,6) have one orientation only
  std::vector<std::pair<TickPrice, TickPrice>> even;
  for (const auto& [b, a] : quotes) even.emplace_back(b, b + 8);
  const auto e = spread_typology(even, 8);
  CHECK(e.share(DigitPair{1, 1}) == doctest::Approx(0.1).epsilon(0.05));
  CHECK(e.share(DigitPair{0, 2}) == doctest::Approx(0.2).epsilon(0.05));

  SnapshotSeries s(50);
  s.record(quote(0, 135000, 135009));
  s.record(quote(20, 135003, 135011));
  const auto fromSnaps = spread_typology(s, 9, 1);
  CHECK(fromSnaps.samples == 20);
  CHECK(fromSnaps.integer_share() == 1.0);
}

TEST_CASE("conditional placement peaks land on round prices") {
  const auto cfg = flow::load_config(FXLOB_SOURCE_DIR "/configs/eurusd_decimal.json");
  for (std::uint64_t seed : {11u, 12u}) {
    CAPTURE(seed);
    const auto s = flow::generate_session(cfg, 1800.0, seed);
    const auto c = placement_conditional(truth_flow(s), s.snapshots);
    CHECK(c.peak(0) == 10);
    // best + delta (or best - delta on the bid) ends on digit 0
    for (int d = 1; d < 10; ++d) {
      CAPTURE(d);
      if (c.by_digit[static_cast<std::size_t>(d)].total < 300) continue;
      REQUIRE(c.peak(d));
      CHECK(*c.peak(d) % 10 == d);
    }
  }

  Histogram h;
  for (auto [k, n] : std::vector<std::pair<int, int>>{{0, 60}, {1, 50}, {2, 40}, {3, 30}, {4, 35}, {5, 10}}) h.add(k, n);
  ConditionalPlacement one;
  one.by_digit[4] = h;
  CHECK(one.peak(4) == 4);
}
