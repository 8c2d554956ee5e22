#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "fxlob/errors.hpp"
#include "fxlob/flowgen.hpp"

using namespace fxlob;
using namespace fxlob::flow;

namespace {

SessionConfig default_config() { return load_config(FXLOB_SOURCE_DIR "/configs/eurusd_decimal.json"); }

Order resting(OrderId id, Side side, std::int64_t price, Volume v = 1) {
  return Order{id, side, TickPrice{price}, v, 0, TraderClass::Algo};
}

}  // namespace

TEST_CASE("without excitation arrivals are Poisson") {
  ArrivalModel m;
  m.baseline_rates[type_index(EventKind::LimitOrder, Side::Bid)] = 1.0;
  SignPersistence signs;
  Rng rng(17);
  ArrivalProcess p(m, signs, rng);

  std::vector<double> gaps;
  double last = 0.0;
  const double horizon = 1e4;
  while (auto a = p.next(rng, horizon)) {
    CHECK(a->type == type_index(EventKind::LimitOrder, Side::Bid));
    gaps.push_back(a->time - last);
    last = a->time;
  }
  const double n = static_cast<double>(gaps.size());
  CHECK(std::abs(n - horizon) <= 3.0 * std::sqrt(horizon));

  // Kolmogorov-Smirnov against the unit exponential at the 5% level
  std::sort(gaps.begin(), gaps.end());
  double d = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double f = 1.0 - std::exp(-gaps[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  CHECK(d < 1.358 / std::sqrt(n));
}

TEST_CASE("spectral radius and the stationarity guard") {
  ArrivalModel m;
  for (auto& row : m.excitation) row.fill(0.1);
  m.decay_rate = 2.0;
  // a constant 6x6 matrix c has the single nonzero eigenvalue 6c
  CHECK(m.spectral_radius() == doctest::Approx(0.3));
  CHECK_NOTHROW(m.validate());

  for (auto& row : m.excitation) row.fill(0.4);
  CHECK(m.spectral_radius() == doctest::Approx(1.2));
  CHECK_THROWS_WITH_AS(m.validate(), doctest::Contains("spectral radius"), ConfigError);

  auto cfg = default_config();
  cfg.arrivals.excitation[0][0] = 5.0;
  CHECK_THROWS_AS(generate_session(cfg, 10.0, 1), ConfigError);

  auto j = config_to_json(default_config());
  j["arrivals"]["excitation"][2][2] = 5.0;
  try {
    config_from_json(j);
    FAIL("accepted a non-stationary config");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "arrivals.excitation");
  }
}

TEST_CASE("config errors name the field") {
  auto j = config_to_json(default_config());
  j["agents"]["manual_fraction"] = 1.5;
  try {
    config_from_json(j);
    FAIL("accepted a bad probability");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "agents.manual_fraction");
  }
  auto k = config_to_json(default_config());
  k["agents"]["no_such_knob"] = 1;
  CHECK_THROWS_AS(config_from_json(k), ConfigError);
}

TEST_CASE("config json round trip") {
  const auto cfg = default_config();
  const auto again = config_from_json(config_to_json(cfg));
  CHECK(config_to_json(again) == config_to_json(cfg));
}

TEST_CASE("sessions are a pure function of config and seed") {
  const auto cfg = default_config();
  const auto a = generate_session(cfg, 300.0, 42);
  const auto b = generate_session(cfg, 300.0, 42);
  const auto c = generate_session(cfg, 300.0, 43);
  CHECK(a.events == b.events);
  CHECK(a.trades == b.trades);
  CHECK(a.snapshots.changes().size() == b.snapshots.changes().size());
  CHECK(a.events != c.events);
  for (std::size_t i = 1; i < a.events.size(); ++i) CHECK(a.events[i - 1].time <= a.events[i].time);
  for (const auto& e : a.events) CHECK(e.volume >= 1);
}

TEST_CASE("manual traders price on the pip grid") {
  auto cfg = default_config();
  cfg.agents.manual_fraction = 1.0;
  const auto s = generate_session(cfg, 600.0, 3);
  std::array<int, 10> digits{};
  int n = 0;
  for (const auto& e : s.events)
    if (e.kind == EventKind::LimitOrder) {
      ++digits[static_cast<std::size_t>(last_digit(*e.price, e.side))];
      ++n;
    }
  REQUIRE(n > 1000);
  CHECK(digits[0] + digits[5] == n);
  CHECK(digits[0] > digits[5]);

  cfg.agents.half_pip_mass = 0.0;
  const auto t = generate_session(cfg, 300.0, 3);
  for (const auto& e : t.events)
    if (e.kind == EventKind::LimitOrder) CHECK(last_digit(*e.price, e.side) == 0);
}

TEST_CASE("algo traders step ahead of a round best quote") {
  auto cfg = default_config();
  cfg.agents.algo_step_ahead_prob = 1.0;
  const Agents agents(cfg);
  Book book;
  book.submit_limit(resting(1, Side::Bid, 135000));
  book.submit_limit(resting(2, Side::Ask, 135009));
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    bool stepped = false;
    const auto p = agents.algo_price(Side::Bid, book, rng, stepped);
    CHECK(stepped);
    CHECK(p == TickPrice{135001});
    CHECK(last_digit(p, Side::Bid) == 1);
    const auto q = agents.algo_price(Side::Ask, book, rng, stepped);
    // best ask 135009 has digit 1, not round: no step-ahead there
    CHECK_FALSE(stepped);
    CHECK(q >= TickPrice{135009});
  }

  // a one-tick spread leaves no room to step ahead
  Book tight;
  tight.submit_limit(resting(1, Side::Bid, 135000));
  tight.submit_limit(resting(2, Side::Ask, 135001));
  bool stepped = true;
  CHECK(agents.algo_price(Side::Bid, tight, rng, stepped) == TickPrice{135000});
  CHECK_FALSE(stepped);
}

TEST_CASE("manual prices stay strictly behind the opposite best") {
  auto cfg = default_config();
  const Agents agents(cfg);
  Book book;
  book.submit_limit(resting(1, Side::Bid, 134990));
  book.submit_limit(resting(2, Side::Ask, 135003));
  Rng rng(9);
  for (int i = 0; i < 500; ++i) {
    const auto b = agents.manual_price(Side::Bid, book, rng);
    CHECK(b < TickPrice{135003});
    CHECK(b.ticks % 5 == 0);
    const auto a = agents.manual_price(Side::Ask, book, rng);
    CHECK(a > TickPrice{134990});
    CHECK(a.ticks % 5 == 0);
  }
}

TEST_CASE("manual volumes peak at round sizes") {
  const auto cfg = default_config();
  const Agents agents(cfg);
  Rng rng(23);
  std::map<Volume, std::int64_t> h;
  for (int i = 0; i < 1'000'000; ++i) ++h[agents.draw_volume(TraderClass::Manual, rng)];
  for (Volume v : {5, 10, 15, 20}) CHECK(2 * h[v] > h[v - 1] + h[v + 1]);
  // algo volumes are geometric with most of the mass at one million
  std::int64_t ones = 0;
  for (int i = 0; i < 100'000; ++i) ones += agents.draw_volume(TraderClass::Algo, rng) == 1;
  CHECK(static_cast<double>(ones) / 1e5 == doctest::Approx(cfg.volumes.algo_unit_share).epsilon(0.02));
}

TEST_CASE("cancels without a target become limit orders") {
  const auto cfg = default_config();
  const Agents agents(cfg);
  Book book;
  Rng rng(1);
  const auto d = agents.draw_order(EventKind::Cancel, Side::Bid, book, 0, 1, rng);
  CHECK(d.resampled);
  CHECK(d.event.kind == EventKind::LimitOrder);
  REQUIRE(d.order);
}

TEST_CASE("default day matches the event-rate magnitudes") {
  const auto cfg = default_config();
  const auto s = generate_session(cfg, cfg.duration_s, cfg.seed);
  const auto limits = s.counts.by_type[0] + s.counts.by_type[1];
  CHECK(limits >= 176'000);
  CHECK(limits <= 264'000);
  // the book never rests crossed or locked
  for (const auto& snap : s.snapshots.changes())
    if (!snap.bids.empty() && !snap.asks.empty()) CHECK(snap.bids[0].price < snap.asks[0].price);
}
