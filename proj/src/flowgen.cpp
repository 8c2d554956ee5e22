#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "fxlob/flowgen.hpp"

namespace fxlob::flow {

namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

constexpr std::int64_t direction(Side s) noexcept { return s == Side::Bid ? 1 : -1; }

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

std::uint64_t mix_seed(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

// ---------------------------------------------------------------------------
// Arrivals

const TypeArray& ArrivalProcess::unit_gain() noexcept {
  static const TypeArray ones = {1, 1, 1, 1, 1, 1};
  return ones;
}

ArrivalProcess::ArrivalProcess(const ArrivalModel& model, const SignPersistence& signs, Rng& rng)
    : model_(model) {
  bias_ = {signs.limit_bias, signs.cancel_bias, signs.market_bias};
  epoch_ = {signs.limit_order_timescale_s, signs.limit_order_timescale_s, signs.market_order_timescale_s};
  switch_prob_ = signs.switch_prob;
  for (std::size_t k = 0; k < 3; ++k) {
    state_[k] = rng.bernoulli(0.5) ? 1 : -1;
    next_flip_[k] = bias_[k] > 0.0 ? epoch_[k] * rng.uniform_pos() : kNever;
  }
}

double ArrivalProcess::intensity(std::size_t type, const TypeArray& gain) const noexcept {
  const auto k = static_cast<std::size_t>(kind_of(type));
  const double tilt = 1.0 + bias_[k] * state_[k] * sign_of(kind_of(type), side_of(type));
  return gain[type] * tilt * (model_.baseline_rates[type] + excitation_state_[type]);
}

void ArrivalProcess::decay_to(double t) noexcept {
  if (t > t_) {
    const double f = std::exp(-model_.decay_rate * (t - t_));
    for (auto& e : excitation_state_) e *= f;
    t_ = t;
  }
}

std::optional<ArrivalProcess::Arrival> ArrivalProcess::next(Rng& rng, double horizon,
                                                            const TypeArray& gain) {
  while (true) {
    std::size_t flip_k = 0;
    for (std::size_t k = 1; k < 3; ++k)
      if (next_flip_[k] < next_flip_[flip_k]) flip_k = k;
    const double stop = std::min(horizon, next_flip_[flip_k]);

    // Intensities only decay until the next event or switching epoch, so the
    // current total bounds them.
    double bound = 0.0;
    for (std::size_t i = 0; i < kEventTypes; ++i) bound += intensity(i, gain);
    const double candidate = bound > 0.0 ? t_ + rng.exponential(bound) : kNever;

    if (candidate >= stop) {
      decay_to(stop);
      if (horizon <= next_flip_[flip_k]) return std::nullopt;
      if (rng.bernoulli(switch_prob_)) state_[flip_k] = -state_[flip_k];
      next_flip_[flip_k] += epoch_[flip_k];
      continue;
    }

    decay_to(candidate);
    TypeArray lambda;
    double total = 0.0;
    for (std::size_t i = 0; i < kEventTypes; ++i) {
      lambda[i] = intensity(i, gain);
      total += lambda[i];
    }
    const double u = rng.uniform() * bound;
    if (u >= total) continue;  // thinned

    std::size_t type = 0;
    double acc = lambda[0];
    while (acc <= u && type + 1 < kEventTypes) acc += lambda[++type];
    for (std::size_t i = 0; i < kEventTypes; ++i) excitation_state_[i] += model_.excitation[i][type];
    return Arrival{candidate, type};
  }
}

// ---------------------------------------------------------------------------
// Agents

Agents::Agents(const SessionConfig& cfg)
    : instrument_(cfg.instrument),
      mix_(cfg.agents),
      volumes_(cfg.volumes),
      seed_price_(cfg.seed_price_ticks),
      manual_law_(cfg.volumes.manual_alpha, 1, cfg.volumes.max_volume),
      algo_law_(cfg.volumes.algo_unit_share) {
  double acc = 0.0, w = 1.0;
  for (std::size_t k = 0; k < volumes_.round_values.size(); ++k) {
    acc += w;
    round_cdf_.push_back(acc);
    w *= volumes_.round_weight_decay;
  }
  for (auto& c : round_cdf_) c /= acc;
}

bool Agents::round_price(TickPrice p) const noexcept {
  if (!instrument_.decimal()) return true;
  return p.ticks % (instrument_.pip_in_ticks / 2) == 0;
}

TickPrice Agents::own_reference(Side side, const Book& book) const {
  if (auto own = book.best(side)) return *own;
  const std::int64_t pip = instrument_.pip_in_ticks;
  if (auto opp = book.best(opposite(side))) return *opp - direction(side) * pip;
  return TickPrice{seed_price_} - direction(side) * std::max<std::int64_t>(1, pip / 2);
}

TickPrice Agents::opposite_reference(Side side, const Book& book) const {
  if (auto opp = book.best(opposite(side))) return *opp;
  const std::int64_t pip = instrument_.pip_in_ticks;
  if (auto own = book.best(side)) return *own + direction(side) * pip;
  return TickPrice{seed_price_} + direction(side) * std::max<std::int64_t>(1, pip / 2);
}

TraderClass Agents::draw_class(Rng& rng) const {
  return rng.bernoulli(mix_.manual_fraction) ? TraderClass::Manual : TraderClass::Algo;
}

Volume Agents::draw_volume(TraderClass cls, Rng& rng) const {
  if (cls == TraderClass::Algo) return std::min<Volume>(algo_law_.sample(rng), volumes_.max_volume);
  if (!round_cdf_.empty() && rng.bernoulli(volumes_.round_mass)) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(round_cdf_.begin(), round_cdf_.end(), u);
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - round_cdf_.begin()),
                                         round_cdf_.size() - 1);
    return volumes_.round_values[k];
  }
  return manual_law_.sample(rng);
}

// Manual traders quote on the pip grid: the grid price nearest the opposite
// best without reaching it, possibly some pips further away, and optionally
// half a pip behind that.
TickPrice Agents::manual_price(Side side, const Book& book, Rng& rng) const {
  const std::int64_t pip = instrument_.pip_in_ticks;
  const TickPrice opp = opposite_reference(side, book);
  const std::int64_t grid =
      side == Side::Bid ? floor_div(opp.ticks - 1, pip) * pip : ceil_div(opp.ticks + 1, pip) * pip;
  const std::int64_t steps = rng.geometric_failures(1.0 - mix_.manual_depth_continue);
  std::int64_t price = grid - direction(side) * steps * pip;
  if (instrument_.decimal() && mix_.half_pip_mass > 0.0 && rng.bernoulli(mix_.half_pip_mass))
    price -= direction(side) * (pip / 2);
  return TickPrice{std::max<std::int64_t>(1, price)};
}

TickPrice Agents::algo_price(Side side, const Book& book, Rng& rng, bool& stepped) const {
  stepped = false;
  const TickPrice best = own_reference(side, book);
  const TickPrice opp = opposite_reference(side, book);
  const std::int64_t dir = direction(side);
  const std::int64_t room = (opp - best) * dir;  // spread seen from this side

  if (round_price(best) && rng.bernoulli(mix_.algo_step_ahead_prob)) {
    if (room > 1) {
      stepped = true;
      return best + dir;
    }
    return best;
  }
  const double u = rng.uniform();
  if (u < mix_.algo_join_prob) return best;
  if (u < mix_.algo_join_prob + mix_.algo_inside_prob) {
    if (room <= 1) return best;
    return best + dir * rng.between(1, room - 1);
  }
  const std::int64_t depth = 1 + rng.geometric_failures(1.0 / mix_.algo_depth_mean);
  return TickPrice{std::max<std::int64_t>(1, (best - dir * depth).ticks)};
}

OrderDraw Agents::draw_order(EventKind kind, Side side, const Book& book, TimeMs now, OrderId id,
                             Rng& rng) const {
  OrderDraw draw;
  const TraderClass cls = draw_class(rng);
  draw.event.time = now;
  draw.event.kind = kind;
  draw.event.side = side;
  draw.event.trader_class = cls;

  if (kind == EventKind::Cancel) {
    const auto ids = book.resting_ids(side, cls);
    if (!ids.empty()) {
      const OrderId target = ids[rng.below(ids.size())];
      const Order* order = book.find(target);
      draw.cancel_target = target;
      draw.event.price = order->price;
      draw.event.volume = order->volume;
      return draw;
    }
    draw.resampled = true;
    draw.event.kind = kind = EventKind::LimitOrder;
  }

  if (kind == EventKind::MarketOrder) {
    draw.event.volume = draw_volume(cls, rng);
    return draw;
  }

  const TickPrice price = cls == TraderClass::Manual ? manual_price(side, book, rng)
                                                     : algo_price(side, book, rng, draw.step_ahead);
  const Volume volume = draw_volume(cls, rng);
  draw.event.price = price;
  draw.event.volume = volume;
  draw.order = Order{id, side, price, volume, now, cls};
  return draw;
}

// ---------------------------------------------------------------------------
// Sessions

Session generate_session(const SessionConfig& cfg) {
  return generate_session(cfg, cfg.duration_s, cfg.seed);
}

Session generate_session(const SessionConfig& cfg, double duration_s, std::uint64_t seed) {
  cfg.validate();
  SessionConfig local = cfg;
  local.duration_s = duration_s;
  local.validate();

  Session session;
  session.instrument = cfg.instrument;
  const TimeMs duration_ms = static_cast<TimeMs>(std::llround(duration_s * 1000.0));
  session.total_slices = (duration_ms + kSliceMs - 1) / kSliceMs;
  session.snapshots.set_total_slices(session.total_slices);

  Book book(cfg.instrument.min_quote_life_ms);
  book.set_effect_logging(true);
  Rng arrival_rng(mix_seed(seed));
  Rng agent_rng(mix_seed(seed ^ 0xA5A5A5A5DEADBEEFULL));
  ArrivalProcess arrivals(cfg.arrivals, cfg.signs, arrival_rng);
  const Agents agents(cfg);

  struct FlashRequest {
    TimeMs time;
    OrderId id;
    bool operator>(const FlashRequest& o) const noexcept {
      return time != o.time ? time > o.time : id > o.id;
    }
  };
  std::priority_queue<FlashRequest, std::vector<FlashRequest>, std::greater<>> flash;

  OrderId next_id = 1;
  SliceIndex slice = 0;
  bool dirty = false;
  TimeMs last_ms = 0;
  auto& counts = session.counts;

  auto drain_effects = [&] {
    auto fx = book.take_effects();
    if (!fx.empty()) dirty = true;
    session.effects.insert(session.effects.end(), fx.begin(), fx.end());
  };

  auto request_cancel = [&](OrderId id, TimeMs now) {
    const auto r = book.cancel(id, now);
    if (r.status == BookStatus::Ok && r.state == Book::CancelState::Deferred) ++counts.deferred_cancels;
  };

  TypeArray gain = ArrivalProcess::unit_gain();
  const double ref_orders = cfg.arrivals.cancel_reference_orders;

  while (true) {
    const TimeMs slice_end = (slice + 1) * kSliceMs;
    TimeMs control = std::min(slice_end, duration_ms);
    if (auto d = book.next_deferred_time()) control = std::min(control, *d);
    if (!flash.empty()) control = std::min(control, flash.top().time);

    if (ref_orders > 0.0) {
      gain[type_index(EventKind::Cancel, Side::Bid)] =
          static_cast<double>(book.order_count(Side::Bid)) / ref_orders;
      gain[type_index(EventKind::Cancel, Side::Ask)] =
          static_cast<double>(book.order_count(Side::Ask)) / ref_orders;
    }

    if (auto a = arrivals.next(arrival_rng, static_cast<double>(control) / 1000.0, gain)) {
      TimeMs now = static_cast<TimeMs>(std::floor(a->time * 1000.0));
      now = std::clamp(now, last_ms, control - 1);
      last_ms = now;
      const EventKind kind = kind_of(a->type);
      const Side side = side_of(a->type);

      const OrderDraw draw = agents.draw_order(kind, side, book, now, next_id, agent_rng);
      session.events.push_back(draw.event);
      ++counts.by_type[type_index(draw.event.kind, side)];
      if (draw.resampled) ++counts.resampled_cancels;

      switch (draw.event.kind) {
        case EventKind::LimitOrder: {
          ++next_id;
          const auto r = book.submit_limit(*draw.order);
          counts.trades += static_cast<std::int64_t>(r.fills.size());
          session.trades.insert(session.trades.end(), r.fills.begin(), r.fills.end());
          (draw.order->trader_class == TraderClass::Manual ? counts.manual_limit_volume
                                                           : counts.algo_limit_volume) +=
              draw.order->volume;
          if (draw.step_ahead) {
            ++counts.step_ahead_orders;
            if (agent_rng.bernoulli(cfg.agents.flash_prob)) {
              const TimeMs delay = agent_rng.between(0, cfg.agents.flash_max_delay_ms);
              flash.push({now + delay, draw.order->id});
            }
          }
          break;
        }
        case EventKind::Cancel:
          request_cancel(*draw.cancel_target, now);
          break;
        case EventKind::MarketOrder: {
          const auto r = book.submit_market(next_id++, opposite(side), draw.event.volume, now);
          if (r.liquidity_exhausted) ++counts.exhausted_markets;
          counts.trades += static_cast<std::int64_t>(r.fills.size());
          session.trades.insert(session.trades.end(), r.fills.begin(), r.fills.end());
          break;
        }
      }
      drain_effects();
      continue;
    }

    // Control point reached: close the slice first, since anything applied at
    // slice_end belongs to the next slice.
    const TimeMs now = control;
    if (now == slice_end || now == duration_ms) {
      if (dirty) {
        session.snapshots.record(book.snapshot(slice));
        dirty = false;
      }
      if (now >= duration_ms) break;
      if (now == slice_end) ++slice;
    }
    while (!flash.empty() && flash.top().time <= now) {
      const FlashRequest req = flash.top();
      flash.pop();
      if (const Order* o = book.find(req.id)) {
        session.events.push_back(
            {now, EventKind::Cancel, o->side, o->price, o->volume, o->trader_class});
        ++counts.by_type[type_index(EventKind::Cancel, o->side)];
        ++counts.flash_cancels;
        request_cancel(req.id, now);
      }
    }
    book.advance_to(now);
    drain_effects();
    last_ms = std::max(last_ms, now);
  }
  return session;
}

// ---------------------------------------------------------------------------
// Quiet sessions

Session generate_quiet_session(const QuietConfig& cfg) {
  Session session;
  session.instrument = InstrumentSpec{};
  session.instrument.min_quote_life_ms = 0;
  session.total_slices = cfg.slices;
  session.snapshots.set_total_slices(cfg.slices);

  Book book(0);
  book.set_effect_logging(true);
  Rng rng(mix_seed(cfg.seed));
  OrderId next_id = 1;

  auto pick_price = [&](Side side) -> TickPrice {
    const auto own = book.best(side);
    const auto opp = book.best(opposite(side));
    const std::int64_t dir = direction(side);
    TickPrice anchor = own ? *own
                           : (opp ? *opp - dir * 3 : TickPrice{cfg.seed_price_ticks - dir * 3});
    // mostly at or behind the best, sometimes improving, occasionally crossing
    TickPrice price = anchor - dir * rng.between(-2, 6);
    const bool new_level = book.level_volume(side, price) == 0;
    if (new_level && book.level_count(side) >= cfg.max_levels) {
      // reuse an existing level instead of opening one more
      auto snap = book.snapshot(0);
      const auto& lv = snap.side(side);
      price = lv[rng.below(lv.size())].price;
    }
    return TickPrice{std::max<std::int64_t>(1, price.ticks)};
  };

  for (SliceIndex s = 0; s < cfg.slices; ++s) {
    if (!rng.bernoulli(cfg.activity)) continue;
    const TimeMs now = s * kSliceMs + rng.between(0, kSliceMs - 1);
    const Side side = rng.bernoulli(0.5) ? Side::Bid : Side::Ask;
    const double u = rng.uniform();
    const auto cls = rng.bernoulli(0.5) ? TraderClass::Manual : TraderClass::Algo;

    if (u < 0.55 || book.order_count(side) == 0) {
      const TickPrice price = pick_price(side);
      const Volume vol = rng.between(1, 6);
      // A crossing order may rest its remainder as a new level; skip the
      // crossing if that could exceed the depth cap.
      const auto opp = book.best(opposite(side));
      const bool crosses = opp && (side == Side::Bid ? price >= *opp : price <= *opp);
      if (crosses && book.level_count(side) >= cfg.max_levels) continue;
      const Order order{next_id++, side, price, vol, now, cls};
      const auto r = book.submit_limit(order);
      session.trades.insert(session.trades.end(), r.fills.begin(), r.fills.end());
      session.events.push_back({now, EventKind::LimitOrder, side, price, vol, cls});
    } else if (u < 0.8) {
      auto ids = book.resting_ids(side, TraderClass::Manual);
      auto algo = book.resting_ids(side, TraderClass::Algo);
      const std::size_t n = ids.size() + algo.size();
      const std::size_t k = rng.below(n);
      const OrderId id = k < ids.size() ? ids[k] : algo[k - ids.size()];
      const Order o = *book.find(id);
      const bool partial = o.volume > 1 && rng.bernoulli(0.3);
      const Volume vol = partial ? rng.between(1, o.volume - 1) : o.volume;
      book.cancel(id, now, partial ? std::optional<Volume>{vol} : std::nullopt);
      session.events.push_back({now, EventKind::Cancel, side, o.price, vol, o.trader_class});
    } else {
      const Side book_side = side;
      const Volume depth = book.total_volume(book_side);
      if (depth == 0) continue;
      const Volume vol = std::min<Volume>(depth, rng.between(1, 8));
      const auto r = book.submit_market(next_id++, opposite(book_side), vol, now);
      session.trades.insert(session.trades.end(), r.fills.begin(), r.fills.end());
      session.events.push_back({now, EventKind::MarketOrder, book_side, std::nullopt, vol, cls});
    }
    auto fx = book.take_effects();
    session.effects.insert(session.effects.end(), fx.begin(), fx.end());
    session.snapshots.record(book.snapshot(s));
  }
  for (std::size_t i = 0; i < kEventTypes; ++i) session.counts.by_type[i] = 0;
  for (const auto& e : session.events) ++session.counts.by_type[type_index(e.kind, e.side)];
  session.counts.trades = static_cast<std::int64_t>(session.trades.size());
  return session;
}

}  // namespace fxlob::flow
