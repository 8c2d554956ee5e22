#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <unordered_map>
#include <vector>

#include "fxlob/depth.hpp"
#include "fxlob/types.hpp"

namespace fxlob {

struct Order {
  OrderId id{0};
  Side side{Side::Bid};
  TickPrice price;
  Volume volume{0};
  TimeMs submit_time{0};
  TraderClass trader_class{TraderClass::Algo};
};

// One execution against one resting order.
struct Fill {
  TimeMs time{0};
  Side aggressor{Side::Bid};  // Bid = buyer initiated
  TickPrice price;
  Volume volume{0};
  OrderId aggressor_id{0};
  OrderId resting_id{0};

  Side book_side() const noexcept { return opposite(aggressor); }

  friend bool operator==(const Fill&, const Fill&) = default;
};

// A visible change to one price level of one side, as the engine applied it.
struct BookEffect {
  TimeMs time{0};
  Side side{Side::Bid};
  FlowKind kind{FlowKind::LimitOrder};
  TickPrice price;
  Volume volume{0};
  OrderId order_id{0};
};

enum class BookStatus : std::uint8_t { Ok, DuplicateId, InvalidOrder, UnknownId, InvalidVolume };

// Price-time priority limit order book over integer tick prices.
//
// Crossing limit orders execute immediately against the opposite side and
// rest any remainder. Cancels of orders younger than the minimum quote life
// are queued and applied when the order becomes eligible (see advance_to).
class Book {
 public:
  explicit Book(TimeMs min_quote_life_ms = 0) : min_quote_life_(min_quote_life_ms) {}

  struct LimitResult {
    BookStatus status{BookStatus::Ok};
    std::vector<Fill> fills;
    std::optional<Order> resting;
  };

  struct MarketResult {
    BookStatus status{BookStatus::Ok};
    std::vector<Fill> fills;
    bool liquidity_exhausted{false};
    Volume unfilled{0};
  };

  enum class CancelState : std::uint8_t { Applied, Deferred };

  struct CancelResult {
    BookStatus status{BookStatus::Ok};
    CancelState state{CancelState::Applied};
    TimeMs effective_time{0};
    Volume volume{0};  // requested volume
  };

  LimitResult submit_limit(const Order& order);

  // `aggressor` is the side of the incoming order (Bid buys from the asks).
  // Any unfilled remainder is dropped.
  MarketResult submit_market(OrderId aggressor_id, Side aggressor, Volume volume, TimeMs now);

  // Full cancel when `volume` is empty; a partial cancel keeps queue position.
  CancelResult cancel(OrderId id, TimeMs now, std::optional<Volume> volume = std::nullopt);

  // Applies queued cancels whose effective time is <= now, in time order.
  void advance_to(TimeMs now);
  std::optional<TimeMs> next_deferred_time() const;

  std::optional<TickPrice> best(Side side) const noexcept;
  std::optional<TickPrice> best_bid() const noexcept { return best(Side::Bid); }
  std::optional<TickPrice> best_ask() const noexcept { return best(Side::Ask); }

  Volume level_volume(Side side, TickPrice price) const noexcept;
  std::size_t level_count(Side side) const noexcept;
  std::size_t order_count(Side side) const noexcept;
  Volume total_volume(Side side) const noexcept;
  bool contains(OrderId id) const noexcept { return index_.contains(id); }
  const Order* find(OrderId id) const noexcept;

  // Orders of one side (in insertion-independent order) resting for `cls`.
  std::span<const OrderId> resting_ids(Side side, TraderClass cls) const noexcept {
    return by_class_[class_slot(side, cls)];
  }

  // Queue at one price, front first.
  std::vector<Order> queue_at(Side side, TickPrice price) const;

  DepthSnapshot snapshot(SliceIndex slice, std::size_t depth = kVisibleDepth) const;

  const std::vector<Fill>& trade_log() const noexcept { return trade_log_; }

  void set_effect_logging(bool on) noexcept { log_effects_ = on; }
  std::vector<BookEffect> take_effects() { return std::exchange(effects_, {}); }

  TimeMs min_quote_life() const noexcept { return min_quote_life_; }

 private:
  struct Level {
    std::list<Order> queue;
    Volume volume{0};
  };
  using BidMap = std::map<std::int64_t, Level, std::greater<>>;
  using AskMap = std::map<std::int64_t, Level, std::less<>>;

  struct Locator {
    Side side;
    std::int64_t price;
    std::list<Order>::iterator it;
    std::size_t class_pos;
  };

  struct Deferred {
    TimeMs effective;
    std::uint64_t seq;
    OrderId id;
    std::optional<Volume> volume;
    bool operator>(const Deferred& o) const noexcept {
      return effective != o.effective ? effective > o.effective : seq > o.seq;
    }
  };

  static constexpr std::size_t class_slot(Side s, TraderClass c) noexcept {
    return static_cast<std::size_t>(s) * 2 + static_cast<std::size_t>(c);
  }

  template <class Fn>
  decltype(auto) with_side(Side s, Fn&& fn) {
    return s == Side::Bid ? fn(bids_) : fn(asks_);
  }
  template <class Fn>
  decltype(auto) with_side(Side s, Fn&& fn) const {
    return s == Side::Bid ? fn(bids_) : fn(asks_);
  }

  // Executes `volume` of an aggressor against the opposite side, stopping at
  // `limit` if set. Returns the unfilled volume.
  Volume match(OrderId aggressor_id, Side aggressor, Volume volume, std::optional<TickPrice> limit,
               TimeMs now, std::vector<Fill>& fills);
  void rest(const Order& order);
  void unlink(OrderId id);
  void apply_cancel(OrderId id, std::optional<Volume> volume, TimeMs now);
  void emit(TimeMs t, Side s, FlowKind k, TickPrice p, Volume v, OrderId id);

  BidMap bids_;
  AskMap asks_;
  std::unordered_map<OrderId, Locator> index_;
  std::array<std::vector<OrderId>, 4> by_class_;
  std::array<std::size_t, 2> order_counts_{0, 0};
  std::array<Volume, 2> side_volume_{0, 0};
  std::priority_queue<Deferred, std::vector<Deferred>, std::greater<>> deferred_;
  std::uint64_t deferred_seq_{0};
  std::vector<Fill> trade_log_;
  std::vector<BookEffect> effects_;
  bool log_effects_{false};
  TimeMs min_quote_life_{0};
};

}  // namespace fxlob
