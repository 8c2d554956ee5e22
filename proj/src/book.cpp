#include "fxlob/book.hpp"

#include <utility>

namespace fxlob {

namespace {

template <class Map>
bool crosses(const Map& opposite_side, Side aggressor, std::optional<TickPrice> limit) {
  if (opposite_side.empty()) return false;
  if (!limit) return true;
  const auto best = opposite_side.begin()->first;
  return aggressor == Side::Bid ? best <= limit->ticks : best >= limit->ticks;
}

}  // namespace

void Book::emit(TimeMs t, Side s, FlowKind k, TickPrice p, Volume v, OrderId id) {
  if (log_effects_) effects_.push_back({t, s, k, p, v, id});
}

Book::LimitResult Book::submit_limit(const Order& order) {
  LimitResult result;
  if (order.volume < 1 || order.price.ticks < 1) {
    result.status = BookStatus::InvalidOrder;
    return result;
  }
  if (index_.contains(order.id)) {
    result.status = BookStatus::DuplicateId;
    return result;
  }
  const Volume left =
      match(order.id, order.side, order.volume, order.price, order.submit_time, result.fills);
  if (left > 0) {
    Order remainder = order;
    remainder.volume = left;
    rest(remainder);
    emit(order.submit_time, order.side, FlowKind::LimitOrder, order.price, left, order.id);
    result.resting = remainder;
  }
  return result;
}

Book::MarketResult Book::submit_market(OrderId aggressor_id, Side aggressor, Volume volume,
                                       TimeMs now) {
  MarketResult result;
  if (volume < 1) {
    result.status = BookStatus::InvalidVolume;
    return result;
  }
  result.unfilled = match(aggressor_id, aggressor, volume, std::nullopt, now, result.fills);
  result.liquidity_exhausted = result.unfilled > 0;
  return result;
}

Volume Book::match(OrderId aggressor_id, Side aggressor, Volume volume,
                   std::optional<TickPrice> limit, TimeMs now, std::vector<Fill>& fills) {
  const Side passive = opposite(aggressor);
  return with_side(passive, [&](auto& levels) {
    while (volume > 0 && crosses(levels, aggressor, limit)) {
      auto lvl = levels.begin();
      auto& queue = lvl->second.queue;
      Order& resting = queue.front();
      const Volume qty = std::min(volume, resting.volume);
      const TickPrice price{lvl->first};
      const Fill fill{now, aggressor, price, qty, aggressor_id, resting.id};
      fills.push_back(fill);
      trade_log_.push_back(fill);
      emit(now, passive, FlowKind::Trade, price, qty, resting.id);
      volume -= qty;
      resting.volume -= qty;
      lvl->second.volume -= qty;
      side_volume_[static_cast<std::size_t>(passive)] -= qty;
      if (resting.volume == 0) unlink(resting.id);
    }
    return volume;
  });
}

void Book::rest(const Order& order) {
  with_side(order.side, [&](auto& levels) {
    Level& lvl = levels[order.price.ticks];
    lvl.queue.push_back(order);
    lvl.volume += order.volume;
    auto& ids = by_class_[class_slot(order.side, order.trader_class)];
    ids.push_back(order.id);
    index_.emplace(order.id,
                   Locator{order.side, order.price.ticks, std::prev(lvl.queue.end()), ids.size() - 1});
  });
  ++order_counts_[static_cast<std::size_t>(order.side)];
  side_volume_[static_cast<std::size_t>(order.side)] += order.volume;
}

// Removes an order from every structure. Level volume must already exclude
// the order's remaining volume.
void Book::unlink(OrderId id) {
  auto found = index_.find(id);
  if (found == index_.end()) return;
  const Locator loc = found->second;
  const TraderClass cls = loc.it->trader_class;

  auto& ids = by_class_[class_slot(loc.side, cls)];
  const OrderId moved = ids.back();
  ids[loc.class_pos] = moved;
  ids.pop_back();
  if (moved != id) index_.at(moved).class_pos = loc.class_pos;

  with_side(loc.side, [&](auto& levels) {
    auto lvl = levels.find(loc.price);
    lvl->second.queue.erase(loc.it);
    if (lvl->second.queue.empty()) levels.erase(lvl);
  });
  --order_counts_[static_cast<std::size_t>(loc.side)];
  index_.erase(found);
}

Book::CancelResult Book::cancel(OrderId id, TimeMs now, std::optional<Volume> volume) {
  CancelResult result;
  auto found = index_.find(id);
  if (found == index_.end()) {
    result.status = BookStatus::UnknownId;
    return result;
  }
  const Order& order = *found->second.it;
  if (volume && (*volume < 1 || *volume > order.volume)) {
    result.status = BookStatus::InvalidVolume;
    return result;
  }
  result.volume = volume.value_or(order.volume);
  const TimeMs eligible = order.submit_time + min_quote_life_;
  if (now < eligible) {
    deferred_.push({eligible, deferred_seq_++, id, volume});
    result.state = CancelState::Deferred;
    result.effective_time = eligible;
    return result;
  }
  apply_cancel(id, volume, now);
  result.effective_time = now;
  return result;
}

void Book::apply_cancel(OrderId id, std::optional<Volume> volume, TimeMs now) {
  auto found = index_.find(id);
  if (found == index_.end()) return;  // filled or cancelled meanwhile
  Locator& loc = found->second;
  Order& order = *loc.it;
  const Volume qty = volume ? std::min(*volume, order.volume) : order.volume;
  const Side side = loc.side;
  const TickPrice price{loc.price};
  with_side(side, [&](auto& levels) { levels.find(loc.price)->second.volume -= qty; });
  side_volume_[static_cast<std::size_t>(side)] -= qty;
  order.volume -= qty;
  emit(now, side, FlowKind::Cancel, price, qty, id);
  if (order.volume == 0) unlink(id);
}

void Book::advance_to(TimeMs now) {
  while (!deferred_.empty() && deferred_.top().effective <= now) {
    const Deferred d = deferred_.top();
    deferred_.pop();
    apply_cancel(d.id, d.volume, d.effective);
  }
}

std::optional<TimeMs> Book::next_deferred_time() const {
  if (deferred_.empty()) return std::nullopt;
  return deferred_.top().effective;
}

std::optional<TickPrice> Book::best(Side side) const noexcept {
  return with_side(side, [](const auto& levels) -> std::optional<TickPrice> {
    if (levels.empty()) return std::nullopt;
    return TickPrice{levels.begin()->first};
  });
}

Volume Book::level_volume(Side side, TickPrice price) const noexcept {
  return with_side(side, [&](const auto& levels) -> Volume {
    auto it = levels.find(price.ticks);
    return it == levels.end() ? 0 : it->second.volume;
  });
}

std::size_t Book::level_count(Side side) const noexcept {
  return with_side(side, [](const auto& levels) { return levels.size(); });
}

std::size_t Book::order_count(Side side) const noexcept {
  return order_counts_[static_cast<std::size_t>(side)];
}

Volume Book::total_volume(Side side) const noexcept {
  return side_volume_[static_cast<std::size_t>(side)];
}

const Order* Book::find(OrderId id) const noexcept {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &*it->second.it;
}

std::vector<Order> Book::queue_at(Side side, TickPrice price) const {
  return with_side(side, [&](const auto& levels) {
    auto it = levels.find(price.ticks);
    if (it == levels.end()) return std::vector<Order>{};
    return std::vector<Order>(it->second.queue.begin(), it->second.queue.end());
  });
}

DepthSnapshot Book::snapshot(SliceIndex slice, std::size_t depth) const {
  DepthSnapshot snap;
  snap.slice = slice;
  depth = std::min(depth, kVisibleDepth);
  auto fill_side = [depth](const auto& levels, SideDepth& out) {
    for (const auto& [price, lvl] : levels) {
      if (out.size() == depth) break;
      out.push_back({TickPrice{price}, lvl.volume});
    }
  };
  fill_side(bids_, snap.bids);
  fill_side(asks_, snap.asks);
  return snap;
}

}  // namespace fxlob
