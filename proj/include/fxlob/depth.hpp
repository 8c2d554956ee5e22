#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fxlob/types.hpp"

namespace fxlob {

struct PriceLevel {
  TickPrice price;
  Volume volume{0};

  friend bool operator==(const PriceLevel&, const PriceLevel&) = default;
};

// Up to ten aggregated levels of one side, best first (descending prices on
// the bid, ascending on the ask).
class SideDepth {
 public:
  SideDepth() = default;

  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }
  bool full() const noexcept { return count_ == kVisibleDepth; }

  std::span<const PriceLevel> levels() const noexcept { return {levels_.data(), count_}; }
  const PriceLevel& operator[](std::size_t i) const noexcept { return levels_[i]; }

  std::optional<TickPrice> best() const noexcept {
    return count_ ? std::optional<TickPrice>{levels_[0].price} : std::nullopt;
  }

  // Volume at `price`, 0 when not listed.
  Volume volume_at(TickPrice price) const noexcept;

  // Appends a level; returns false when already holding ten.
  bool push_back(PriceLevel level) noexcept;

  // True when levels are strictly ordered away from the spread on `side`
  // and every volume is positive.
  bool well_formed(Side side) const noexcept;

  friend bool operator==(const SideDepth& a, const SideDepth& b) noexcept {
    if (a.count_ != b.count_) return false;
    for (std::size_t i = 0; i < a.count_; ++i)
      if (!(a.levels_[i] == b.levels_[i])) return false;
    return true;
  }

 private:
  std::array<PriceLevel, kVisibleDepth> levels_{};
  std::size_t count_{0};
};

struct DepthSnapshot {
  SliceIndex slice{0};
  SideDepth bids;
  SideDepth asks;

  const SideDepth& side(Side s) const noexcept { return s == Side::Bid ? bids : asks; }
  SideDepth& side(Side s) noexcept { return s == Side::Bid ? bids : asks; }

  bool same_book(const DepthSnapshot& o) const noexcept { return bids == o.bids && asks == o.asks; }

  std::optional<std::int64_t> spread() const noexcept {
    if (bids.empty() || asks.empty()) return std::nullopt;
    return asks[0].price - bids[0].price;
  }

  friend bool operator==(const DepthSnapshot&, const DepthSnapshot&) = default;
};

// End-of-slice visible book states, stored only where the visible state
// changed. The book between two entries is the earlier entry; before the
// first entry it is empty.
class SnapshotSeries {
 public:
  SnapshotSeries() = default;
  explicit SnapshotSeries(SliceIndex total_slices) : total_slices_(total_slices) {}

  // Appends when `snap` differs from the last stored state; slices must
  // strictly increase. Returns whether it was stored.
  bool record(const DepthSnapshot& snap);

  // Appends unconditionally (for decoded data that is already change-only).
  void push(DepthSnapshot snap);

  std::span<const DepthSnapshot> changes() const noexcept { return changes_; }
  SliceIndex total_slices() const noexcept { return total_slices_; }
  void set_total_slices(SliceIndex n) noexcept { total_slices_ = n; }

  // Book visible at the end of `slice`.
  const DepthSnapshot& at(SliceIndex slice) const noexcept;

  // Calls fn(snapshot, first_slice, slice_count) for every run of slices in
  // [0, total_slices) sharing one visible state, including the leading
  // empty-book run.
  template <class Fn>
  void for_each_run(Fn&& fn) const {
    SliceIndex cursor = 0;
    const DepthSnapshot* current = &empty_;
    for (const auto& snap : changes_) {
      if (snap.slice >= total_slices_) break;
      if (snap.slice > cursor) fn(*current, cursor, snap.slice - cursor);
      cursor = std::max(cursor, snap.slice);
      current = &snap;
    }
    if (total_slices_ > cursor) fn(*current, cursor, total_slices_ - cursor);
  }

 private:
  std::vector<DepthSnapshot> changes_;
  SliceIndex total_slices_{0};
  DepthSnapshot empty_{};
};

}  // namespace fxlob
