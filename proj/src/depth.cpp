#include "fxlob/depth.hpp"

#include <algorithm>
#include <stdexcept>

namespace fxlob {

Volume SideDepth::volume_at(TickPrice price) const noexcept {
  for (std::size_t i = 0; i < count_; ++i)
    if (levels_[i].price == price) return levels_[i].volume;
  return 0;
}

bool SideDepth::push_back(PriceLevel level) noexcept {
  if (count_ == kVisibleDepth) return false;
  levels_[count_++] = level;
  return true;
}

bool SideDepth::well_formed(Side side) const noexcept {
  for (std::size_t i = 0; i < count_; ++i) {
    if (levels_[i].volume < 1 || levels_[i].price.ticks < 1) return false;
    if (i == 0) continue;
    const bool ordered = side == Side::Bid ? levels_[i].price < levels_[i - 1].price
                                           : levels_[i].price > levels_[i - 1].price;
    if (!ordered) return false;
  }
  return true;
}

bool SnapshotSeries::record(const DepthSnapshot& snap) {
  const DepthSnapshot& last = changes_.empty() ? empty_ : changes_.back();
  if (!changes_.empty() && snap.slice <= last.slice)
    throw std::invalid_argument("SnapshotSeries::record: slices must increase");
  if (snap.same_book(last)) return false;
  changes_.push_back(snap);
  return true;
}

void SnapshotSeries::push(DepthSnapshot snap) {
  if (!changes_.empty() && snap.slice <= changes_.back().slice)
    throw std::invalid_argument("SnapshotSeries::push: slices must increase");
  changes_.push_back(std::move(snap));
}

const DepthSnapshot& SnapshotSeries::at(SliceIndex slice) const noexcept {
  auto it = std::upper_bound(changes_.begin(), changes_.end(), slice,
                             [](SliceIndex s, const DepthSnapshot& d) { return s < d.slice; });
  if (it == changes_.begin()) return empty_;
  return *std::prev(it);
}

}  // namespace fxlob
