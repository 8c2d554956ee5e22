#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fxlob/depth.hpp"
#include "fxlob/feed.hpp"
#include "fxlob/rng.hpp"
#include "fxlob/types.hpp"

namespace fxlob::recon {

struct InferredEvent {
  SliceIndex slice{0};
  Side side{Side::Bid};
  FlowKind kind{FlowKind::LimitOrder};
  TickPrice price;
  Volume volume{0};

  friend bool operator==(const InferredEvent&, const InferredEvent&) = default;
};

enum class SliceCase : std::uint8_t { Quiet, Case1, Case2, Inconsistent };

struct ReconstructionReport {
  std::int64_t case1_slices{0};
  std::int64_t case2_slices{0};
  std::int64_t quiet_slices{0};
  std::int64_t inconsistent_slices{0};

  std::int64_t trade_slices() const noexcept { return case1_slices + case2_slices + inconsistent_slices; }
  double case1_share() const noexcept;
  void add(SliceCase c) noexcept;
  friend bool operator==(const ReconstructionReport&, const ReconstructionReport&) = default;
};

// Prices of one side whose visible volume can be compared between two
// snapshots. When either snapshot shows ten levels, prices beyond its last
// visible one may have scrolled in or out of view and are excluded.
struct ComparableRange {
  Side side;
  std::optional<TickPrice> bound;  // worst comparable price, if limited

  static ComparableRange of(Side side, const SideDepth& prev, const SideDepth& next) noexcept;
  bool contains(TickPrice p) const noexcept;
};

// Signed visible volume change per comparable price, best first.
std::vector<std::pair<TickPrice, Volume>> visible_changes(Side side, const SideDepth& prev,
                                                          const SideDepth& next);

// Limit orders for increases, cancels for decreases.
std::vector<InferredEvent> diff_quiet(SliceIndex slice, Side side, const SideDepth& prev,
                                      const SideDepth& next);

struct SideResult {
  SliceCase slice_case{SliceCase::Quiet};
  std::vector<InferredEvent> events;
};

// One side of a slice with a reported deal. `total` is the side's traded
// volume when known (else the reported volume is assumed to be all of it).
SideResult diff_trading(SliceIndex slice, Side side, const SideDepth& prev, const SideDepth& next,
                        const feed::DealEntry& reported, std::optional<Volume> total, Rng& rng);

// Per-side traded volumes implied by a deal record's signed total: the
// smallest totals consistent with both reported deals. Nothing when the
// record carries no total.
struct SideTotals {
  std::optional<Volume> buy;   // ask side
  std::optional<Volume> sell;  // bid side
};
std::optional<SideTotals> side_totals(const feed::DealRecord& d);

struct Reconstruction {
  std::vector<InferredEvent> events;
  ReconstructionReport report;
  std::vector<std::pair<SliceIndex, Side>> inconsistent;
};

Reconstruction reconstruct_stream(std::span<const feed::Record> records, std::uint64_t seed);

// Text form: "slice,side,kind,price,volume" per line (side B/A, kind L/C/T).
void write_events(std::ostream& out, std::span<const InferredEvent> events);
std::vector<InferredEvent> read_events(std::istream& in);
std::string report_json(const ReconstructionReport& r);

}  // namespace fxlob::recon
