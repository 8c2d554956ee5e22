#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fxlob/book.hpp"
#include "fxlob/depth.hpp"
#include "fxlob/types.hpp"

namespace fxlob::feed {

// The executions of one aggressor at one price.
struct Deal {
  TimeMs time{0};
  Side aggressor{Side::Bid};  // Bid = buyer initiated
  TickPrice price;
  Volume volume{0};
  OrderId aggressor_id{0};

  Side book_side() const noexcept { return opposite(aggressor); }
  friend bool operator==(const Deal&, const Deal&) = default;
};

// Merges consecutive fills sharing aggressor and price.
std::vector<Deal> aggregate_deals(std::span<const Fill> fills);

struct DealEntry {
  TickPrice price;
  Volume volume{0};
  friend bool operator==(const DealEntry&, const DealEntry&) = default;
};

struct DealRecord {
  SliceIndex slice{0};
  std::optional<DealEntry> highest_buy;  // buyer initiated; executed on the ask side
  std::optional<DealEntry> lowest_sell;  // seller initiated; executed on the bid side
  std::optional<Volume> total_signed_volume;  // buys minus sells

  friend bool operator==(const DealRecord&, const DealRecord&) = default;
};

struct QuoteRecord {
  SliceIndex slice{0};
  SideDepth bids;
  SideDepth asks;

  const SideDepth& side(Side s) const noexcept { return s == Side::Bid ? bids : asks; }
  friend bool operator==(const QuoteRecord&, const QuoteRecord&) = default;
};

using Record = std::variant<DealRecord, QuoteRecord>;

SliceIndex slice_of(const Record& r) noexcept;

// Deal records for every slice with trades, Quote records for every slice
// whose visible book changed; slice order, Deal before Quote.
std::vector<Record> encode(const SnapshotSeries& snapshots, std::span<const Fill> trades,
                           bool include_total_volume);

// The deal record of a non-empty set of same-slice deals.
DealRecord deal_record(SliceIndex slice, std::span<const Deal> deals, bool include_total_volume);

std::string format_record(const Record& r);
void write_feed(std::ostream& out, std::span<const Record> records);
std::string write_feed(std::span<const Record> records);

// Parses one line (without its newline).
Record parse_record(std::string_view line, std::size_t line_number);

// Throws ParseError on malformed lines and TruncationError when the last
// line lacks its newline.
std::vector<Record> decode(std::istream& in);
std::vector<Record> decode(std::string_view text);

// Rebuilds the change-only snapshot series carried by the Quote records.
SnapshotSeries quotes_to_series(std::span<const Record> records, SliceIndex total_slices);

}  // namespace fxlob::feed
