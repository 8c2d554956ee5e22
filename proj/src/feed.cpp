#include "fxlob/feed.hpp"

#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "fxlob/errors.hpp"

namespace fxlob::feed {

std::vector<Deal> aggregate_deals(std::span<const Fill> fills) {
  std::vector<Deal> out;
  for (const auto& f : fills) {
    if (!out.empty()) {
      auto& last = out.back();
      if (last.aggressor_id == f.aggressor_id && last.price == f.price && last.aggressor == f.aggressor &&
          fxlob::slice_of(last.time) == fxlob::slice_of(f.time)) {
        last.volume += f.volume;
        continue;
      }
    }
    out.push_back({f.time, f.aggressor, f.price, f.volume, f.aggressor_id});
  }
  return out;
}

SliceIndex slice_of(const Record& r) noexcept {
  return std::visit([](const auto& rec) { return rec.slice; }, r);
}

DealRecord deal_record(SliceIndex slice, std::span<const Deal> deals, bool include_total_volume) {
  DealRecord rec;
  rec.slice = slice;
  Volume signed_total = 0;
  for (const auto& d : deals) {
    if (d.aggressor == Side::Bid) {
      signed_total += d.volume;
      if (!rec.highest_buy || d.price > rec.highest_buy->price) rec.highest_buy = DealEntry{d.price, d.volume};
    } else {
      signed_total -= d.volume;
      if (!rec.lowest_sell || d.price < rec.lowest_sell->price) rec.lowest_sell = DealEntry{d.price, d.volume};
    }
  }
  if (include_total_volume) rec.total_signed_volume = signed_total;
  return rec;
}

std::vector<Record> encode(const SnapshotSeries& snapshots, std::span<const Fill> trades,
                           bool include_total_volume) {
  const auto deals = aggregate_deals(trades);
  std::vector<Record> out;
  out.reserve(snapshots.changes().size() + deals.size());

  auto quotes = snapshots.changes();
  std::size_t q = 0;
  std::size_t d = 0;
  while (q < quotes.size() || d < deals.size()) {
    const SliceIndex qs = q < quotes.size() ? quotes[q].slice : std::numeric_limits<SliceIndex>::max();
    const SliceIndex ds = d < deals.size() ? fxlob::slice_of(deals[d].time)
                                           : std::numeric_limits<SliceIndex>::max();
    const SliceIndex s = std::min(qs, ds);
    if (ds == s) {
      std::size_t end = d;
      while (end < deals.size() && fxlob::slice_of(deals[end].time) == s) ++end;
      out.emplace_back(deal_record(s, std::span(deals).subspan(d, end - d), include_total_volume));
      d = end;
    }
    if (qs == s) {
      out.emplace_back(QuoteRecord{s, quotes[q].bids, quotes[q].asks});
      ++q;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text form

namespace {

void append_side(std::string& s, const SideDepth& depth) {
  s += ',';
  s += std::to_string(depth.size());
  for (const auto& lv : depth.levels()) {
    s += ',';
    s += std::to_string(lv.price.ticks);
    s += ',';
    s += std::to_string(lv.volume);
  }
}

void append_entry(std::string& s, const std::optional<DealEntry>& e) {
  if (e) {
    s += ',' + std::to_string(e->price.ticks) + ',' + std::to_string(e->volume);
  } else {
    s += ",-,-";
  }
}

}  // namespace

std::string format_record(const Record& r) {
  std::string s;
  if (const auto* q = std::get_if<QuoteRecord>(&r)) {
    s = "Q," + std::to_string(q->slice);
    append_side(s, q->bids);
    append_side(s, q->asks);
  } else {
    const auto& d = std::get<DealRecord>(r);
    s = "D," + std::to_string(d.slice);
    append_entry(s, d.highest_buy);
    append_entry(s, d.lowest_sell);
    s += ',';
    s += d.total_signed_volume ? std::to_string(*d.total_signed_volume) : "-";
  }
  return s;
}

void write_feed(std::ostream& out, std::span<const Record> records) {
  for (const auto& r : records) out << format_record(r) << '\n';
}

std::string write_feed(std::span<const Record> records) {
  std::ostringstream os;
  write_feed(os, records);
  return os.str();
}

namespace {

class Fields {
 public:
  Fields(std::string_view line, std::size_t line_number) : line_number_(line_number) {
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields_.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }

  std::size_t size() const noexcept { return fields_.size(); }
  bool at_end() const noexcept { return pos_ == fields_.size(); }

  std::string_view take(const std::string& name) {
    if (pos_ >= fields_.size()) throw ParseError(line_number_, name, "missing field");
    return fields_[pos_++];
  }

  bool dash(const std::string& name) {
    if (pos_ < fields_.size() && fields_[pos_] == "-") {
      ++pos_;
      return true;
    }
    if (pos_ >= fields_.size()) throw ParseError(line_number_, name, "missing field");
    return false;
  }

  std::int64_t integer(const std::string& name, std::int64_t min_value) {
    const auto text = take(name);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
      throw ParseError(line_number_, name, "not an integer: '" + std::string(text) + "'");
    if (v < min_value)
      throw ParseError(line_number_, name, "value " + std::to_string(v) + " below " + std::to_string(min_value));
    return v;
  }

  void finish() {
    if (pos_ != fields_.size())
      throw ParseError(line_number_, "field " + std::to_string(pos_ + 1), "unexpected trailing field");
  }

  std::size_t line_number() const noexcept { return line_number_; }

 private:
  std::vector<std::string_view> fields_;
  std::size_t pos_{0};
  std::size_t line_number_;
};

SideDepth parse_side(Fields& f, Side side) {
  const std::string name = side == Side::Bid ? "bid" : "ask";
  const auto n = f.integer(name + "_count", 0);
  if (n > static_cast<std::int64_t>(kVisibleDepth))
    throw ParseError(f.line_number(), name + "_count",
                     std::to_string(n) + " levels exceed the visible depth of " + std::to_string(kVisibleDepth));
  SideDepth depth;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::string idx = std::to_string(i + 1);
    const auto price = f.integer(name + "_price_" + idx, 1);
    const auto volume = f.integer(name + "_volume_" + idx, 1);
    if (!depth.empty() && !(side == Side::Bid ? price < depth[depth.size() - 1].price.ticks
                                              : price > depth[depth.size() - 1].price.ticks))
      throw ParseError(f.line_number(), name + "_price_" + idx, "levels not strictly ordered");
    depth.push_back({TickPrice{price}, volume});
  }
  return depth;
}

std::optional<DealEntry> parse_entry(Fields& f, const std::string& name) {
  if (f.dash(name + "_price")) {
    if (!f.dash(name + "_volume")) throw ParseError(f.line_number(), name + "_volume", "expected '-'");
    return std::nullopt;
  }
  const auto price = f.integer(name + "_price", 1);
  const auto volume = f.integer(name + "_volume", 1);
  return DealEntry{TickPrice{price}, volume};
}

}  // namespace

Record parse_record(std::string_view line, std::size_t line_number) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  Fields f(line, line_number);
  const auto tag = f.take("type");
  if (tag == "Q") {
    QuoteRecord q;
    q.slice = f.integer("slice", 0);
    q.bids = parse_side(f, Side::Bid);
    q.asks = parse_side(f, Side::Ask);
    f.finish();
    if (!q.bids.empty() && !q.asks.empty() && !(q.bids[0].price < q.asks[0].price))
      throw ParseError(line_number, "ask_price_1", "crossed or locked book");
    return q;
  }
  if (tag == "D") {
    DealRecord d;
    d.slice = f.integer("slice", 0);
    d.highest_buy = parse_entry(f, "buy");
    d.lowest_sell = parse_entry(f, "sell");
    if (!f.dash("signed_total")) {
      const auto text_value = f.integer("signed_total", std::numeric_limits<std::int64_t>::min());
      d.total_signed_volume = text_value;
    }
    f.finish();
    if (!d.highest_buy && !d.lowest_sell) throw ParseError(line_number, "buy_price", "deal record without deals");
    return d;
  }
  throw ParseError(line_number, "type", "unknown record type '" + std::string(tag) + "'");
}

std::vector<Record> decode(std::string_view text) {
  std::vector<Record> out;
  std::size_t line_number = 0;
  std::size_t start = 0;
  SliceIndex last_slice = -1;
  bool last_was_quote = false;
  while (start < text.size()) {
    ++line_number;
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos)
      throw TruncationError(line_number, "last line has no terminating newline");
    const auto line = text.substr(start, nl - start);
    start = nl + 1;
    Record r = parse_record(line, line_number);
    const SliceIndex s = slice_of(r);
    const bool quote = std::holds_alternative<QuoteRecord>(r);
    // slices increase; within one slice a Deal may precede a single Quote
    if (s < last_slice || (s == last_slice && (last_was_quote || !quote)))
      throw ParseError(line_number, "slice", "records out of order");
    last_slice = s;
    last_was_quote = quote;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Record> decode(std::istream& in) {
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("feed: read failed");
  const std::string text = os.str();
  return decode(std::string_view(text));
}

SnapshotSeries quotes_to_series(std::span<const Record> records, SliceIndex total_slices) {
  SnapshotSeries series(total_slices);
  for (const auto& r : records)
    if (const auto* q = std::get_if<QuoteRecord>(&r)) series.push(DepthSnapshot{q->slice, q->bids, q->asks});
  return series;
}

}  // namespace fxlob::feed
