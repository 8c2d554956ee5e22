#include "fxlob/reconstruct.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "fxlob/errors.hpp"

namespace fxlob::recon {

double ReconstructionReport::case1_share() const noexcept {
  const auto n = trade_slices();
  return n ? static_cast<double>(case1_slices) / static_cast<double>(n) : 0.0;
}

void ReconstructionReport::add(SliceCase c) noexcept {
  switch (c) {
    case SliceCase::Quiet: ++quiet_slices; break;
    case SliceCase::Case1: ++case1_slices; break;
    case SliceCase::Case2: ++case2_slices; break;
    case SliceCase::Inconsistent: ++inconsistent_slices; break;
  }
}

namespace {

// True when a is strictly better (closer to the spread) than b on `side`.
bool better(Side side, TickPrice a, TickPrice b) noexcept { return side == Side::Bid ? a > b : a < b; }

}  // namespace

ComparableRange ComparableRange::of(Side side, const SideDepth& prev, const SideDepth& next) noexcept {
  ComparableRange r{side, std::nullopt};
  for (const SideDepth* d : {&prev, &next}) {
    if (!d->full()) continue;
    const TickPrice last = (*d)[d->size() - 1].price;
    if (!r.bound || better(side, last, *r.bound)) r.bound = last;
  }
  return r;
}

bool ComparableRange::contains(TickPrice p) const noexcept {
  return !bound || p == *bound || better(side, p, *bound);
}

std::vector<std::pair<TickPrice, Volume>> visible_changes(Side side, const SideDepth& prev,
                                                          const SideDepth& next) {
  const auto range = ComparableRange::of(side, prev, next);
  std::map<std::int64_t, Volume> delta;
  for (const auto& lv : prev.levels())
    if (range.contains(lv.price)) delta[lv.price.ticks] -= lv.volume;
  for (const auto& lv : next.levels())
    if (range.contains(lv.price)) delta[lv.price.ticks] += lv.volume;
  std::vector<std::pair<TickPrice, Volume>> out;
  for (const auto& [p, v] : delta)
    if (v != 0) out.emplace_back(TickPrice{p}, v);
  if (side == Side::Bid) std::reverse(out.begin(), out.end());
  return out;
}

namespace {

void emit_residuals(SliceIndex slice, Side side, const std::vector<std::pair<TickPrice, Volume>>& changes,
                    std::vector<InferredEvent>& out) {
  for (const auto& [p, v] : changes) {
    if (v > 0) out.push_back({slice, side, FlowKind::LimitOrder, p, v});
    if (v < 0) out.push_back({slice, side, FlowKind::Cancel, p, -v});
  }
}

}  // namespace

std::vector<InferredEvent> diff_quiet(SliceIndex slice, Side side, const SideDepth& prev,
                                      const SideDepth& next) {
  std::vector<InferredEvent> out;
  emit_residuals(slice, side, visible_changes(side, prev, next), out);
  return out;
}

SideResult diff_trading(SliceIndex slice, Side side, const SideDepth& prev, const SideDepth& next,
                        const feed::DealEntry& reported, std::optional<Volume> total, Rng& rng) {
  SideResult res;
  const Volume traded = total.value_or(reported.volume);
  auto fallback = [&] {
    res.slice_case = SliceCase::Inconsistent;
    res.events = diff_quiet(slice, side, prev, next);
    return res;
  };
  if (traded < reported.volume || reported.volume < 1) return fallback();

  auto changes = visible_changes(side, prev, next);
  auto change_at = [&](TickPrice p) -> Volume* {
    for (auto& [price, v] : changes)
      if (price == p) return &v;
    return nullptr;
  };
  const auto range = ComparableRange::of(side, prev, next);

  // The reported deal explains part of the decrease at its price.
  if (range.contains(reported.price)) {
    if (Volume* v = change_at(reported.price)) {
      *v += reported.volume;
    } else {
      changes.emplace_back(reported.price, reported.volume);
    }
  }

  std::map<std::int64_t, Volume> trades;
  trades[reported.price.ticks] += reported.volume;

  Volume remaining = traded - reported.volume;
  if (remaining == 0) {
    res.slice_case = SliceCase::Case1;
  } else {
    // Unreported volume traded at prices from the prior best up to the
    // reported price, each capped by the decrease still unexplained there.
    const auto prior_best = prev.best();
    if (!prior_best) return fallback();
    std::vector<std::pair<TickPrice, Volume>> caps;
    Volume capacity = 0;
    for (const auto& [p, v] : changes) {
      const bool between = !better(side, p, *prior_best) && !better(side, reported.price, p);
      if (between && v < 0) {
        caps.emplace_back(p, -v);
        capacity += -v;
      }
    }
    if (capacity < remaining) return fallback();
    std::sort(caps.begin(), caps.end(), [side](const auto& a, const auto& b) { return better(side, a.first, b.first); });
    while (remaining > 0) {
      std::size_t open = 0;
      for (const auto& c : caps) open += c.second > 0;
      auto k = rng.below(open);
      for (auto& [p, cap] : caps) {
        if (cap == 0) continue;
        if (k-- == 0) {
          --cap;
          ++trades[p.ticks];
          *change_at(p) += 1;
          break;
        }
      }
      --remaining;
    }
    res.slice_case = SliceCase::Case2;
  }

  std::vector<std::pair<std::int64_t, Volume>> ordered(trades.begin(), trades.end());
  if (side == Side::Bid) std::reverse(ordered.begin(), ordered.end());
  for (const auto& [p, v] : ordered) res.events.push_back({slice, side, FlowKind::Trade, TickPrice{p}, v});

  std::sort(changes.begin(), changes.end(), [side](const auto& a, const auto& b) { return better(side, a.first, b.first); });
  emit_residuals(slice, side, changes, res.events);
  return res;
}

std::optional<SideTotals> side_totals(const feed::DealRecord& d) {
  if (!d.total_signed_volume) return std::nullopt;
  const Volume s = *d.total_signed_volume;
  SideTotals t;
  if (d.highest_buy && d.lowest_sell) {
    const Volume rb = d.highest_buy->volume;
    const Volume rs = d.lowest_sell->volume;
    if (s >= rb - rs) {
      t.sell = rs;
      t.buy = s + rs;
    } else {
      t.buy = rb;
      t.sell = rb - s;
    }
  } else if (d.highest_buy) {
    t.buy = s;
  } else if (d.lowest_sell) {
    t.sell = -s;
  }
  return t;
}

Reconstruction reconstruct_stream(std::span<const feed::Record> records, std::uint64_t seed) {
  Reconstruction out;
  Rng rng(seed);
  SideDepth book[2];

  std::size_t i = 0;
  while (i < records.size()) {
    const SliceIndex slice = feed::slice_of(records[i]);
    const feed::DealRecord* deal = nullptr;
    const feed::QuoteRecord* quote = nullptr;
    for (; i < records.size() && feed::slice_of(records[i]) == slice; ++i) {
      if (const auto* d = std::get_if<feed::DealRecord>(&records[i])) deal = d;
      if (const auto* q = std::get_if<feed::QuoteRecord>(&records[i])) quote = q;
    }
    const auto totals = deal ? side_totals(*deal) : std::nullopt;

    for (Side side : {Side::Bid, Side::Ask}) {
      const auto s = static_cast<std::size_t>(side);
      const SideDepth& prev = book[s];
      const SideDepth& next = quote ? quote->side(side) : prev;
      const auto& entry = !deal ? std::optional<feed::DealEntry>{}
                                : side == Side::Ask ? deal->highest_buy : deal->lowest_sell;
      if (entry) {
        std::optional<Volume> total;
        if (totals) total = side == Side::Ask ? totals->buy : totals->sell;
        auto r = diff_trading(slice, side, prev, next, *entry, total, rng);
        out.report.add(r.slice_case);
        if (r.slice_case == SliceCase::Inconsistent) out.inconsistent.emplace_back(slice, side);
        out.events.insert(out.events.end(), r.events.begin(), r.events.end());
      } else if (!(prev == next)) {
        auto ev = diff_quiet(slice, side, prev, next);
        out.report.add(SliceCase::Quiet);
        out.events.insert(out.events.end(), ev.begin(), ev.end());
      }
    }
    if (quote) {
      book[0] = quote->bids;
      book[1] = quote->asks;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text form

void write_events(std::ostream& out, std::span<const InferredEvent> events) {
  for (const auto& e : events)
    out << e.slice << ',' << to_string(e.side) << ',' << to_string(e.kind) << ',' << e.price.ticks << ','
        << e.volume << '\n';
}

std::vector<InferredEvent> read_events(std::istream& in) {
  std::vector<InferredEvent> out;
  std::string line;
  std::size_t n = 0;
  auto integer = [&](std::string_view f, const char* name, std::int64_t min) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size() || v < min)
      throw ParseError(n, name, "bad value '" + std::string(f) + "'");
    return v;
  };
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
      f.push_back(rest.substr(0, pos));
    f.push_back(rest);
    if (f.size() != 5) throw ParseError(n, "line", "expected 5 fields");
    InferredEvent e;
    e.slice = integer(f[0], "slice", 0);
    if (f[1] == "B") e.side = Side::Bid;
    else if (f[1] == "A") e.side = Side::Ask;
    else throw ParseError(n, "side", "expected B or A");
    if (f[2] == "L") e.kind = FlowKind::LimitOrder;
    else if (f[2] == "C") e.kind = FlowKind::Cancel;
    else if (f[2] == "T") e.kind = FlowKind::Trade;
    else throw ParseError(n, "kind", "expected L, C or T");
    e.price = TickPrice{integer(f[3], "price", 1)};
    e.volume = integer(f[4], "volume", 1);
    out.push_back(e);
  }
  return out;
}

std::string report_json(const ReconstructionReport& r) {
  std::ostringstream os;
  os << "{\"case1_slices\": " << r.case1_slices << ", \"case2_slices\": " << r.case2_slices
     << ", \"quiet_slices\": " << r.quiet_slices << ", \"inconsistent_slices\": " << r.inconsistent_slices
     << ", \"case1_share\": " << r.case1_share() << "}";
  return os.str();
}

}  // namespace fxlob::recon
