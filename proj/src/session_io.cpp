#include "fxlob/session_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fxlob/errors.hpp"
#include "fxlob/feed.hpp"

namespace fxlob::io {

namespace {

constexpr const char* kEventHeader = "time_ms,kind,side,price_ticks,volume,trader_class";
constexpr const char* kFillHeader = "time_ms,aggressor,price_ticks,volume,aggressor_id,resting_id";

// Comma-separated line with a fixed field count and named fields.
class CsvLine {
 public:
  CsvLine(std::string_view line, std::size_t n, std::size_t expected) : n_(n) {
    for (std::size_t pos; (pos = line.find(',')) != std::string_view::npos; line.remove_prefix(pos + 1))
      fields_.push_back(line.substr(0, pos));
    fields_.push_back(line);
    if (fields_.size() != expected)
      throw ParseError(n, "line", "expected " + std::to_string(expected) + " fields");
  }

  std::string_view operator[](std::size_t i) const { return fields_[i]; }

  template <class T>
  T integer(std::size_t i, const char* name, T min) const {
    T v{};
    const auto f = fields_[i];
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size() || v < min)
      throw ParseError(n_, name, "bad value '" + std::string(f) + "'");
    return v;
  }

  Side side(std::size_t i, const char* name) const {
    if (fields_[i] == "B") return Side::Bid;
    if (fields_[i] == "A") return Side::Ask;
    throw ParseError(n_, name, "expected B or A");
  }

 private:
  std::vector<std::string_view> fields_;
  std::size_t n_;
};

template <class Fn>
void for_each_line(std::istream& in, const char* header, Fn&& fn) {
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (n == 1 && line == header) continue;
    fn(line, n);
  }
}

}  // namespace

void write_ground_truth(std::ostream& out, std::span<const flow::GroundTruthEvent> events) {
  out << kEventHeader << '\n';
  for (const auto& e : events) {
    out << e.time << ',' << flow::to_string(e.kind) << ',' << to_string(e.side) << ',';
    if (e.price) out << e.price->ticks;
    else out << '-';
    out << ',' << e.volume << ',' << to_string(e.trader_class) << '\n';
  }
}

std::vector<flow::GroundTruthEvent> read_ground_truth(std::istream& in) {
  std::vector<flow::GroundTruthEvent> out;
  for_each_line(in, kEventHeader, [&](std::string_view line, std::size_t n) {
    const CsvLine f(line, n, 6);
    flow::GroundTruthEvent e;
    e.time = f.integer<TimeMs>(0, "time_ms", 0);
    if (f[1] == "L") e.kind = flow::EventKind::LimitOrder;
    else if (f[1] == "C") e.kind = flow::EventKind::Cancel;
    else if (f[1] == "M") e.kind = flow::EventKind::MarketOrder;
    else throw ParseError(n, "kind", "expected L, C or M");
    e.side = f.side(2, "side");
    if (f[3] != "-") e.price = TickPrice{f.integer<std::int64_t>(3, "price_ticks", 1)};
    else if (e.kind != flow::EventKind::MarketOrder) throw ParseError(n, "price_ticks", "missing price");
    e.volume = f.integer<Volume>(4, "volume", 1);
    if (f[5] == "M") e.trader_class = TraderClass::Manual;
    else if (f[5] == "A") e.trader_class = TraderClass::Algo;
    else throw ParseError(n, "trader_class", "expected M or A");
    out.push_back(e);
  });
  return out;
}

void write_fills(std::ostream& out, std::span<const Fill> fills) {
  out << kFillHeader << '\n';
  for (const auto& f : fills)
    out << f.time << ',' << to_string(f.aggressor) << ',' << f.price.ticks << ',' << f.volume << ','
        << f.aggressor_id << ',' << f.resting_id << '\n';
}

std::vector<Fill> read_fills(std::istream& in) {
  std::vector<Fill> out;
  for_each_line(in, kFillHeader, [&](std::string_view line, std::size_t n) {
    const CsvLine f(line, n, 6);
    Fill x;
    x.time = f.integer<TimeMs>(0, "time_ms", 0);
    x.aggressor = f.side(1, "aggressor");
    x.price = TickPrice{f.integer<std::int64_t>(2, "price_ticks", 1)};
    x.volume = f.integer<Volume>(3, "volume", 1);
    x.aggressor_id = f.integer<OrderId>(4, "aggressor_id", 0);
    x.resting_id = f.integer<OrderId>(5, "resting_id", 0);
    out.push_back(x);
  });
  return out;
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::filesystem::path& p, std::string_view text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
  if (!out) throw IoError("write failed: " + p.string());
}

nlohmann::json session_summary(const flow::Session& s) {
  nlohmann::json counts;
  for (std::size_t t = 0; t < flow::kEventTypes; ++t) counts[std::string(flow::type_name(t))] = s.counts.by_type[t];
  nlohmann::json j;
  j["instrument"] = {{"name", s.instrument.name},
                     {"tick_value", s.instrument.tick_value},
                     {"pip_in_ticks", s.instrument.pip_in_ticks},
                     {"reference_price", s.instrument.reference_price},
                     {"min_quote_life_ms", s.instrument.min_quote_life_ms}};
  j["total_slices"] = s.total_slices;
  j["events"] = counts;
  j["trades"] = s.counts.trades;
  j["resampled_cancels"] = s.counts.resampled_cancels;
  j["flash_cancels"] = s.counts.flash_cancels;
  j["step_ahead_orders"] = s.counts.step_ahead_orders;
  return j;
}

void save_session(const flow::Session& s, const SessionFiles& files) {
  std::filesystem::create_directories(files.dir);
  write_text(files.meta(), session_summary(s).dump(2) + "\n");
  std::ostringstream ev;
  write_ground_truth(ev, s.events);
  write_text(files.events(), ev.str());
  std::ostringstream tr;
  write_fills(tr, s.trades);
  write_text(files.trades(), tr.str());
  // Quote records alone carry the change-only series.
  write_text(files.snapshots(), feed::write_feed(feed::encode(s.snapshots, {}, false)));
}

flow::Session load_session(const SessionFiles& files) {
  flow::Session s;
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_text(files.meta()));
    const auto& in = meta.at("instrument");
    s.instrument.name = in.at("name").get<std::string>();
    s.instrument.tick_value = in.at("tick_value").get<double>();
    s.instrument.pip_in_ticks = in.at("pip_in_ticks").get<std::int64_t>();
    s.instrument.reference_price = in.at("reference_price").get<double>();
    s.instrument.min_quote_life_ms = in.at("min_quote_life_ms").get<TimeMs>();
    s.total_slices = meta.at("total_slices").get<SliceIndex>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(files.meta().string() + ": " + e.what());
  }
  {
    std::istringstream in(read_text(files.events()));
    s.events = read_ground_truth(in);
  }
  {
    std::istringstream in(read_text(files.trades()));
    s.trades = read_fills(in);
  }
  s.snapshots = feed::quotes_to_series(feed::decode(read_text(files.snapshots())), s.total_slices);
  for (const auto& e : s.events) ++s.counts.by_type[flow::type_index(e.kind, e.side)];
  s.counts.trades = static_cast<std::int64_t>(s.trades.size());
  return s;
}

}  // namespace fxlob::io
