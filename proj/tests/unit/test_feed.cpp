#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fxlob/errors.hpp"
#include "fxlob/feed.hpp"
#include "fxlob/flowgen.hpp"

using namespace fxlob;
using namespace fxlob::feed;

namespace {

const std::filesystem::path kGolden = FXLOB_SOURCE_DIR "/tests/golden";

Fill fill(TimeMs t, Side aggressor, std::int64_t price, Volume v, OrderId aggressor_id) {
  return Fill{t, aggressor, TickPrice{price}, v, aggressor_id, 0};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Golden sessions: generated feeds that must never drift.
struct GoldenSpec {
  const char* file;
  const char* config;
  double duration_s;
  std::uint64_t seed;
  bool total;
};
constexpr GoldenSpec kGoldenSessions[] = {
    {"eurusd_decimal_60s.feed", "eurusd_decimal.json", 60.0, 1, true},
    {"eurusd_pip_60s.feed", "eurusd_pip.json", 60.0, 2, true},
    {"usdjpy_decimal_60s_no_total.feed", "usdjpy_decimal.json", 60.0, 3, false},
};

std::string generate_golden(const GoldenSpec& g) {
  const auto cfg = flow::load_config(std::filesystem::path(FXLOB_SOURCE_DIR "/configs") / g.config);
  const auto s = flow::generate_session(cfg, g.duration_s, g.seed);
  return write_feed(encode(s.snapshots, s.trades, g.total));
}

}  // namespace

TEST_CASE("deal records keep the extreme deal of each side") {
  std::vector<Fill> one{fill(1005, Side::Ask, 123460, 3, 7)};
  auto a = encode(SnapshotSeries(100), one, true);
  REQUIRE(a.size() == 1);
  const auto& d = std::get<DealRecord>(a[0]);
  CHECK(d.slice == 10);
  CHECK(d.lowest_sell == DealEntry{TickPrice{123460}, 3});
  CHECK_FALSE(d.highest_buy);
  CHECK(d.total_signed_volume == -3);

  std::vector<Fill> two{fill(1005, Side::Ask, 123460, 3, 7), fill(1050, Side::Ask, 123459, 2, 8)};
  auto b = encode(SnapshotSeries(100), two, true);
  const auto& e = std::get<DealRecord>(b[0]);
  CHECK(e.lowest_sell == DealEntry{TickPrice{123459}, 2});
  CHECK(e.total_signed_volume == -5);
  auto c = encode(SnapshotSeries(100), two, false);
  CHECK_FALSE(std::get<DealRecord>(c[0]).total_signed_volume);
}

TEST_CASE("fills of one aggressor at one price form one deal") {
  std::vector<Fill> f{fill(10, Side::Bid, 5, 1, 3), fill(10, Side::Bid, 5, 2, 3), fill(10, Side::Bid, 6, 4, 3),
                      fill(20, Side::Bid, 6, 1, 4)};
  auto deals = aggregate_deals(f);
  REQUIRE(deals.size() == 3);
  CHECK(deals[0].volume == 3);
  CHECK(deals[1].volume == 4);
  CHECK(deals[2].aggressor_id == 4);
  // the highest buy is reported; ties keep the earliest deal
  auto rec = deal_record(0, deals, true);
  CHECK(rec.highest_buy == DealEntry{TickPrice{6}, 4});
  CHECK(rec.total_signed_volume == 8);
}

TEST_CASE("no event, no record; deal precedes quote within a slice") {
  SnapshotSeries s(50);
  DepthSnapshot snap;
  snap.slice = 7;
  snap.bids.push_back({TickPrice{100}, 2});
  s.record(snap);
  auto recs = encode(s, std::vector<Fill>{fill(705, Side::Bid, 101, 1, 9)}, true);
  REQUIRE(recs.size() == 2);
  CHECK(std::holds_alternative<DealRecord>(recs[0]));
  CHECK(std::holds_alternative<QuoteRecord>(recs[1]));
  CHECK(write_feed(recs) == "D,7,101,1,-,-,1\nQ,7,1,100,2,0\n");
  CHECK(encode(SnapshotSeries(50), {}, true).empty());
}

TEST_CASE("text form parses back") {
  const std::string text =
      "Q,0,2,123450,3,123449,1,1,123460,5\n"
      "D,1,123460,2,-,-,-\n"
      "Q,1,2,123450,3,123449,1,1,123460,3\n"
      "D,4,-,-,123450,1,-1\n";
  auto recs = decode(text);
  REQUIRE(recs.size() == 4);
  CHECK(write_feed(recs) == text);
  const auto& q = std::get<QuoteRecord>(recs[0]);
  CHECK(q.bids.size() == 2);
  CHECK(q.asks[0].volume == 5);
  CHECK(std::get<DealRecord>(recs[3]).total_signed_volume == -1);
  CHECK(decode(std::string_view{}).empty());
}

TEST_CASE("decode errors name line and field") {
  std::string eleven = "Q,0,0,11";
  for (int i = 0; i < 11; ++i) eleven += "," + std::to_string(100 + i) + ",1";
  try {
    decode(eleven + "\n");
    FAIL("accepted eleven levels");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.field() == "ask_count");
  }

  auto field_of = [](const std::string& text) {
    try {
      decode(text);
    } catch (const TruncationError&) {
      return std::string("<truncated>");
    } catch (const ParseError& e) {
      return std::to_string(e.line()) + ":" + e.field();
    }
    return std::string("<ok>");
  };
  CHECK(field_of("Q,0,1,100,x,0\n") == "1:bid_volume_1");
  CHECK(field_of("Q,0,2,100,1,101,1,0\n") == "1:bid_price_2");
  CHECK(field_of("Q,0,1,100,1,1,100,1\n") == "1:ask_price_1");
  CHECK(field_of("Q,0,0,0,7\n") == "1:field 5");
  CHECK(field_of("D,3,-,-,-,-,-\n") == "1:buy_price");
  CHECK(field_of("D,3,10,1,-,-\n") == "1:signed_total");
  CHECK(field_of("X,1\n") == "1:type");
  CHECK(field_of("Q,5,0,0\nQ,4,0,0\n") == "2:slice");
  CHECK(field_of("Q,5,0,0\nD,5,10,1,-,-,-\n") == "2:slice");
  CHECK(field_of("Q,5,0,0\nQ,6,0,0") == "<truncated>");
  CHECK(field_of("Q,5,0,0\r\n") == "<ok>");
}

TEST_CASE("round trip on generated sessions") {
  const auto cfg = flow::load_config(FXLOB_SOURCE_DIR "/configs/eurusd_decimal.json");
  for (std::uint64_t seed : {1u, 2u}) {
    const auto s = flow::generate_session(cfg, 900.0, seed);
    for (bool total : {true, false}) {
      const auto recs = encode(s.snapshots, s.trades, total);
      const auto text = write_feed(recs);
      CHECK(decode(text) == recs);
      std::istringstream in(text);
      CHECK(decode(in) == recs);
    }
    // Quote records carry exactly the stored snapshot changes
    const auto recs = encode(s.snapshots, s.trades, true);
    const auto series = quotes_to_series(recs, s.total_slices);
    REQUIRE(series.changes().size() == s.snapshots.changes().size());
    for (std::size_t i = 0; i < series.changes().size(); ++i) CHECK(series.changes()[i] == s.snapshots.changes()[i]);
  }
}

TEST_CASE("intra-slice round trips and deep depth leave no trace") {
  auto run = [](bool extra) {
    Book book;
    SnapshotSeries s(10);
    book.submit_limit(Order{1, Side::Bid, TickPrice{100}, 1, 0, TraderClass::Algo});
    for (int i = 0; i < 10; ++i)
      book.submit_limit(Order{static_cast<OrderId>(10 + i), Side::Ask, TickPrice{110 + i}, 1, 0, TraderClass::Algo});
    s.record(book.snapshot(0));
    if (extra) {
      // submit and cancel within slice 1, and an order beyond the tenth level
      book.submit_limit(Order{50, Side::Bid, TickPrice{101}, 4, 120, TraderClass::Manual});
      book.cancel(50, 150);
      book.submit_limit(Order{51, Side::Ask, TickPrice{130}, 9, 160, TraderClass::Manual});
    }
    s.record(book.snapshot(1));
    return write_feed(encode(s, book.trade_log(), true));
  };
  CHECK(run(true) == run(false));
}

TEST_CASE("golden feeds") {
  const bool update = std::getenv("FXLOB_UPDATE_GOLDEN") != nullptr;
  for (const auto& g : kGoldenSessions) {
    CAPTURE(g.file);
    const auto path = kGolden / g.file;
    const auto fresh = generate_golden(g);
    if (update) {
      std::ofstream(path, std::ios::binary) << fresh;
    }
    const auto stored = read_file(path);
    REQUIRE(!stored.empty());
    CHECK(fresh == stored);
  }
  // every golden file, generated or hand-written, survives a round trip
  int files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kGolden)) {
    if (entry.path().extension() != ".feed") continue;
    CAPTURE(entry.path().filename().string());
    const auto text = read_file(entry.path());
    CHECK(write_feed(decode(text)) == text);
    ++files;
  }
  CHECK(files >= 4);
}
