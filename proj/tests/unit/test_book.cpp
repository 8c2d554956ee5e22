#include <doctest.h>

#include <map>
#include <random>

#include "fxlob/book.hpp"

using namespace fxlob;

namespace {

Order limit(OrderId id, Side side, std::int64_t price, Volume vol, TimeMs t = 0,
            TraderClass cls = TraderClass::Algo) {
  return Order{id, side, TickPrice{price}, vol, t, cls};
}

}  // namespace

TEST_CASE("limit order rests on an empty book") {
  Book book;
  auto r = book.submit_limit(limit(1, Side::Bid, 123450, 5));
  CHECK(r.status == BookStatus::Ok);
  CHECK(r.fills.empty());
  REQUIRE(r.resting);
  CHECK(r.resting->price == TickPrice{123450});
  CHECK(book.best_bid() == TickPrice{123450});
  CHECK(book.level_volume(Side::Bid, TickPrice{123450}) == 5);
}

TEST_CASE("exact cross empties the side") {
  Book book;
  book.submit_limit(limit(1, Side::Ask, 123455, 3));
  auto r = book.submit_limit(limit(2, Side::Bid, 123455, 3));
  REQUIRE(r.fills.size() == 1);
  CHECK(r.fills[0].price == TickPrice{123455});
  CHECK(r.fills[0].volume == 3);
  CHECK(r.fills[0].aggressor == Side::Bid);
  CHECK_FALSE(r.resting);
  CHECK_FALSE(book.best_ask());
  CHECK_FALSE(book.best_bid());
}

TEST_CASE("marketable limit walks levels then stops at its price") {
  Book book;
  book.submit_limit(limit(1, Side::Ask, 123455, 2));
  book.submit_limit(limit(2, Side::Ask, 123456, 4));
  auto r = book.submit_limit(limit(3, Side::Bid, 123456, 5));
  REQUIRE(r.fills.size() == 2);
  CHECK(r.fills[0].price == TickPrice{123455});
  CHECK(r.fills[0].volume == 2);
  CHECK(r.fills[1].price == TickPrice{123456});
  CHECK(r.fills[1].volume == 3);
  CHECK(book.level_volume(Side::Ask, TickPrice{123456}) == 1);
  CHECK_FALSE(r.resting);
  CHECK(book.trade_log().size() == 2);
}

TEST_CASE("duplicate and invalid orders are rejected") {
  Book book;
  book.submit_limit(limit(1, Side::Bid, 100, 1));
  CHECK(book.submit_limit(limit(1, Side::Bid, 99, 1)).status == BookStatus::DuplicateId);
  CHECK(book.submit_limit(limit(2, Side::Bid, 99, 0)).status == BookStatus::InvalidOrder);
  CHECK(book.submit_limit(limit(3, Side::Bid, 0, 1)).status == BookStatus::InvalidOrder);
}

TEST_CASE("cancel full and partial") {
  Book book;
  book.submit_limit(limit(1, Side::Ask, 200, 5));
  book.submit_limit(limit(2, Side::Ask, 200, 4));
  SUBCASE("full") {
    auto r = book.cancel(1, 0);
    CHECK(r.status == BookStatus::Ok);
    CHECK(book.level_volume(Side::Ask, TickPrice{200}) == 4);
  }
  SUBCASE("partial keeps queue position") {
    auto r = book.cancel(1, 0, Volume{2});
    CHECK(r.status == BookStatus::Ok);
    auto q = book.queue_at(Side::Ask, TickPrice{200});
    REQUIRE(q.size() == 2);
    CHECK(q[0].id == 1);
    CHECK(q[0].volume == 3);
    auto m = book.submit_market(9, Side::Bid, 3, 0);
    REQUIRE(m.fills.size() == 1);
    CHECK(m.fills[0].resting_id == 1);
  }
  SUBCASE("unknown id") { CHECK(book.cancel(42, 0).status == BookStatus::UnknownId); }
  SUBCASE("oversized partial") {
    CHECK(book.cancel(1, 0, Volume{6}).status == BookStatus::InvalidVolume);
  }
}

TEST_CASE("cancel of a young order is deferred to the minimum quote life") {
  Book book(250);
  book.set_effect_logging(true);
  book.submit_limit(limit(1, Side::Bid, 100, 2, /*t=*/1000));
  auto r = book.cancel(1, 1100);
  CHECK(r.state == Book::CancelState::Deferred);
  CHECK(r.effective_time == 1250);
  CHECK(book.contains(1));
  book.advance_to(1249);
  CHECK(book.contains(1));
  book.advance_to(1250);
  CHECK_FALSE(book.contains(1));
  auto effects = book.take_effects();
  REQUIRE(effects.size() == 2);
  CHECK(effects[1].kind == FlowKind::Cancel);
  CHECK(effects[1].time == 1250);
}

TEST_CASE("deferred cancel of an order filled meanwhile is a no-op") {
  Book book(250);
  book.submit_limit(limit(1, Side::Bid, 100, 2, 0));
  book.cancel(1, 10);
  book.submit_market(5, Side::Ask, 2, 20);
  book.advance_to(1000);
  CHECK(book.order_count(Side::Bid) == 0);
}

TEST_CASE("market orders") {
  Book book;
  SUBCASE("single fill") {
    book.submit_limit(limit(1, Side::Ask, 123455, 5));
    auto r = book.submit_market(2, Side::Bid, 1, 0);
    REQUIRE(r.fills.size() == 1);
    CHECK(r.fills[0].price == TickPrice{123455});
    CHECK(r.fills[0].volume == 1);
  }
  SUBCASE("walks two levels") {
    book.submit_limit(limit(1, Side::Ask, 123455, 5));
    book.submit_limit(limit(2, Side::Ask, 123456, 5));
    auto r = book.submit_market(3, Side::Bid, 6, 0);
    REQUIRE(r.fills.size() == 2);
    CHECK(r.fills[0].price == TickPrice{123455});
    CHECK(r.fills[0].volume == 5);
    CHECK(r.fills[1].price == TickPrice{123456});
    CHECK(r.fills[1].volume == 1);
  }
  SUBCASE("empty opposite side") {
    auto r = book.submit_market(1, Side::Ask, 1, 0);
    CHECK(r.fills.empty());
    CHECK(r.liquidity_exhausted);
  }
}

TEST_CASE("snapshot truncates and aggregates") {
  Book book;
  for (int i = 0; i < 12; ++i) book.submit_limit(limit(i + 1, Side::Ask, 1000 + i, 1));
  book.submit_limit(limit(100, Side::Bid, 990, 2));
  book.submit_limit(limit(101, Side::Bid, 990, 3));
  auto snap = book.snapshot(7);
  CHECK(snap.slice == 7);
  REQUIRE(snap.asks.size() == 10);
  CHECK(snap.asks[0].price == TickPrice{1000});
  CHECK(snap.asks[9].price == TickPrice{1009});
  REQUIRE(snap.bids.size() == 1);
  CHECK(snap.bids[0].volume == 5);
  CHECK(snap.asks.well_formed(Side::Ask));
  CHECK(snap.bids.well_formed(Side::Bid));
  CHECK(Book{}.snapshot(0).bids.empty());
  CHECK(book.snapshot(7) == snap);
}

TEST_CASE("random operation sequences keep the book consistent") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 20; ++trial) {
    Book book(trial % 2 ? 250 : 0);
    book.set_effect_logging(true);
    OrderId next_id = 1;
    // order id -> submit sequence, for FIFO checks
    std::map<OrderId, std::uint64_t> seq;
    std::uint64_t counter = 0;
    TimeMs now = 0;
    for (int step = 0; step < 3000; ++step) {
      now += static_cast<TimeMs>(rng() % 60);
      book.advance_to(now);
      const Volume before_bid = book.total_volume(Side::Bid);
      const Volume before_ask = book.total_volume(Side::Ask);
      const int op = static_cast<int>(rng() % 10);
      const Side side = rng() % 2 ? Side::Bid : Side::Ask;
      if (op < 6) {
        const auto ref = 1000 + static_cast<std::int64_t>(rng() % 21) - 10;
        const Volume vol = 1 + static_cast<Volume>(rng() % 5);
        const OrderId id = next_id++;
        seq[id] = counter++;
        auto r = book.submit_limit(limit(id, side, ref, vol, now));
        Volume filled = 0;
        for (const auto& f : r.fills) filled += f.volume;
        const Volume rested = r.resting ? r.resting->volume : 0;
        CHECK(filled + rested == vol);
        CHECK(book.total_volume(side) == (side == Side::Bid ? before_bid : before_ask) + rested);
        CHECK(book.total_volume(opposite(side)) ==
              (side == Side::Bid ? before_ask : before_bid) - filled);
      } else if (op < 8) {
        auto ids = book.resting_ids(side, TraderClass::Algo);
        if (!ids.empty()) book.cancel(ids[rng() % ids.size()], now);
      } else {
        auto r = book.submit_market(next_id++, side, 1 + static_cast<Volume>(rng() % 6), now);
        for (std::size_t i = 1; i < r.fills.size(); ++i) {
          // same price level: earlier submitted filled first
          if (r.fills[i].price == r.fills[i - 1].price) {
            CHECK(seq[r.fills[i - 1].resting_id] < seq[r.fills[i].resting_id]);
          }
        }
      }
      const auto bb = book.best_bid();
      const auto ba = book.best_ask();
      if (bb && ba) REQUIRE(*bb < *ba);
    }
    // level volume = sum of queue volumes
    auto snap = book.snapshot(0);
    for (const auto& lvl : snap.asks.levels()) {
      Volume sum = 0;
      for (const auto& o : book.queue_at(Side::Ask, lvl.price)) sum += o.volume;
      CHECK(sum == lvl.volume);
    }
  }
}
