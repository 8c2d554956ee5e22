#include <doctest.h>

#include "fxlob/errors.hpp"
#include "fxlob/instrument.hpp"

using namespace fxlob;

TEST_CASE("last digit side convention") {
  CHECK(last_digit(TickPrice{123451}, Side::Bid) == 1);
  CHECK(last_digit(TickPrice{123459}, Side::Ask) == 1);
  CHECK(last_digit(TickPrice{123450}, Side::Ask) == 0);
  CHECK(last_digit(TickPrice{123450}, Side::Bid) == 0);
  CHECK(last_digit(TickPrice{123455}, Side::Ask) == 5);
}

TEST_CASE("ask digit mirrors bid digit for every residue") {
  for (std::int64_t p = 100000; p < 100200; ++p) {
    const int bid = last_digit(TickPrice{p}, Side::Bid);
    CHECK(last_digit(TickPrice{p}, Side::Ask) == (10 - bid) % 10);
  }
}

TEST_CASE("relative tick of the two instruments") {
  InstrumentSpec eur{"EURUSD", 1e-5, 10, 1.35, 250};
  InstrumentSpec jpy{"USDJPY", 1e-3, 10, 82.0, 250};
  CHECK(relative_tick(eur) == doctest::Approx(7.4e-6).epsilon(0.01));
  CHECK(relative_tick(jpy) == doctest::Approx(1.2e-5).epsilon(0.03));
  CHECK(relative_tick(jpy) / relative_tick(eur) == doctest::Approx(1.7).epsilon(0.03));
}

TEST_CASE("instrument validation names the field") {
  InstrumentSpec spec;
  spec.pip_in_ticks = 5;
  try {
    spec.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "instrument.pip_in_ticks");
  }
  spec = InstrumentSpec{};
  spec.tick_value = 0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = InstrumentSpec{};
  spec.min_quote_life_ms = -1;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  CHECK_NOTHROW(InstrumentSpec{}.validate());
}

TEST_CASE("decimal price formatting") {
  InstrumentSpec eur;
  CHECK(format_price(TickPrice{135012}, eur) == "1.35012");
  InstrumentSpec jpy{"USDJPY", 1e-3, 10, 82.0, 250};
  CHECK(format_price(TickPrice{82105}, jpy) == "82.105");
}
