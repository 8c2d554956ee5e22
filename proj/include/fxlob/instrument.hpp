#pragma once

#include <cstdint>
#include <string>

#include "fxlob/types.hpp"

namespace fxlob {

struct InstrumentSpec {
  std::string name{"EURUSD"};
  double tick_value{1e-5};       // exchange-rate units per tick
  std::int64_t pip_in_ticks{10}; // 10 after decimalization, 1 before
  double reference_price{1.35};
  TimeMs min_quote_life_ms{250};

  bool decimal() const noexcept { return pip_in_ticks == 10; }

  // Throws ConfigError naming the first invalid field.
  void validate() const;
};

// tick / price, the tick size relative to the exchange rate.
double relative_tick(const InstrumentSpec& spec);

// Rightmost price digit under the side convention: on the bid it is the raw
// last digit; on the ask it is the number of ticks down from the next
// integer price, so integer prices read 0 on both sides and a one-tick
// improvement of an integer quote reads 1 on both sides.
constexpr int last_digit(TickPrice price, Side side) noexcept {
  const int raw = static_cast<int>(((price.ticks % 10) + 10) % 10);
  return side == Side::Bid ? raw : (10 - raw) % 10;
}

// Decimal rendering, e.g. 135012 ticks at 1e-5 -> "1.35012".
std::string format_price(TickPrice price, const InstrumentSpec& spec);

}  // namespace fxlob
