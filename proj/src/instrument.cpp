#include "fxlob/instrument.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fxlob/errors.hpp"

namespace fxlob {

void InstrumentSpec::validate() const {
  if (!(tick_value > 0.0) || !std::isfinite(tick_value))
    throw ConfigError("instrument.tick_value", "must be > 0");
  if (pip_in_ticks != 1 && pip_in_ticks != 10)
    throw ConfigError("instrument.pip_in_ticks", "must be 1 or 10");
  if (!(reference_price > 0.0) || !std::isfinite(reference_price))
    throw ConfigError("instrument.reference_price", "must be > 0");
  if (min_quote_life_ms < 0) throw ConfigError("instrument.min_quote_life_ms", "must be >= 0");
}

double relative_tick(const InstrumentSpec& spec) {
  if (!(spec.reference_price > 0.0))
    throw ConfigError("instrument.reference_price", "must be > 0");
  return spec.tick_value / spec.reference_price;
}

std::string format_price(TickPrice price, const InstrumentSpec& spec) {
  const int decimals = std::max(0, static_cast<int>(std::lround(-std::log10(spec.tick_value))));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, static_cast<double>(price.ticks) * spec.tick_value);
  return buf;
}

}  // namespace fxlob
