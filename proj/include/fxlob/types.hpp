#pragma once

#include <compare>
#include <cstdint>
#include <string_view>

namespace fxlob {

enum class Side : std::uint8_t { Bid, Ask };

constexpr Side opposite(Side s) noexcept { return s == Side::Bid ? Side::Ask : Side::Bid; }

constexpr std::string_view to_string(Side s) noexcept { return s == Side::Bid ? "B" : "A"; }

enum class TraderClass : std::uint8_t { Manual, Algo };

constexpr std::string_view to_string(TraderClass c) noexcept {
  return c == TraderClass::Manual ? "M" : "A";
}

using OrderId = std::uint64_t;
using Volume = std::int64_t;     // whole millions of base currency
using TimeMs = std::int64_t;     // session clock, milliseconds
using SliceIndex = std::int64_t; // 0.1 s time-slice

inline constexpr TimeMs kSliceMs = 100;
inline constexpr std::size_t kVisibleDepth = 10;

constexpr SliceIndex slice_of(TimeMs t) noexcept { return t / kSliceMs; }

// Price as an integer number of instrument ticks. The decimal exchange rate
// only appears when formatting for humans.
struct TickPrice {
  std::int64_t ticks{0};

  constexpr TickPrice() = default;
  constexpr explicit TickPrice(std::int64_t t) noexcept : ticks(t) {}

  constexpr auto operator<=>(const TickPrice&) const = default;

  constexpr TickPrice operator+(std::int64_t d) const noexcept { return TickPrice{ticks + d}; }
  constexpr TickPrice operator-(std::int64_t d) const noexcept { return TickPrice{ticks - d}; }
  constexpr std::int64_t operator-(TickPrice o) const noexcept { return ticks - o.ticks; }
};

// Kinds of visible book changes. Shared by the engine's ground-truth effect
// log and the reconstruction output so the two can be compared directly.
enum class FlowKind : std::uint8_t { LimitOrder, Cancel, Trade };

constexpr std::string_view to_string(FlowKind k) noexcept {
  switch (k) {
    case FlowKind::LimitOrder: return "L";
    case FlowKind::Cancel: return "C";
    case FlowKind::Trade: return "T";
  }
  return "?";
}

}  // namespace fxlob
