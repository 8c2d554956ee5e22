#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fxlob/book.hpp"
#include "fxlob/depth.hpp"
#include "fxlob/distributions.hpp"
#include "fxlob/instrument.hpp"
#include "fxlob/rng.hpp"
#include "fxlob/types.hpp"

namespace fxlob::flow {

enum class EventKind : std::uint8_t { LimitOrder, Cancel, MarketOrder };

constexpr std::string_view to_string(EventKind k) noexcept {
  switch (k) {
    case EventKind::LimitOrder: return "L";
    case EventKind::Cancel: return "C";
    case EventKind::MarketOrder: return "M";
  }
  return "?";
}

// The six arrival types, indexed kind * 2 + side. A market order's side is
// the book side it consumes, so "market_ask" is buyer initiated.
inline constexpr std::size_t kEventTypes = 6;
using TypeArray = std::array<double, kEventTypes>;
using TypeMatrix = std::array<TypeArray, kEventTypes>;

constexpr std::size_t type_index(EventKind k, Side s) noexcept {
  return static_cast<std::size_t>(k) * 2 + static_cast<std::size_t>(s);
}
constexpr EventKind kind_of(std::size_t type) noexcept { return static_cast<EventKind>(type / 2); }
constexpr Side side_of(std::size_t type) noexcept { return static_cast<Side>(type % 2); }
std::string_view type_name(std::size_t type) noexcept;

// +1 for buying interest (bids, cancels of bids, buyer-initiated market
// orders), -1 otherwise.
constexpr int sign_of(EventKind k, Side s) noexcept {
  if (k == EventKind::MarketOrder) return s == Side::Ask ? 1 : -1;
  return s == Side::Bid ? 1 : -1;
}

struct AgentMix {
  double manual_fraction{0.5};
  // Share of manual limit prices half a pip behind the integer grid price.
  double half_pip_mass{0.0};
  // Probability that a manual order goes one further pip away from the spread.
  double manual_depth_continue{0.5};
  double algo_step_ahead_prob{0.5};
  double algo_join_prob{0.2};
  double algo_inside_prob{0.05};
  // Mean distance, in ticks, behind the best for algo orders posted deeper.
  double algo_depth_mean{5.0};
  // Step-ahead orders that are withdrawn again shortly after posting.
  double flash_prob{0.0};
  TimeMs flash_max_delay_ms{500};

  void validate() const;
};

struct ArrivalModel {
  TypeArray baseline_rates{};  // events per second
  // excitation[i][j]: jump of type i's intensity after a type j event.
  TypeMatrix excitation{};
  double decay_rate{1.0};  // per second
  // When > 0, cancel intensity on a side is multiplied by
  // resting orders / cancel_reference_orders.
  double cancel_reference_orders{0.0};

  double spectral_radius() const;  // of excitation / decay_rate
  void validate() const;
};

struct VolumeModel {
  double manual_alpha{2.6};
  double round_mass{0.15};
  std::vector<std::int64_t> round_values{5, 10, 15, 20, 25, 50};
  double round_weight_decay{0.6};  // weight of round_values[k] proportional to decay^k
  double algo_unit_share{0.8};     // P(v = 1) of the geometric algo law
  std::int64_t max_volume{200};

  void validate() const;
};

// Preferred side of each event class: a two-state chain that may switch at
// epochs one timescale apart (random phase). With switch_prob = 1/2 the
// state carries no information beyond one timescale.
struct SignPersistence {
  double market_order_timescale_s{120.0};
  double limit_order_timescale_s{300.0};  // also used for cancels
  // Strength of the preferred-side modulation per event class, in [0, 1).
  double market_bias{0.0};
  double limit_bias{0.0};
  double cancel_bias{0.0};
  double switch_prob{0.5};

  void validate() const;
};

struct SessionConfig {
  InstrumentSpec instrument;
  std::int64_t seed_price_ticks{135000};
  AgentMix agents;
  ArrivalModel arrivals;
  VolumeModel volumes;
  SignPersistence signs;
  double duration_s{36000.0};
  std::uint64_t seed{1};

  void validate() const;
};

SessionConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SessionConfig& cfg);
SessionConfig load_config(const std::filesystem::path& path);

struct GroundTruthEvent {
  TimeMs time{0};
  EventKind kind{EventKind::LimitOrder};
  Side side{Side::Bid};
  std::optional<TickPrice> price;  // absent for market orders
  Volume volume{0};
  TraderClass trader_class{TraderClass::Algo};

  friend bool operator==(const GroundTruthEvent&, const GroundTruthEvent&) = default;
};

// Mutually exciting arrivals of the six event types, simulated by Ogata
// thinning. The preferred side of each event class tilts the bid/ask split
// of that class's intensity.
class ArrivalProcess {
 public:
  ArrivalProcess(const ArrivalModel& model, const SignPersistence& signs, Rng& rng);

  struct Arrival {
    double time;
    std::size_t type;
  };

  // Next event strictly before `horizon`; otherwise advances the clock to
  // `horizon` and returns nothing. `gain` scales each type's intensity and
  // must stay fixed until the next call.
  std::optional<Arrival> next(Rng& rng, double horizon, const TypeArray& gain);
  std::optional<Arrival> next(Rng& rng, double horizon) { return next(rng, horizon, unit_gain()); }

  double now() const noexcept { return t_; }
  double intensity(std::size_t type, const TypeArray& gain) const noexcept;
  int preferred_sign(EventKind k) const noexcept { return state_[static_cast<std::size_t>(k)]; }

  static const TypeArray& unit_gain() noexcept;

 private:
  void decay_to(double t) noexcept;

  ArrivalModel model_;
  std::array<double, 3> bias_{};
  std::array<double, 3> epoch_{};
  double switch_prob_{0.5};
  std::array<int, 3> state_{1, 1, 1};
  std::array<double, 3> next_flip_{};
  TypeArray excitation_state_{};
  double t_{0.0};
};

struct OrderDraw {
  GroundTruthEvent event;
  std::optional<Order> order;           // limit orders
  std::optional<OrderId> cancel_target;  // cancels
  bool step_ahead{false};
  bool resampled{false};  // a cancel with no eligible target turned limit
};

// Price, volume and target choices of the two trader populations.
class Agents {
 public:
  Agents(const SessionConfig& cfg);

  TraderClass draw_class(Rng& rng) const;
  Volume draw_volume(TraderClass cls, Rng& rng) const;
  TickPrice manual_price(Side side, const Book& book, Rng& rng) const;
  // `stepped` reports a one-tick improvement of a round best quote.
  TickPrice algo_price(Side side, const Book& book, Rng& rng, bool& stepped) const;

  OrderDraw draw_order(EventKind kind, Side side, const Book& book, TimeMs now, OrderId id,
                       Rng& rng) const;

 private:
  TickPrice own_reference(Side side, const Book& book) const;
  TickPrice opposite_reference(Side side, const Book& book) const;
  bool round_price(TickPrice p) const noexcept;

  InstrumentSpec instrument_;
  AgentMix mix_;
  VolumeModel volumes_;
  std::int64_t seed_price_;
  DiscretePowerLaw manual_law_;
  Geometric1 algo_law_;
  std::vector<double> round_cdf_;
};

struct SessionCounts {
  std::array<std::int64_t, kEventTypes> by_type{};
  std::int64_t resampled_cancels{0};
  std::int64_t exhausted_markets{0};
  std::int64_t deferred_cancels{0};
  std::int64_t flash_cancels{0};
  std::int64_t step_ahead_orders{0};
  std::int64_t trades{0};
  Volume manual_limit_volume{0};
  Volume algo_limit_volume{0};
};

struct Session {
  InstrumentSpec instrument;
  SliceIndex total_slices{0};
  std::vector<GroundTruthEvent> events;
  std::vector<Fill> trades;
  SnapshotSeries snapshots;
  std::vector<BookEffect> effects;  // time-ordered visible book changes
  SessionCounts counts;
};

Session generate_session(const SessionConfig& cfg);
Session generate_session(const SessionConfig& cfg, double duration_s, std::uint64_t seed);

// Sparse sessions for exact-reconstruction checks: at most one order per
// time-slice, no cancel deferral, and never more than `max_levels` prices
// on a side, so nothing the feed loses can matter.
struct QuietConfig {
  SliceIndex slices{3000};
  double activity{0.5};
  std::int64_t seed_price_ticks{135000};
  std::size_t max_levels{kVisibleDepth};
  std::uint64_t seed{1};
};

Session generate_quiet_session(const QuietConfig& cfg);

}  // namespace fxlob::flow
