#include <cmath>
#include <fstream>
#include <initializer_list>
#include <span>

#include <Eigen/Eigenvalues>

#include "fxlob/errors.hpp"
#include "fxlob/flowgen.hpp"

namespace fxlob::flow {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, kEventTypes> kTypeNames = {
    "limit_bid", "limit_ask", "cancel_bid", "cancel_ask", "market_bid", "market_ask"};

void require_probability(double p, const char* field) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(field, "must be a probability in [0, 1]");
}

// Typed access to one JSON object with dotted-path error messages.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  bool has(const char* key) const { return j_.contains(key); }

  template <class T>
  T get(const char* key, T fallback) const {
    if (!j_.contains(key)) return fallback;
    return as<T>(j_.at(key), field(key));
  }

  template <class T>
  T require(const char* key) const {
    if (!j_.contains(key)) throw ConfigError(field(key), "missing");
    return as<T>(j_.at(key), field(key));
  }

  Section sub(const char* key) const {
    if (!j_.contains(key)) throw ConfigError(field(key), "missing");
    return Section(j_.at(key), field(key));
  }

  const json& raw(const char* key) const { return j_.at(key); }

  void only(std::initializer_list<std::string_view> known) const {
    only(std::span<const std::string_view>(known.begin(), known.size()));
  }

  void only(std::span<const std::string_view> known) const {
    for (const auto& [k, v] : j_.items()) {
      bool ok = false;
      for (auto name : known) ok = ok || name == k;
      if (!ok) throw ConfigError(field(k), "unknown key");
    }
  }

  template <class T>
  static T as(const json& v, const std::string& where) {
    try {
      return v.get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where, "wrong type");
    }
  }

 private:
  const json& j_;
  std::string path_;
};

}  // namespace

std::string_view type_name(std::size_t type) noexcept {
  return type < kEventTypes ? kTypeNames[type] : std::string_view{"?"};
}

void AgentMix::validate() const {
  require_probability(manual_fraction, "agents.manual_fraction");
  require_probability(half_pip_mass, "agents.half_pip_mass");
  if (!(manual_depth_continue >= 0.0 && manual_depth_continue < 1.0))
    throw ConfigError("agents.manual_depth_continue", "must be in [0, 1)");
  require_probability(algo_step_ahead_prob, "agents.algo_step_ahead_prob");
  require_probability(algo_join_prob, "agents.algo_join_prob");
  require_probability(algo_inside_prob, "agents.algo_inside_prob");
  if (algo_join_prob + algo_inside_prob > 1.0)
    throw ConfigError("agents.algo_inside_prob", "algo_join_prob + algo_inside_prob exceeds 1");
  if (!(algo_depth_mean >= 1.0)) throw ConfigError("agents.algo_depth_mean", "must be >= 1");
  require_probability(flash_prob, "agents.flash_prob");
  if (flash_max_delay_ms < 0) throw ConfigError("agents.flash_max_delay_ms", "must be >= 0");
}

double ArrivalModel::spectral_radius() const {
  Eigen::Matrix<double, 6, 6> m;
  for (std::size_t i = 0; i < kEventTypes; ++i)
    for (std::size_t j = 0; j < kEventTypes; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = excitation[i][j] / decay_rate;
  Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> solver(m, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

void ArrivalModel::validate() const {
  for (std::size_t i = 0; i < kEventTypes; ++i) {
    const std::string name(type_name(i));
    if (!(baseline_rates[i] >= 0.0) || !std::isfinite(baseline_rates[i]))
      throw ConfigError("arrivals.baseline_rates." + name, "must be >= 0");
    for (std::size_t j = 0; j < kEventTypes; ++j)
      if (!(excitation[i][j] >= 0.0) || !std::isfinite(excitation[i][j]))
        throw ConfigError("arrivals.excitation[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                          "must be >= 0");
  }
  if (!(decay_rate > 0.0)) throw ConfigError("arrivals.decay_rate", "must be > 0");
  if (!(cancel_reference_orders >= 0.0))
    throw ConfigError("arrivals.cancel_reference_orders", "must be >= 0");
  const double rho = spectral_radius();
  if (!(rho < 1.0))
    throw ConfigError("arrivals.excitation",
                      "non-stationary: spectral radius of excitation/decay_rate is " +
                          std::to_string(rho) + " (must be < 1)");
}

void VolumeModel::validate() const {
  if (!(manual_alpha > 1.0)) throw ConfigError("volumes.manual_alpha", "must be > 1");
  require_probability(round_mass, "volumes.round_mass");
  if (round_mass > 0.0 && round_values.empty())
    throw ConfigError("volumes.round_values", "must be nonempty when round_mass > 0");
  for (auto v : round_values)
    if (v < 1) throw ConfigError("volumes.round_values", "volumes must be >= 1");
  if (!(round_weight_decay > 0.0 && round_weight_decay <= 1.0))
    throw ConfigError("volumes.round_weight_decay", "must be in (0, 1]");
  if (!(algo_unit_share > 0.0 && algo_unit_share <= 1.0))
    throw ConfigError("volumes.algo_unit_share", "must be in (0, 1]");
  if (max_volume < 1) throw ConfigError("volumes.max_volume", "must be >= 1");
}

void SignPersistence::validate() const {
  if (!(market_order_timescale_s > 0.0))
    throw ConfigError("signs.market_order_timescale_s", "must be > 0");
  if (!(limit_order_timescale_s > 0.0))
    throw ConfigError("signs.limit_order_timescale_s", "must be > 0");
  require_probability(switch_prob, "signs.switch_prob");
  for (auto [v, name] : {std::pair{market_bias, "signs.market_bias"},
                         std::pair{limit_bias, "signs.limit_bias"},
                         std::pair{cancel_bias, "signs.cancel_bias"}})
    if (!(v >= 0.0 && v < 1.0)) throw ConfigError(name, "must be in [0, 1)");
}

void SessionConfig::validate() const {
  instrument.validate();
  if (seed_price_ticks < 1000) throw ConfigError("seed_price_ticks", "must be >= 1000");
  agents.validate();
  arrivals.validate();
  volumes.validate();
  signs.validate();
  if (!(duration_s > 0.0) || !std::isfinite(duration_s))
    throw ConfigError("session.duration_s", "must be > 0");
}

SessionConfig config_from_json(const json& j) {
  SessionConfig cfg;
  Section root(j, "");
  root.only({"version", "description", "instrument", "seed_price_ticks", "agents", "arrivals",
             "volumes", "signs", "session", "outputs"});
  if (root.get<int>("version", 1) != 1) throw ConfigError("version", "unsupported config version");

  {
    Section s = root.sub("instrument");
    s.only({"name", "tick_value", "pip_in_ticks", "reference_price", "min_quote_life_ms"});
    auto& in = cfg.instrument;
    in.name = s.get<std::string>("name", in.name);
    in.tick_value = s.require<double>("tick_value");
    in.pip_in_ticks = s.require<std::int64_t>("pip_in_ticks");
    in.reference_price = s.require<double>("reference_price");
    in.min_quote_life_ms = s.get<TimeMs>("min_quote_life_ms", in.min_quote_life_ms);
  }
  cfg.seed_price_ticks = root.require<std::int64_t>("seed_price_ticks");

  if (root.has("agents")) {
    Section s = root.sub("agents");
    s.only({"manual_fraction", "manual_grid", "half_pip_mass", "manual_depth_continue",
            "algo_step_ahead_prob", "algo_join_prob", "algo_inside_prob", "algo_depth_mean",
            "flash_prob", "flash_max_delay_ms"});
    auto& a = cfg.agents;
    const auto grid = s.get<std::string>("manual_grid", "pip");
    if (grid != "pip") throw ConfigError(s.field("manual_grid"), "only \"pip\" is supported");
    a.manual_fraction = s.get("manual_fraction", a.manual_fraction);
    a.half_pip_mass = s.get("half_pip_mass", a.half_pip_mass);
    a.manual_depth_continue = s.get("manual_depth_continue", a.manual_depth_continue);
    a.algo_step_ahead_prob = s.get("algo_step_ahead_prob", a.algo_step_ahead_prob);
    a.algo_join_prob = s.get("algo_join_prob", a.algo_join_prob);
    a.algo_inside_prob = s.get("algo_inside_prob", a.algo_inside_prob);
    a.algo_depth_mean = s.get("algo_depth_mean", a.algo_depth_mean);
    a.flash_prob = s.get("flash_prob", a.flash_prob);
    a.flash_max_delay_ms = s.get("flash_max_delay_ms", a.flash_max_delay_ms);
  }

  {
    Section s = root.sub("arrivals");
    s.only({"baseline_rates", "excitation", "decay_rate", "cancel_reference_orders"});
    auto& a = cfg.arrivals;
    Section rates = s.sub("baseline_rates");
    for (std::size_t i = 0; i < kEventTypes; ++i)
      a.baseline_rates[i] = rates.require<double>(std::string(type_name(i)).c_str());
    rates.only(kTypeNames);
    if (s.has("excitation")) {
      const json& m = s.raw("excitation");
      if (!m.is_array() || m.size() != kEventTypes)
        throw ConfigError("arrivals.excitation", "must be a 6x6 array");
      for (std::size_t i = 0; i < kEventTypes; ++i) {
        if (!m[i].is_array() || m[i].size() != kEventTypes)
          throw ConfigError("arrivals.excitation[" + std::to_string(i) + "]", "must have 6 entries");
        for (std::size_t k = 0; k < kEventTypes; ++k)
          a.excitation[i][k] = Section::as<double>(
              m[i][k], "arrivals.excitation[" + std::to_string(i) + "][" + std::to_string(k) + "]");
      }
    }
    a.decay_rate = s.get("decay_rate", a.decay_rate);
    a.cancel_reference_orders = s.get("cancel_reference_orders", a.cancel_reference_orders);
  }

  if (root.has("volumes")) {
    Section s = root.sub("volumes");
    s.only({"manual_alpha", "round_mass", "round_values", "round_weight_decay", "algo_unit_share",
            "max_volume"});
    auto& v = cfg.volumes;
    v.manual_alpha = s.get("manual_alpha", v.manual_alpha);
    v.round_mass = s.get("round_mass", v.round_mass);
    v.round_values = s.get("round_values", v.round_values);
    v.round_weight_decay = s.get("round_weight_decay", v.round_weight_decay);
    v.algo_unit_share = s.get("algo_unit_share", v.algo_unit_share);
    v.max_volume = s.get("max_volume", v.max_volume);
  }

  if (root.has("signs")) {
    Section s = root.sub("signs");
    s.only({"market_order_timescale_s", "limit_order_timescale_s", "market_bias", "limit_bias",
            "cancel_bias", "switch_prob"});
    auto& g = cfg.signs;
    g.market_order_timescale_s = s.get("market_order_timescale_s", g.market_order_timescale_s);
    g.limit_order_timescale_s = s.get("limit_order_timescale_s", g.limit_order_timescale_s);
    g.market_bias = s.get("market_bias", g.market_bias);
    g.limit_bias = s.get("limit_bias", g.limit_bias);
    g.cancel_bias = s.get("cancel_bias", g.cancel_bias);
    g.switch_prob = s.get("switch_prob", g.switch_prob);
  }

  if (root.has("session")) {
    Section s = root.sub("session");
    s.only({"duration_s", "seed"});
    cfg.duration_s = s.get("duration_s", cfg.duration_s);
    cfg.seed = s.get("seed", cfg.seed);
  }

  cfg.validate();
  return cfg;
}

json config_to_json(const SessionConfig& cfg) {
  json j;
  j["version"] = 1;
  j["instrument"] = {{"name", cfg.instrument.name},
                     {"tick_value", cfg.instrument.tick_value},
                     {"pip_in_ticks", cfg.instrument.pip_in_ticks},
                     {"reference_price", cfg.instrument.reference_price},
                     {"min_quote_life_ms", cfg.instrument.min_quote_life_ms}};
  j["seed_price_ticks"] = cfg.seed_price_ticks;
  const auto& a = cfg.agents;
  j["agents"] = {{"manual_fraction", a.manual_fraction},
                 {"manual_grid", "pip"},
                 {"half_pip_mass", a.half_pip_mass},
                 {"manual_depth_continue", a.manual_depth_continue},
                 {"algo_step_ahead_prob", a.algo_step_ahead_prob},
                 {"algo_join_prob", a.algo_join_prob},
                 {"algo_inside_prob", a.algo_inside_prob},
                 {"algo_depth_mean", a.algo_depth_mean},
                 {"flash_prob", a.flash_prob},
                 {"flash_max_delay_ms", a.flash_max_delay_ms}};
  json rates = json::object();
  for (std::size_t i = 0; i < kEventTypes; ++i)
    rates[std::string(type_name(i))] = cfg.arrivals.baseline_rates[i];
  json exc = json::array();
  for (const auto& row : cfg.arrivals.excitation) exc.push_back(row);
  j["arrivals"] = {{"baseline_rates", rates},
                   {"excitation", exc},
                   {"decay_rate", cfg.arrivals.decay_rate},
                   {"cancel_reference_orders", cfg.arrivals.cancel_reference_orders}};
  const auto& v = cfg.volumes;
  j["volumes"] = {{"manual_alpha", v.manual_alpha},       {"round_mass", v.round_mass},
                  {"round_values", v.round_values},       {"round_weight_decay", v.round_weight_decay},
                  {"algo_unit_share", v.algo_unit_share}, {"max_volume", v.max_volume}};
  const auto& g = cfg.signs;
  j["signs"] = {{"market_order_timescale_s", g.market_order_timescale_s},
                {"limit_order_timescale_s", g.limit_order_timescale_s},
                {"market_bias", g.market_bias},
                {"limit_bias", g.limit_bias},
                {"cancel_bias", g.cancel_bias},
                {"switch_prob", g.switch_prob}};
  j["session"] = {{"duration_s", cfg.duration_s}, {"seed", cfg.seed}};
  return j;
}

SessionConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace fxlob::flow
