#include "fxlob/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fxlob/flowgen.hpp"
#include "fxlob/session_io.hpp"

namespace fxlob::report {

using namespace analytics;

AnalysisInput truth_input(const flow::Session& s) {
  return {truth_flow(s), s.snapshots, s.total_slices * kSliceMs};
}

std::vector<FlowEvent> inferred_flow(std::span<const recon::InferredEvent> events) {
  std::vector<FlowEvent> out;
  out.reserve(events.size());
  for (const auto& e : events) out.push_back({e.slice * kSliceMs, e.kind, e.side, e.price, e.volume});
  return out;
}

AnalysisInput inferred_input(std::span<const recon::InferredEvent> events, SnapshotSeries snapshots) {
  const TimeMs duration = snapshots.total_slices() * kSliceMs;
  return {inferred_flow(events), std::move(snapshots), duration};
}

// ---------------------------------------------------------------------------
// Tables

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // no negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace {

std::string num(double v) { return format_number(v); }
std::string num(std::int64_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }
std::string num(std::size_t v) { return std::to_string(v); }
std::string yes_no(bool b) { return b ? "1" : "0"; }

std::optional<double> parse_number(const std::string& s) {
  if (s == "nan" || s == "inf" || s == "-inf" || s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

Table digits_table(const std::string& name, const DigitDistribution& d) {
  Table t{name, {"digit", "count", "frequency", "half_width"}, 1, {}};
  for (int i = 0; i < 10; ++i)
    t.rows.push_back({num(i), num(d.counts[static_cast<std::size_t>(i)]), num(d.frequency(i)), num(d.half_width(i))});
  return t;
}

std::vector<double> shape_or_zero(const SnapshotSeries& s, Side side, std::int64_t max_distance) {
  try {
    return average_shape(s, side, max_distance);
  } catch (const std::invalid_argument&) {
    return std::vector<double>(static_cast<std::size_t>(max_distance + 1), 0.0);
  }
}

Table histogram_table(const std::string& name, const std::string& key, const Histogram& h) {
  Table t{name, {key, "count", "share"}, 1, {}};
  for (const auto& [k, n] : h.counts) t.rows.push_back({num(k), num(n), num(h.share(k))});
  return t;
}

constexpr SliceIndex kOccupancyPeriod = 1;  // every 0.1 s
constexpr SliceIndex kSpreadPeriod = 10;    // every second
constexpr std::size_t kCountLags = 60;
constexpr std::size_t kSignLags = 120;

}  // namespace

std::string Table::csv() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return out;
}

const std::vector<std::string>& statistic_names() {
  static const std::vector<std::string> names{
      "trade_digits", "limit_digits", "chi2",        "occupancy",   "shape",
      "gap",          "spread",       "placement",   "placement_conditional",
      "correlation",  "count_acf",    "sign_acf",    "volumes",     "volume_fit",
      "typology"};
  return names;
}

Table compute(const std::string& statistic, const AnalysisInput& in) {
  const auto& ev = in.events;
  const auto& snaps = in.snapshots;

  if (statistic == "trade_digits") return digits_table(statistic, digit_distribution(trade_prices(ev)));
  if (statistic == "limit_digits") return digits_table(statistic, digit_distribution(limit_prices(ev)));

  if (statistic == "chi2") {
    Table t{statistic, {"sample", "n", "statistic", "dof", "p_value", "reject_1pct", "low_sample"}, 1, {}};
    const auto occ = barrier_occupancy(snaps, kOccupancyPeriod);
    const std::pair<const char*, DigitDistribution> samples[] = {
        {"trade", digit_distribution(trade_prices(ev))},
        {"limit", digit_distribution(limit_prices(ev))},
        {"occupancy_bid", occ.bid},
        {"occupancy_ask", occ.ask}};
    for (const auto& [name, d] : samples) {
      const auto r = chi2_uniformity(d.counts);
      t.rows.push_back({name, num(d.n), num(r.statistic), num(r.dof), num(r.p_value), yes_no(r.reject),
                        yes_no(r.low_sample)});
    }
    return t;
  }

  if (statistic == "occupancy") {
    const auto occ = barrier_occupancy(snaps, kOccupancyPeriod);
    Table t{statistic, {"digit", "bid_share", "ask_share"}, 1, {}};
    for (int i = 0; i < 10; ++i) t.rows.push_back({num(i), num(occ.bid.frequency(i)), num(occ.ask.frequency(i))});
    return t;
  }

  if (statistic == "shape") {
    const auto b = shape_or_zero(snaps, Side::Bid, 30);
    const auto a = shape_or_zero(snaps, Side::Ask, 30);
    Table t{statistic, {"distance", "bid_volume", "ask_volume"}, 1, {}};
    for (std::size_t k = 0; k < b.size(); ++k) t.rows.push_back({num(k), num(b[k]), num(a[k])});
    return t;
  }

  if (statistic == "gap") {
    const auto b = average_gap(snaps, Side::Bid);
    const auto a = average_gap(snaps, Side::Ask);
    Table t{statistic, {"level", "bid_gap", "ask_gap", "bid_samples", "ask_samples"}, 1, {}};
    for (std::size_t k = 0; k < b.mean.size(); ++k)
      t.rows.push_back({num(k + 1), num(b.mean[k]), num(a.mean[k]), num(b.samples[k]), num(a.samples[k])});
    return t;
  }

  if (statistic == "spread") return histogram_table(statistic, "spread", spread_distribution(snaps, kSpreadPeriod));

  if (statistic == "placement") return histogram_table(statistic, "delta", placement_distribution(ev, snaps).delta);

  if (statistic == "placement_conditional") {
    const auto c = placement_conditional(ev, snaps);
    Table t{statistic, {"delta"}, 1, {}};
    for (int d = 0; d < 10; ++d) t.columns.push_back("share_digit" + std::to_string(d));
    for (std::int64_t delta = -5; delta <= 30; ++delta) {
      std::vector<std::string> row{num(delta)};
      for (const auto& h : c.by_digit) row.push_back(num(h.share(delta)));
      t.rows.push_back(std::move(row));
    }
    return t;
  }

  if (statistic == "correlation" || statistic == "count_acf") {
    const auto st = event_count_correlations(ev, in.duration_ms, 10.0, kCountLags);
    if (statistic == "correlation") {
      Table t{statistic, {"type"}, 1, {}};
      for (std::size_t j = 0; j < kFlowTypes; ++j) t.columns.push_back(flow_type_name(j));
      for (std::size_t i = 0; i < kFlowTypes; ++i) {
        std::vector<std::string> row{flow_type_name(i)};
        for (std::size_t j = 0; j < kFlowTypes; ++j) row.push_back(num(st.correlation[i][j]));
        t.rows.push_back(std::move(row));
      }
      return t;
    }
    Table t{statistic, {"lag"}, 1, {}};
    for (std::size_t j = 0; j < kFlowTypes; ++j) t.columns.push_back("acf_" + flow_type_name(j));
    for (std::size_t j = 0; j < kFlowTypes; ++j) t.columns.push_back("cumulative_" + flow_type_name(j));
    t.columns.push_back("band");
    for (std::size_t k = 0; k <= kCountLags; ++k) {
      std::vector<std::string> row{num(k)};
      for (std::size_t j = 0; j < kFlowTypes; ++j) row.push_back(num(st.acf[j][k]));
      for (std::size_t j = 0; j < kFlowTypes; ++j) row.push_back(num(st.cumulative_acf[j][k]));
      row.push_back(num(st.band));
      t.rows.push_back(std::move(row));
    }
    return t;
  }

  if (statistic == "sign_acf") {
    const auto st = sign_memory(ev, in.duration_ms, 10.0, kSignLags);
    Table t{statistic, {"lag", "minutes", "market", "limit", "band"}, 1, {}};
    for (std::size_t k = 0; k <= kSignLags; ++k)
      t.rows.push_back({num(k), num(static_cast<double>(k) * st.window_s / 60.0), num(st.market.acf[k]),
                        num(st.limit.acf[k]), num(st.market.band)});
    return t;
  }

  if (statistic == "volumes" || statistic == "volume_fit") {
    const auto v = volume_split_fit(ev);
    if (statistic == "volumes") {
      Table t{statistic, {"volume", "integer_count", "decimal_count"}, 1, {}};
      std::int64_t max_v = 0;
      for (const auto* h : {&v.integer_volumes, &v.decimal_volumes})
        if (!h->counts.empty()) max_v = std::max(max_v, h->counts.rbegin()->first);
      auto at = [](const Histogram& h, std::int64_t k) {
        const auto it = h.counts.find(k);
        return it == h.counts.end() ? std::int64_t{0} : it->second;
      };
      for (std::int64_t k = 1; k <= max_v; ++k)
        t.rows.push_back({num(k), num(at(v.integer_volumes, k)), num(at(v.decimal_volumes, k))});
      return t;
    }
    std::string peaks;
    for (auto p : v.peaks) peaks += (peaks.empty() ? "" : " ") + std::to_string(p);
    Table t{statistic, {"quantity", "value"}, 1, {}};
    t.rows = {{"integer_alpha", num(v.integer_fit.alpha)},
              {"integer_xmin", num(v.integer_fit.xmin)},
              {"integer_n", num(v.integer_fit.n_tail)},
              {"integer_ks_distance", num(v.integer_fit.ks_distance)},
              {"integer_low_sample", yes_no(v.integer_fit.low_sample)},
              {"decimal_mean", num(v.decimal_fit.mean)},
              {"decimal_rate", num(v.decimal_fit.rate)},
              {"decimal_n", num(v.decimal_fit.n)},
              {"round_peaks", peaks}};
    return t;
  }

  if (statistic == "typology") {
    Table t{statistic, {"spread", "configuration", "count", "share"}, 2, {}};
    for (std::int64_t spread : {8, 9}) {
      const auto ty = spread_typology(snaps, spread, kSpreadPeriod);
      for (const auto& p : spread_configurations(spread)) {
        const auto it = ty.configurations.find(p);
        const std::int64_t n = it == ty.configurations.end() ? 0 : it->second;
        t.rows.push_back({num(spread), std::to_string(p.bid_digit) + "-" + std::to_string(p.ask_digit), num(n),
                          num(ty.share(p))});
      }
      t.rows.push_back({num(spread), "integer", num(ty.integer_samples), num(ty.integer_share())});
    }
    return t;
  }

  std::string valid;
  for (const auto& n : statistic_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown statistic '" + statistic + "'; valid: all, " + valid);
}

Table compare(const Table& a, const Table& b, const std::string& label_a, const std::string& label_b) {
  if (a.columns != b.columns || a.key_columns != b.key_columns)
    throw std::invalid_argument("compare: tables '" + a.name + "' and '" + b.name + "' differ in layout");
  const std::size_t keys = a.key_columns;
  Table t{a.name, {}, keys, {}};
  for (std::size_t i = 0; i < keys; ++i) t.columns.push_back(a.columns[i]);
  for (std::size_t i = keys; i < a.columns.size(); ++i) {
    t.columns.push_back(a.columns[i] + "_" + label_a);
    t.columns.push_back(a.columns[i] + "_" + label_b);
    t.columns.push_back(a.columns[i] + "_diff");
  }

  using Key = std::vector<std::string>;
  auto key_of = [keys](const std::vector<std::string>& r) { return Key(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(keys)); };
  std::map<Key, const std::vector<std::string>*> in_b;
  for (const auto& r : b.rows) in_b[key_of(r)] = &r;

  // rows of a in order, then rows only b has, keeping b's order
  std::vector<Key> order;
  std::map<Key, bool> seen;
  for (const auto& r : a.rows) {
    order.push_back(key_of(r));
    seen[order.back()] = true;
  }
  for (const auto& r : b.rows)
    if (!seen.contains(key_of(r))) order.push_back(key_of(r));
  std::map<Key, const std::vector<std::string>*> in_a;
  for (const auto& r : a.rows) in_a[key_of(r)] = &r;

  for (const auto& k : order) {
    std::vector<std::string> row = k;
    const auto* ra = in_a.contains(k) ? in_a[k] : nullptr;
    const auto* rb = in_b.contains(k) ? in_b[k] : nullptr;
    for (std::size_t i = keys; i < a.columns.size(); ++i) {
      const std::string va = ra ? (*ra)[i] : "";
      const std::string vb = rb ? (*rb)[i] : "";
      row.push_back(va);
      row.push_back(vb);
      // a missing histogram row is a zero count
      const auto na = ra ? parse_number(va) : std::optional<double>{0.0};
      const auto nb = rb ? parse_number(vb) : std::optional<double>{0.0};
      row.push_back(na && nb ? num(*nb - *na) : "");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::optional<std::string> svg(const Table& t) {
  if (t.key_columns != 1 || t.rows.empty()) return std::nullopt;
  std::vector<double> xs;
  for (const auto& r : t.rows) {
    const auto x = parse_number(r[0]);
    if (!x) return std::nullopt;
    xs.push_back(*x);
  }
  struct Series {
    std::string name;
    std::vector<std::optional<double>> y;
  };
  std::vector<Series> series;
  for (std::size_t c = 1; c < t.columns.size(); ++c) {
    Series s{t.columns[c], {}};
    bool any = false;
    for (const auto& r : t.rows) {
      s.y.push_back(parse_number(r[c]));
      any = any || s.y.back().has_value();
    }
    if (any) series.push_back(std::move(s));
  }
  if (series.empty()) return std::nullopt;

  double x0 = *std::min_element(xs.begin(), xs.end()), x1 = *std::max_element(xs.begin(), xs.end());
  double y0 = 0.0, y1 = 0.0;
  for (const auto& s : series)
    for (const auto& y : s.y)
      if (y) {
        y0 = std::min(y0, *y);
        y1 = std::max(y1, *y);
      }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;

  constexpr double W = 720, H = 420, L = 70, R = 190, T = 30, B = 50;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << L << "\" y=\"18\" font-size=\"14\">" << t.name << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
    os << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << format_number(xv)
       << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << format_number(yv)
       << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << t.columns[0]
     << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (series[s].y[i]) os << format_number(px(xs[i])) << ',' << format_number(py(*series[s].y[i])) << ' ';
    os << "\"/>\n";
    const double ly = T + 14.0 * static_cast<double>(s);
    os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 28 << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << W - R + 32 << "\" y=\"" << ly + 4 << "\">" << series[s].name << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_table(const Table& t, const std::filesystem::path& dir, bool with_svg) {
  io::write_text(dir / (t.name + ".csv"), t.csv());
  if (with_svg)
    if (auto s = svg(t)) io::write_text(dir / (t.name + ".svg"), *s);
}

// ---------------------------------------------------------------------------
// Headline and checks

Headline headline(const AnalysisInput& in) {
  Headline h;
  const auto& ev = in.events;
  const auto& snaps = in.snapshots;
  for (const auto& e : ev) {
    h.limit_orders += e.kind == FlowKind::LimitOrder;
    h.cancels += e.kind == FlowKind::Cancel;
    h.trades += e.kind == FlowKind::Trade;
  }

  const auto td = digit_distribution(trade_prices(ev));
  const auto ld = digit_distribution(limit_prices(ev));
  h.trade_digit0 = td.frequency(0);
  h.limit_digit0 = ld.frequency(0);
  h.limit_ranking = ld.ranking();
  h.trade_chi2_reject = chi2_uniformity(td.counts).reject;
  h.limit_chi2_reject = chi2_uniformity(ld.counts).reject;
  const auto occ = barrier_occupancy(snaps, kOccupancyPeriod);
  h.occupancy_bid_mode = occ.bid.mode();
  h.occupancy_ask_mode = occ.ask.mode();

  const auto b = shape_or_zero(snaps, Side::Bid, 21);
  const auto a = shape_or_zero(snaps, Side::Ask, 21);
  std::vector<double> shape(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) shape[k] = 0.5 * (b[k] + a[k]);
  double best = 0.0;
  for (std::int64_t k = 1; k <= 20; ++k)
    if (shape[static_cast<std::size_t>(k)] > best) {
      best = shape[static_cast<std::size_t>(k)];
      h.shape_argmax = k;
    }
  h.shape_peak_at_5 = shape[5] > shape[4] && shape[5] > shape[6];

  const auto sp = spread_distribution(snaps, kSpreadPeriod);
  h.spread_argmax = sp.argmax(1, 50);
  h.spread_modes = sp.local_modes(1, 50);
  h.spread_one_tick = sp.share(1);

  const auto st = event_count_correlations(ev, in.duration_ms, 10.0, kCountLags);
  h.correlation_min = st.min_off_diagonal();
  h.correlation_max = st.max_off_diagonal();
  h.count_acf_saturates = st.windows > 0;
  for (const auto& acf : st.acf) h.count_acf_saturates = h.count_acf_saturates && saturates(acf, st.windows);

  const auto sg = sign_memory(ev, in.duration_ms, 10.0, kSignLags);
  h.market_sign_horizon_min = sg.market.horizon_minutes(sg.window_s);
  h.limit_sign_horizon_min = sg.limit.horizon_minutes(sg.window_s);

  const auto ty = spread_typology(snaps, 9, kSpreadPeriod);
  h.typology9_integer = ty.integer_share();
  h.typology9_samples = ty.samples;

  const auto v = volume_split_fit(ev);
  h.integer_alpha = v.integer_fit.alpha;
  h.decimal_rate = v.decimal_fit.rate;
  h.round_peaks = v.peaks;
  return h;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : "none"; }
std::string opt(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : "none"; }
bool within(const std::optional<double>& v, double lo, double hi) { return v && *v >= lo && *v <= hi; }

std::string join(const std::vector<std::int64_t>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : " ") + std::to_string(x);
  return s.empty() ? "none" : s;
}

}  // namespace

std::vector<Check> checks(const Headline& h, Regime regime, const recon::ReconstructionReport* recon) {
  std::vector<Check> c;
  if (recon && regime == Regime::Decimal) {
    const double s = recon->case1_share();
    c.push_back({"case1_share", num(s), "[0.60, 0.90]", s >= 0.60 && s <= 0.90});
  }
  if (regime == Regime::Pip) {
    c.push_back({"spread_one_tick_share", num(h.spread_one_tick), "0.65 +- 0.10",
                 std::abs(h.spread_one_tick - 0.65) <= 0.10});
    return c;
  }
  c.push_back({"trade_digit0_share", num(h.trade_digit0), "0.50 +- 0.10", std::abs(h.trade_digit0 - 0.5) <= 0.10});
  c.push_back({"limit_digit0_share", num(h.limit_digit0), "0.20 +- 0.10", std::abs(h.limit_digit0 - 0.2) <= 0.10});
  c.push_back({"limit_digit_ranking",
               std::to_string(h.limit_ranking[0]) + " " + std::to_string(h.limit_ranking[1]), "0 1",
               h.limit_ranking[0] == 0 && h.limit_ranking[1] == 1});
  c.push_back({"occupancy_mode", std::to_string(h.occupancy_bid_mode) + " " + std::to_string(h.occupancy_ask_mode),
               "0 0", h.occupancy_bid_mode == 0 && h.occupancy_ask_mode == 0});
  c.push_back({"digit_chi2_rejects", yes_no(h.trade_chi2_reject) + " " + yes_no(h.limit_chi2_reject), "1 1",
               h.trade_chi2_reject && h.limit_chi2_reject});
  c.push_back({"shape_argmax", opt(h.shape_argmax), "10", h.shape_argmax == 10});
  c.push_back({"shape_peak_at_5", yes_no(h.shape_peak_at_5), "1", h.shape_peak_at_5});
  const bool second = std::any_of(h.spread_modes.begin(), h.spread_modes.end(), [](auto m) { return m > 10; });
  const bool nine = std::find(h.spread_modes.begin(), h.spread_modes.end(), 9) != h.spread_modes.end();
  c.push_back({"spread_modes", join(h.spread_modes), "9 and one above 10", nine && second});
  c.push_back({"correlation_min", num(h.correlation_min), "> 0", h.correlation_min > 0.0});
  c.push_back({"correlation_max", num(h.correlation_max), ">= 0.5", h.correlation_max >= 0.5});
  c.push_back({"count_acf_saturates", yes_no(h.count_acf_saturates), "1", h.count_acf_saturates});
  c.push_back({"market_sign_horizon_min", opt(h.market_sign_horizon_min), "[1, 3]",
               within(h.market_sign_horizon_min, 1.0, 3.0)});
  c.push_back({"limit_sign_horizon_min", opt(h.limit_sign_horizon_min), "[3, 8]",
               within(h.limit_sign_horizon_min, 3.0, 8.0)});
  c.push_back({"typology9_integer_share", num(h.typology9_integer), ">= 0.60", h.typology9_integer >= 0.60});
  return c;
}

Table checks_table(const std::vector<Check>& c) {
  Table t{"checks", {"check", "value", "target", "pass"}, 1, {}};
  for (const auto& x : c) t.rows.push_back({x.name, x.value, "\"" + x.target + "\"", yes_no(x.pass)});
  return t;
}

Table fidelity_table(const Headline& truth, const Headline& inferred, const recon::ReconstructionReport& r) {
  Table t{"fidelity", {"metric", "truth", "inferred", "diff"}, 1, {}};
  auto add = [&t](const std::string& name, double a, double b) {
    t.rows.push_back({name, num(a), num(b), num(b - a)});
  };
  add("limit_orders", static_cast<double>(truth.limit_orders), static_cast<double>(inferred.limit_orders));
  add("cancels", static_cast<double>(truth.cancels), static_cast<double>(inferred.cancels));
  add("trades", static_cast<double>(truth.trades), static_cast<double>(inferred.trades));
  add("trade_digit0_share", truth.trade_digit0, inferred.trade_digit0);
  add("limit_digit0_share", truth.limit_digit0, inferred.limit_digit0);
  add("correlation_min", truth.correlation_min, inferred.correlation_min);
  add("correlation_max", truth.correlation_max, inferred.correlation_max);
  add("integer_alpha", truth.integer_alpha, inferred.integer_alpha);
  add("decimal_rate", truth.decimal_rate, inferred.decimal_rate);
  auto add_opt = [&t](const std::string& name, const std::optional<double>& a, const std::optional<double>& b) {
    t.rows.push_back({name, opt(a), opt(b), a && b ? num(*b - *a) : ""});
  };
  add_opt("market_sign_horizon_min", truth.market_sign_horizon_min, inferred.market_sign_horizon_min);
  add_opt("limit_sign_horizon_min", truth.limit_sign_horizon_min, inferred.limit_sign_horizon_min);
  t.rows.push_back({"case1_share", "", num(r.case1_share()), ""});
  t.rows.push_back({"case1_slices", "", num(r.case1_slices), ""});
  t.rows.push_back({"case2_slices", "", num(r.case2_slices), ""});
  t.rows.push_back({"inconsistent_slices", "", num(r.inconsistent_slices), ""});
  t.rows.push_back({"quiet_slices", "", num(r.quiet_slices), ""});
  return t;
}

}  // namespace fxlob::report
