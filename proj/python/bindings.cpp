#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fxlob/analytics.hpp"
#include "fxlob/errors.hpp"
#include "fxlob/feed.hpp"
#include "fxlob/flowgen.hpp"
#include "fxlob/reconstruct.hpp"
#include "fxlob/report.hpp"
#include "fxlob/session_io.hpp"

namespace py = pybind11;
using namespace fxlob;

namespace {

py::object price_or_none(const std::optional<TickPrice>& p) {
  return p ? py::object(py::int_(p->ticks)) : py::none();
}

py::dict headline_dict(const report::Headline& h) {
  py::dict d;
  d["trade_digit0"] = h.trade_digit0;
  d["limit_digit0"] = h.limit_digit0;
  d["limit_ranking"] = std::vector<int>(h.limit_ranking.begin(), h.limit_ranking.end());
  d["occupancy_bid_mode"] = h.occupancy_bid_mode;
  d["occupancy_ask_mode"] = h.occupancy_ask_mode;
  d["trade_chi2_reject"] = h.trade_chi2_reject;
  d["limit_chi2_reject"] = h.limit_chi2_reject;
  d["shape_argmax"] = h.shape_argmax;
  d["shape_peak_at_5"] = h.shape_peak_at_5;
  d["spread_argmax"] = h.spread_argmax;
  d["spread_modes"] = h.spread_modes;
  d["spread_one_tick"] = h.spread_one_tick;
  d["correlation_min"] = h.correlation_min;
  d["correlation_max"] = h.correlation_max;
  d["count_acf_saturates"] = h.count_acf_saturates;
  d["market_sign_horizon_min"] = h.market_sign_horizon_min;
  d["limit_sign_horizon_min"] = h.limit_sign_horizon_min;
  d["typology9_integer"] = h.typology9_integer;
  d["typology9_samples"] = h.typology9_samples;
  d["integer_alpha"] = h.integer_alpha;
  d["decimal_rate"] = h.decimal_rate;
  d["round_peaks"] = h.round_peaks;
  d["limit_orders"] = h.limit_orders;
  d["cancels"] = h.cancels;
  d["trades"] = h.trades;
  return d;
}

py::dict table_dict(const report::Table& t) {
  py::dict d;
  d["name"] = t.name;
  d["columns"] = t.columns;
  d["rows"] = t.rows;
  d["csv"] = t.csv();
  return d;
}

}  // namespace

PYBIND11_MODULE(_fxlob, m) {
  m.doc() = "Limit order book simulation, feed reconstruction and clustering statistics";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<flow::SessionConfig>(m, "SessionConfig")
      .def_static("load", &flow::load_config, py::arg("path"))
      .def_static(
          "from_json", [](const std::string& s) { return flow::config_from_json(nlohmann::json::parse(s)); },
          py::arg("text"))
      .def("to_json", [](const flow::SessionConfig& c) { return flow::config_to_json(c).dump(2); })
      .def_readwrite("seed", &flow::SessionConfig::seed)
      .def_readwrite("duration_s", &flow::SessionConfig::duration_s)
      .def_property_readonly("instrument", [](const flow::SessionConfig& c) { return c.instrument.name; });

  py::class_<flow::Session>(m, "Session")
      .def_property_readonly("instrument", [](const flow::Session& s) { return s.instrument.name; })
      .def_readonly("total_slices", &flow::Session::total_slices)
      .def_property_readonly("events",
                             [](const flow::Session& s) {
                               py::list out;
                               for (const auto& e : s.events)
                                 out.append(py::make_tuple(e.time, std::string(flow::to_string(e.kind)),
                                                           std::string(to_string(e.side)), price_or_none(e.price),
                                                           e.volume, std::string(to_string(e.trader_class))));
                               return out;
                             },
                             "(time_ms, kind, side, price_ticks or None, volume, trader_class) per order")
      .def_property_readonly("trades",
                             [](const flow::Session& s) {
                               py::list out;
                               for (const auto& f : s.trades)
                                 out.append(py::make_tuple(f.time, std::string(to_string(f.aggressor)),
                                                           f.price.ticks, f.volume));
                               return out;
                             },
                             "(time_ms, aggressor, price_ticks, volume) per fill")
      .def(
          "best",
          [](const flow::Session& s, SliceIndex slice) {
            const auto& snap = s.snapshots.at(slice);
            return py::make_tuple(price_or_none(snap.bids.best()), price_or_none(snap.asks.best()));
          },
          py::arg("slice"), "(best bid, best ask) visible at the end of a slice")
      .def("save", [](const flow::Session& s, const std::filesystem::path& dir) { io::save_session(s, {dir}); },
           py::arg("dir"))
      .def_static("load", [](const std::filesystem::path& dir) { return io::load_session({dir}); }, py::arg("dir"));

  m.def(
      "generate_session",
      [](const flow::SessionConfig& cfg, std::optional<double> duration_s, std::optional<std::uint64_t> seed) {
        py::gil_scoped_release release;
        return flow::generate_session(cfg, duration_s.value_or(cfg.duration_s), seed.value_or(cfg.seed));
      },
      py::arg("config"), py::arg("duration_s") = py::none(), py::arg("seed") = py::none());

  m.def(
      "generate_quiet_session",
      [](SliceIndex slices, double activity, std::size_t max_levels, std::uint64_t seed) {
        flow::QuietConfig qc;
        qc.slices = slices;
        qc.activity = activity;
        qc.max_levels = max_levels;
        qc.seed = seed;
        return flow::generate_quiet_session(qc);
      },
      py::arg("slices") = 3000, py::arg("activity") = 0.5, py::arg("max_levels") = kVisibleDepth,
      py::arg("seed") = 1, "At most one order per slice; reconstructs exactly from a full feed.");

  m.def(
      "encode_feed",
      [](const flow::Session& s, bool include_total) {
        return feed::write_feed(feed::encode(s.snapshots, s.trades, include_total));
      },
      py::arg("session"), py::arg("include_total") = true);

  m.def(
      "normalize_feed", [](const std::string& text) { return feed::write_feed(feed::decode(text)); },
      py::arg("text"), "Decode and re-encode; raises ParseError on malformed input.");

  py::class_<recon::Reconstruction>(m, "Reconstruction")
      .def_property_readonly("events",
                             [](const recon::Reconstruction& r) {
                               py::list out;
                               for (const auto& e : r.events)
                                 out.append(py::make_tuple(e.slice, std::string(to_string(e.side)),
                                                           std::string(to_string(e.kind)), e.price.ticks,
                                                           e.volume));
                               return out;
                             },
                             "(slice, side, kind, price_ticks, volume) per inferred event")
      .def_property_readonly("case1_share", [](const recon::Reconstruction& r) { return r.report.case1_share(); })
      .def_property_readonly("report",
                             [](const recon::Reconstruction& r) {
                               py::dict d;
                               d["case1_slices"] = r.report.case1_slices;
                               d["case2_slices"] = r.report.case2_slices;
                               d["quiet_slices"] = r.report.quiet_slices;
                               d["inconsistent_slices"] = r.report.inconsistent_slices;
                               return d;
                             });

  m.def(
      "reconstruct",
      [](const std::string& text, std::uint64_t seed) {
        const auto records = feed::decode(text);
        py::gil_scoped_release release;
        return recon::reconstruct_stream(records, seed);
      },
      py::arg("feed"), py::arg("seed") = 1);

  m.def("statistic_names", &report::statistic_names);
  m.def(
      "statistic",
      [](const std::string& name, const flow::Session& s) {
        return table_dict(report::compute(name, report::truth_input(s)));
      },
      py::arg("name"), py::arg("session"), "A ground-truth statistic table: name, columns, rows (strings), csv.");
  m.def(
      "headline", [](const flow::Session& s) { return headline_dict(report::headline(report::truth_input(s))); },
      py::arg("session"));

  m.def(
      "chi2_uniformity",
      [](const std::array<std::int64_t, 10>& counts) {
        const auto r = analytics::chi2_uniformity(counts);
        py::dict d;
        d["statistic"] = r.statistic;
        d["dof"] = r.dof;
        d["p_value"] = r.p_value;
        d["reject"] = r.reject;
        d["low_sample"] = r.low_sample;
        return d;
      },
      py::arg("counts"), "Pearson test of ten digit counts against uniformity, 1% level.");

  m.def(
      "fit_power_law",
      [](const std::vector<std::int64_t>& v, std::int64_t xmin) {
        const auto f = analytics::fit_power_law(v, xmin);
        return py::make_tuple(f.alpha, f.n_tail);
      },
      py::arg("values"), py::arg("xmin") = 1, "Discrete power-law MLE: (alpha, tail size).");

  m.def(
      "fit_geometric", [](const std::vector<std::int64_t>& v) { return analytics::fit_geometric(v).rate; },
      py::arg("values"), "Exponential rate ln(mean / (mean - 1)) of a geometric law on 1, 2, ...");
}
