// fxlob: simulate, encode, reconstruct and analyze FX limit order book
// sessions. Exit codes: 0 ok, 1 usage, 2 config, 3 I/O or malformed input,
// 4 threshold failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fxlob/errors.hpp"
#include "fxlob/feed.hpp"
#include "fxlob/flowgen.hpp"
#include "fxlob/reconstruct.hpp"
#include "fxlob/report.hpp"
#include "fxlob/session_io.hpp"

namespace fs = std::filesystem;
using namespace fxlob;

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kIo = 3, kThreshold = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path default_out() {
  if (const char* env = std::getenv("FXLOB_OUT"); env && *env) return env;
  return "fxlob_out";
}

fs::path config_dir() {
  if (const char* env = std::getenv("FXLOB_CONFIG_DIR"); env && *env) return env;
  return FXLOB_DEFAULT_CONFIG_DIR;
}

// Output directory: the flag when given, else FXLOB_OUT, else ./fxlob_out.
fs::path out_dir(const std::string& flag) { return flag.empty() ? default_out() : fs::path(flag); }

flow::SessionConfig session_config(const std::string& path, std::optional<std::uint64_t> seed,
                                   std::optional<double> duration) {
  auto cfg = flow::load_config(path);
  if (seed) cfg.seed = *seed;
  if (duration) {
    if (!(*duration > 0.0)) throw ConfigError("duration_s", "must be positive");
    cfg.duration_s = *duration;
  }
  return cfg;
}

void print_summary(const flow::Session& s, double seconds) {
  const auto& c = s.counts;
  std::printf("%-12s %12s %12s\n", "event", "bid", "ask");
  for (auto kind : {flow::EventKind::LimitOrder, flow::EventKind::Cancel, flow::EventKind::MarketOrder}) {
    const char* name = kind == flow::EventKind::LimitOrder ? "limit" : kind == flow::EventKind::Cancel ? "cancel" : "market";
    std::printf("%-12s %12lld %12lld\n", name,
                static_cast<long long>(c.by_type[flow::type_index(kind, Side::Bid)]),
                static_cast<long long>(c.by_type[flow::type_index(kind, Side::Ask)]));
  }
  std::printf("%-12s %12lld\n", "fills", static_cast<long long>(c.trades));
  std::printf("%-12s %12zu\n", "book states", s.snapshots.changes().size());
  std::printf("simulated %.0f s in %.2f s\n", static_cast<double>(s.total_slices) / 10.0, seconds);
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::string> expand_selectors(const std::vector<std::string>& which) {
  std::vector<std::string> out;
  for (const auto& w : which) {
    if (w == "all") {
      out.insert(out.end(), report::statistic_names().begin(), report::statistic_names().end());
      continue;
    }
    const auto& names = report::statistic_names();
    if (std::find(names.begin(), names.end(), w) == names.end()) {
      std::string valid = "all";
      for (const auto& n : names) valid += ", " + n;
      throw UsageError("unknown statistic '" + w + "'; valid: " + valid);
    }
    out.push_back(w);
  }
  return out;
}

void write_tables(const std::vector<std::string>& stats, const report::AnalysisInput& in, const fs::path& dir,
                  bool svg) {
  for (const auto& name : stats) report::write_table(report::compute(name, in), dir, svg);
}

void write_compare(const std::vector<std::string>& stats, const report::AnalysisInput& a,
                   const report::AnalysisInput& b, const std::string& la, const std::string& lb,
                   const fs::path& dir, bool svg) {
  for (const auto& name : stats)
    report::write_table(report::compare(report::compute(name, a), report::compute(name, b), la, lb), dir, svg);
}

std::vector<recon::InferredEvent> load_inferred(const fs::path& p) {
  std::istringstream in(io::read_text(p));
  return recon::read_events(in);
}

std::vector<feed::Record> load_feed(const fs::path& p) { return feed::decode(io::read_text(p)); }

// --------------------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::string out;
};

int simulate(const SimulateArgs& a) {
  const auto cfg = session_config(a.config, a.seed, a.duration);
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = flow::generate_session(cfg);
  const double el = since(t0);
  const io::SessionFiles files{out_dir(a.out)};
  io::save_session(s, files);
  print_summary(s, el);
  std::printf("wrote %s\n", files.dir.string().c_str());
  return kOk;
}

struct EncodeArgs {
  std::string session;
  bool no_total{false};
  std::string out;
};

int encode(const EncodeArgs& a) {
  const auto s = io::load_session({a.session});
  const auto recs = feed::encode(s.snapshots, s.trades, !a.no_total);
  const auto path = out_dir(a.out) / "session.feed";
  io::write_text(path, feed::write_feed(recs));
  std::size_t deals = 0;
  for (const auto& r : recs) deals += std::holds_alternative<feed::DealRecord>(r);
  std::printf("%zu records (%zu deal, %zu quote) over %lld slices -> %s\n", recs.size(), deals, recs.size() - deals,
              static_cast<long long>(s.total_slices), path.string().c_str());
  return kOk;
}

int decode_check(const std::string& feed_path) {
  const auto text = io::read_text(feed_path);
  const auto recs = feed::decode(text);
  const bool same = feed::write_feed(recs) == text;
  std::printf("%zu records; round trip %s\n", recs.size(), same ? "identical" : "DIFFERS");
  return same ? kOk : kThreshold;
}

struct ReconstructArgs {
  std::string feed;
  std::uint64_t seed{1};
  std::string out;
};

recon::Reconstruction run_reconstruct(const std::vector<feed::Record>& recs, std::uint64_t seed, const fs::path& dir) {
  auto r = recon::reconstruct_stream(recs, seed);
  std::ostringstream ev;
  recon::write_events(ev, r.events);
  io::write_text(dir / "inferred.csv", ev.str());
  io::write_text(dir / "reconstruction.json", recon::report_json(r.report) + "\n");
  return r;
}

int reconstruct(const ReconstructArgs& a) {
  const auto recs = load_feed(a.feed);
  const auto dir = out_dir(a.out);
  const auto r = run_reconstruct(recs, a.seed, dir);
  std::printf("%s\n", recon::report_json(r.report).c_str());
  std::printf("%zu inferred events -> %s\n", r.events.size(), (dir / "inferred.csv").string().c_str());
  return kOk;
}

struct AnalyzeArgs {
  std::string session;
  std::string inferred;
  std::string feed;
  std::string source{"truth"};
  std::vector<std::string> which{"all"};
  std::vector<std::string> compare;
  bool svg{false};
  std::string out;
};

int analyze(const AnalyzeArgs& a) {
  const auto stats = expand_selectors(a.which);
  const auto dir = out_dir(a.out);
  auto source = [&](const std::string& name) -> report::AnalysisInput {
    if (name == "truth") {
      if (a.session.empty()) throw UsageError("--session is required for the truth source");
      return report::truth_input(io::load_session({a.session}));
    }
    if (name == "inferred") {
      if (a.inferred.empty() || a.feed.empty()) throw UsageError("--inferred and --feed are required for the inferred source");
      auto recs = load_feed(a.feed);
      SliceIndex slices = recs.empty() ? 0 : feed::slice_of(recs.back()) + 1;
      if (!a.session.empty()) slices = io::load_session({a.session}).total_slices;
      return report::inferred_input(load_inferred(a.inferred), feed::quotes_to_series(recs, slices));
    }
    throw UsageError("unknown source '" + name + "'; valid: truth, inferred");
  };
  if (!a.compare.empty()) {
    write_compare(stats, source(a.compare[0]), source(a.compare[1]), a.compare[0], a.compare[1], dir, a.svg);
  } else {
    write_tables(stats, source(a.source), dir, a.svg);
  }
  std::printf("%zu tables -> %s\n", stats.size(), dir.string().c_str());
  return kOk;
}

struct PipelineArgs {
  std::string config;
  std::string regime;
  std::string instrument{"eurusd"};
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::uint64_t recon_seed{1};
  bool no_total{false};
  bool svg{false};
  bool no_checks{false};
  std::string out;
};

int pipeline(const PipelineArgs& a) {
  std::string config = a.config;
  report::Regime regime = report::Regime::Decimal;
  if (!a.regime.empty() && a.regime != "decimal" && a.regime != "pip")
    throw UsageError("unknown regime '" + a.regime + "'; valid: decimal, pip");
  if (a.instrument != "eurusd" && a.instrument != "usdjpy")
    throw UsageError("unknown instrument '" + a.instrument + "'; valid: eurusd, usdjpy");
  if (a.regime == "pip") {
    if (a.instrument != "eurusd") throw UsageError("the pip regime is configured for eurusd only");
    regime = report::Regime::Pip;
  }
  if (config.empty())
    config = (config_dir() / (a.instrument + (regime == report::Regime::Pip ? "_pip.json" : "_decimal.json"))).string();
  else if (!a.regime.empty() || a.instrument != "eurusd")
    throw UsageError("--config excludes --regime and --instrument");

  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = session_config(config, a.seed, a.duration);
  if (cfg.instrument.pip_in_ticks == 1) regime = report::Regime::Pip;
  const auto dir = out_dir(a.out);

  const auto session = flow::generate_session(cfg);
  io::save_session(session, {dir});
  print_summary(session, since(t0));

  const auto recs = feed::encode(session.snapshots, session.trades, !a.no_total);
  io::write_text(dir / "session.feed", feed::write_feed(recs));
  const auto r = run_reconstruct(recs, a.recon_seed, dir);
  std::printf("reconstruction %s\n", recon::report_json(r.report).c_str());

  const auto truth = report::truth_input(session);
  const auto inferred = report::inferred_input(r.events, feed::quotes_to_series(recs, session.total_slices));
  const auto& stats = report::statistic_names();
  write_tables(stats, truth, dir / "truth", a.svg);
  write_tables(stats, inferred, dir / "inferred", a.svg);
  write_compare(stats, truth, inferred, "truth", "inferred", dir / "compare", a.svg);

  const auto ht = report::headline(truth);
  const auto hi = report::headline(inferred);
  report::write_table(report::fidelity_table(ht, hi, r.report), dir, false);
  const auto checks = report::checks(ht, regime, &r.report);
  report::write_table(report::checks_table(checks), dir, false);

  // The thresholds are EUR/USD targets; other instruments only report them.
  const bool gated = !a.no_checks && cfg.instrument.name == "EURUSD";
  bool ok = true;
  for (const auto& c : checks) {
    std::printf("%-26s %-8s %-22s %s\n", c.name.c_str(), c.pass ? "pass" : "FAIL", c.value.c_str(), c.target.c_str());
    ok = ok && c.pass;
  }
  if (!gated) std::printf("threshold checks are informational for this run\n");
  std::printf("pipeline finished in %.1f s -> %s\n", since(t0), dir.string().c_str());
  return ok || !gated ? kOk : kThreshold;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FX limit order book simulator, feed codec, reconstruction and statistics"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Generate a ground-truth session");
  c_sim->add_option("--config", sim.config, "Session configuration (JSON)")->required();
  c_sim->add_option("--seed", sim.seed, "Override the configured seed");
  c_sim->add_option("--duration", sim.duration, "Override the session length in seconds");
  c_sim->add_option("--out", sim.out, "Output directory (default $FXLOB_OUT or ./fxlob_out)");

  EncodeArgs enc;
  auto* c_enc = app.add_subcommand("encode", "Encode a session as a Quote/Deal feed");
  c_enc->add_option("--session", enc.session, "Session directory written by simulate")->required();
  c_enc->add_flag("--no-total", enc.no_total, "Omit the per-slice signed total volume");
  c_enc->add_option("--out", enc.out, "Output directory");

  std::string check_path;
  auto* c_chk = app.add_subcommand("decode-check", "Decode a feed and verify it re-encodes identically");
  c_chk->add_option("feed", check_path, "Feed file")->required();

  ReconstructArgs rec;
  auto* c_rec = app.add_subcommand("reconstruct", "Infer order flow from a feed");
  c_rec->add_option("--feed", rec.feed, "Feed file")->required();
  c_rec->add_option("--seed", rec.seed, "Seed of the Case-2 allocation");
  c_rec->add_option("--out", rec.out, "Output directory");

  AnalyzeArgs ana;
  auto* c_ana = app.add_subcommand("analyze", "Compute statistics as CSV (and SVG)");
  c_ana->add_option("--session", ana.session, "Session directory (truth source)");
  c_ana->add_option("--inferred", ana.inferred, "Inferred events from reconstruct");
  c_ana->add_option("--feed", ana.feed, "Feed the inferred events came from");
  c_ana->add_option("--source", ana.source, "truth or inferred");
  c_ana->add_option("--which", ana.which, "Statistics to compute, or all")->delimiter(',');
  c_ana->add_option("--compare", ana.compare, "Two sources side by side, e.g. truth inferred")->expected(2);
  c_ana->add_flag("--svg", ana.svg, "Also render SVG plots");
  c_ana->add_option("--out", ana.out, "Output directory");

  PipelineArgs pip;
  auto* c_pip = app.add_subcommand("pipeline", "simulate, encode, reconstruct, analyze and check");
  c_pip->add_option("--config", pip.config, "Session configuration (JSON)");
  c_pip->add_option("--regime", pip.regime, "decimal or pip (shipped configurations)");
  c_pip->add_option("--instrument", pip.instrument, "eurusd or usdjpy (shipped configurations)");
  c_pip->add_option("--seed", pip.seed, "Override the configured seed");
  c_pip->add_option("--duration", pip.duration, "Override the session length in seconds");
  c_pip->add_option("--recon-seed", pip.recon_seed, "Seed of the Case-2 allocation");
  c_pip->add_flag("--no-total", pip.no_total, "Encode without the signed total volume");
  c_pip->add_flag("--svg", pip.svg, "Also render SVG plots");
  c_pip->add_flag("--no-checks", pip.no_checks, "Report threshold checks without failing on them");
  c_pip->add_option("--out", pip.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*c_sim) return simulate(sim);
    if (*c_enc) return encode(enc);
    if (*c_chk) return decode_check(check_path);
    if (*c_rec) return reconstruct(rec);
    if (*c_ana) return analyze(ana);
    if (*c_pip) return pipeline(pip);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kIo;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}
