#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "fxlob/flowgen.hpp"

namespace fxlob::io {

// Ground-truth events, one per line after a header:
//   time_ms,kind,side,price_ticks,volume,trader_class
// kind L/C/M, side B/A, trader class M(anual)/A(lgo); market orders carry
// "-" for the price.
void write_ground_truth(std::ostream& out, std::span<const flow::GroundTruthEvent> events);
std::vector<flow::GroundTruthEvent> read_ground_truth(std::istream& in);

// Executions: time_ms,aggressor,price_ticks,volume,aggressor_id,resting_id
void write_fills(std::ostream& out, std::span<const Fill> fills);
std::vector<Fill> read_fills(std::istream& in);

// A simulated session on disk:
//   session.json    instrument, slice count, event counts
//   events.csv      ground-truth events
//   trades.csv      executions
//   snapshots.feed  the visible book as Quote records (change-only)
struct SessionFiles {
  std::filesystem::path dir;

  std::filesystem::path meta() const { return dir / "session.json"; }
  std::filesystem::path events() const { return dir / "events.csv"; }
  std::filesystem::path trades() const { return dir / "trades.csv"; }
  std::filesystem::path snapshots() const { return dir / "snapshots.feed"; }
};

nlohmann::json session_summary(const flow::Session& s);
void save_session(const flow::Session& s, const SessionFiles& files);
// Everything but the engine's effect log, which is not stored.
flow::Session load_session(const SessionFiles& files);

// Whole-file helpers throwing IoError.
std::string read_text(const std::filesystem::path& p);
void write_text(const std::filesystem::path& p, std::string_view text);

}  // namespace fxlob::io
