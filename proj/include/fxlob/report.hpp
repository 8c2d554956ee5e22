#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fxlob/analytics.hpp"
#include "fxlob/depth.hpp"
#include "fxlob/instrument.hpp"
#include "fxlob/reconstruct.hpp"

namespace fxlob::report {

// One flow (ground truth or inferred) with the book it ran against.
struct AnalysisInput {
  std::vector<analytics::FlowEvent> events;
  SnapshotSeries snapshots;
  TimeMs duration_ms{0};
};

AnalysisInput truth_input(const flow::Session& s);
// Inferred events are stamped at the start of their slice; the book is the
// one carried by the feed's Quote records.
AnalysisInput inferred_input(std::span<const recon::InferredEvent> events, SnapshotSeries snapshots);
std::vector<analytics::FlowEvent> inferred_flow(std::span<const recon::InferredEvent> events);

// A CSV table. The first `key_columns` columns identify a row; the rest are
// values. Cells are pre-formatted so that output is byte-stable.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::size_t key_columns{1};
  std::vector<std::vector<std::string>> rows;

  std::string csv() const;
};

std::string format_number(double v);

// Statistic selectors, in output order:
//   trade_digits limit_digits chi2 occupancy shape gap spread placement
//   placement_conditional correlation count_acf sign_acf volumes volume_fit
//   typology
const std::vector<std::string>& statistic_names();
// Throws std::invalid_argument listing the valid names for an unknown one.
Table compute(const std::string& statistic, const AnalysisInput& in);

// Side-by-side join on the key columns: every value column c becomes
// c_<label_a>, c_<label_b> and c_diff (b - a) where both are numeric.
Table compare(const Table& a, const Table& b, const std::string& label_a, const std::string& label_b);

// Line plot of every numeric value column against a numeric first key
// column; nothing for tables without one.
std::optional<std::string> svg(const Table& t);

// ---------------------------------------------------------------------------
// Headline numbers behind the acceptance thresholds.

struct Headline {
  double trade_digit0{0.0};
  double limit_digit0{0.0};
  std::array<int, 10> limit_ranking{};
  int occupancy_bid_mode{0};
  int occupancy_ask_mode{0};
  bool trade_chi2_reject{false};
  bool limit_chi2_reject{false};
  std::optional<std::int64_t> shape_argmax;  // over distances 1..20, both sides averaged
  bool shape_peak_at_5{false};
  std::optional<std::int64_t> spread_argmax;
  std::vector<std::int64_t> spread_modes;  // local modes over 1..50
  double spread_one_tick{0.0};
  double correlation_min{0.0};
  double correlation_max{0.0};
  bool count_acf_saturates{false};
  std::optional<double> market_sign_horizon_min;
  std::optional<double> limit_sign_horizon_min;
  double typology9_integer{0.0};
  std::int64_t typology9_samples{0};
  double integer_alpha{0.0};
  double decimal_rate{0.0};
  std::vector<std::int64_t> round_peaks;
  std::int64_t limit_orders{0};
  std::int64_t cancels{0};
  std::int64_t trades{0};
};

Headline headline(const AnalysisInput& in);

struct Check {
  std::string name;
  std::string value;
  std::string target;
  bool pass{false};
};

enum class Regime { Decimal, Pip };

// Threshold checks on a ground-truth headline (and the reconstruction report
// when given).
std::vector<Check> checks(const Headline& h, Regime regime,
                          const recon::ReconstructionReport* recon = nullptr);
Table checks_table(const std::vector<Check>& c);
// truth vs inferred headline numbers.
Table fidelity_table(const Headline& truth, const Headline& inferred, const recon::ReconstructionReport& r);

// Writes <dir>/<name>.csv and, when asked, the .svg mirror.
void write_table(const Table& t, const std::filesystem::path& dir, bool with_svg);

}  // namespace fxlob::report
