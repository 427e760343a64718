#pragma once

#include <iosfwd>
#include <string>

#include "telsim/channel.hpp"
#include "telsim/config.hpp"
#include "telsim/mbnla.hpp"
#include "telsim/montecarlo.hpp"
#include "telsim/teleporter.hpp"

namespace telsim {

enum class RunMode { Analytic, MonteCarlo };

RunMode parse_mode(const std::string& s);  // "analytic" | "mc"

struct SweepSpec {
  TeleporterConfig base;
  FilterSpec filter;
  double choi_r = 2.0;
  std::string axis;  // phi | g | r_db | efficiency
  double start = 0.0;
  double stop = 0.0;
  int steps = 2;
  RunMode mode = RunMode::Analytic;
  std::int64_t n_trials = 1000000;
  std::uint64_t seed = 1;
  std::string output_path;

  void validate() const;
};

TeleporterConfig teleporter_from_config(const KeyValueConfig& cfg);
FilterSpec filter_from_config(const KeyValueConfig& cfg);
SweepSpec sweep_from_config(const KeyValueConfig& cfg);

/// Fixed 16-column schema; floats at 12 significant digits; cells that are
/// undefined for a row (e.g. estimators of a zero-accepted step) are left
/// empty and a note goes to stderr.
extern const char kCsvHeader[];

std::string format_csv_value(double v);

/// Single run; human-readable report to `out`.
void run_simulate(const KeyValueConfig& cfg, std::ostream& out);

/// One CSV row per sweep step, written to `out`.
void run_sweep(const SweepSpec& spec, std::ostream& out);

/// Classification report for a (tau, nu) point.
void run_channel_map(const ChannelParams& params, double r_choi, std::ostream& out);

}  // namespace telsim
