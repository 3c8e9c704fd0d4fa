#pragma once

// Convergence sweeps in the number of space steps, reported as CSV, and the
// stretch-map timing benchmark.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stretchfd/fdm.hpp"
#include "stretchfd/gridgen.hpp"
#include "stretchfd/instruments.hpp"
#include "stretchfd/placement.hpp"

namespace stretchfd {

struct RunConfig {
  std::string label;
  ContractSpec contract;
  MarketParams market;
  StretchSpec stretch;
  PlacementSpec placement;
  PdeConfig pde;
  /// Use N = I time steps for every grid (instead of pde.time_steps).
  bool time_steps_follow_space = false;
  /// Extend [s_min, s_max] by this many cells of the unstretched grid on each
  /// side before building it (puts barriers strictly between nodes).
  double pad_cells = 0.0;
  std::vector<std::size_t> space_steps;
  std::size_t reference_steps = 0;
  std::vector<double> spots;

  void validate() const;
  PdeConfig pde_for(std::size_t steps) const;
  /// The stretch with the padding for `steps` space steps applied.
  StretchSpec stretch_for(std::size_t steps) const;
};

/// Stretch, sample and place: the grid used for `steps` space steps.
Grid build_grid(const RunConfig& config, std::size_t steps);

/// Values at t = 0 on the grid for `steps` space steps.
struct Valuation {
  Grid grid;
  std::vector<double> values;
};
Valuation value_grid(const RunConfig& config, std::size_t steps);

/// Prices at config.spots for `steps` space steps.
std::vector<double> price_spots(const RunConfig& config, std::size_t steps);

struct ConvergenceRow {
  std::size_t steps = 0;
  std::vector<double> prices;
  std::vector<double> errors;  ///< |price - reference| x 1e5
  std::vector<double> orders;  ///< log2 of the error ratio with the previous row; NaN on row 0
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

struct ConvergenceReport {
  std::string label;
  std::vector<double> spots;
  std::size_t reference_steps = 0;
  std::vector<double> reference_prices;
  std::string reference_status = "ok";
  std::vector<ConvergenceRow> rows;
};

/// Sweep config.space_steps against the reference computed at
/// config.reference_steps with the same stretch and placement. A failing
/// cell is recorded in its row status; the sweep continues.
ConvergenceReport run_convergence(const RunConfig& config);

/// Several sweeps sharing the same space steps, all cells evaluated in one
/// OpenMP loop. Results do not depend on the thread count.
std::vector<ConvergenceReport> run_convergence(std::span<const RunConfig> columns);

/// Columns: I, then price/error per report and spot, then orders, then status.
/// Numbers use 10 significant digits; returns the number of bytes written.
std::size_t emit_csv(std::span<const ConvergenceReport> reports, std::ostream& out);
std::size_t emit_csv(const ConvergenceReport& report, std::ostream& out);
std::size_t emit_csv(std::span<const ConvergenceReport> reports, const std::filesystem::path& path);

struct TransformTiming {
  std::size_t samples = 0;
  double cubic_seconds = 0.0;
  double sinh_seconds = 0.0;
  double ratio() const { return sinh_seconds / cubic_seconds; }
};

/// Best-of-`repeats` wall clock of the serial kernel over `samples` points.
double time_map(const StretchMap& map, std::size_t samples, int repeats = 3);

/// Cubic against sinh evaluation for B = 125 on [0, 150], alpha = 1.5.
TransformTiming bench_transforms(std::size_t samples);

}  // namespace stretchfd
