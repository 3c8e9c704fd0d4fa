#pragma once

#include <optional>
#include <span>
#include <vector>

#include "stretchfd/fdm.hpp"
#include "stretchfd/gridgen.hpp"

namespace stretchfd {

enum class ExerciseStyle {
  EuropeanVanilla,
  AmericanVanilla,
  DiscreteKO,          ///< single barrier, up or down, monitored on dates
  DiscreteDoubleKO,
  ContinuousDoubleKO,
};

enum class OptionType { Call, Put };

struct ContractSpec {
  ExerciseStyle style = ExerciseStyle::EuropeanVanilla;
  OptionType type = OptionType::Call;
  double strike = 100.0;
  double maturity = 1.0;
  std::optional<double> lower_barrier;
  std::optional<double> upper_barrier;
  double rebate = 0.0;
  /// Observation dates in (0, T]. Empty with `observations_per_year` > 0
  /// means dates k / observations_per_year, k = 1, 2, ... up to T.
  std::vector<double> observation_dates;
  double observations_per_year = 0.0;

  void validate() const;
  bool knock_out() const;
  std::vector<double> monitoring_dates() const;
  /// Whether node value s lies in the knocked-out region.
  bool knocked_out(double s) const;
};

double intrinsic(OptionType type, double strike, double s);

/// Terminal values on the grid; knocked-out nodes carry the rebate.
std::vector<double> payoff(const ContractSpec& spec, const Grid& grid);

/// Knockouts, projection and barrier rows for the stepper, in the order they
/// must be applied. `time_steps` fixes the time grid the monitoring dates are
/// mapped onto.
ConstraintList constraint_hooks(const ContractSpec& spec, const Grid& grid, const PdeConfig& config);

/// Values at t = 0 on every node of the grid.
std::vector<double> solve_backward(const ContractSpec& spec, const MarketParams& mkt,
                                   const Grid& grid, const PdeConfig& config);

/// Monotone cubic read-off of nodal values at an arbitrary spot.
double value_at(const Grid& grid, std::span<const double> values, double spot);

/// Knock-in values by in-out parity: vanilla minus knock-out (zero rebate).
std::vector<double> knock_in_by_parity(std::span<const double> vanilla,
                                       std::span<const double> knock_out);

}  // namespace stretchfd
