#include "stretchfd/instruments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stretchfd/error.hpp"
#include "stretchfd/monotone_cubic.hpp"

namespace stretchfd {

void ContractSpec::validate() const {
  if (!(strike > 0.0)) throw SpecError("contract: strike must be positive");
  if (!(maturity > 0.0)) throw SpecError("contract: maturity must be positive");
  if (lower_barrier && upper_barrier && !(*lower_barrier < *upper_barrier)) {
    throw SpecError("contract: lower barrier must be below the upper barrier");
  }
  switch (style) {
    case ExerciseStyle::DiscreteKO:
      if (!lower_barrier && !upper_barrier) throw SpecError("contract: knock-out needs a barrier");
      break;
    case ExerciseStyle::DiscreteDoubleKO:
    case ExerciseStyle::ContinuousDoubleKO:
      if (!lower_barrier || !upper_barrier) throw SpecError("contract: double knock-out needs two barriers");
      break;
    default:
      break;
  }
  for (double t : observation_dates) {
    if (!(t > 0.0 && t <= maturity * (1.0 + 1e-12))) {
      throw SpecError("contract: observation dates must lie in (0, T]");
    }
  }
  if (observations_per_year < 0.0) throw SpecError("contract: negative observation frequency");
  if ((style == ExerciseStyle::DiscreteKO || style == ExerciseStyle::DiscreteDoubleKO) &&
      observation_dates.empty() && observations_per_year == 0.0) {
    throw SpecError("contract: discrete monitoring needs observation dates");
  }
}

bool ContractSpec::knock_out() const {
  return style == ExerciseStyle::DiscreteKO || style == ExerciseStyle::DiscreteDoubleKO ||
         style == ExerciseStyle::ContinuousDoubleKO;
}

std::vector<double> ContractSpec::monitoring_dates() const {
  if (!observation_dates.empty()) {
    std::vector<double> d = observation_dates;
    std::sort(d.begin(), d.end());
    return d;
  }
  std::vector<double> d;
  if (observations_per_year > 0.0) {
    const auto count = static_cast<std::size_t>(std::floor(maturity * observations_per_year + 1e-9));
    for (std::size_t k = 1; k <= count; ++k) d.push_back(static_cast<double>(k) / observations_per_year);
  }
  return d;
}

bool ContractSpec::knocked_out(double s) const {
  if (!knock_out()) return false;
  return (upper_barrier && s >= *upper_barrier) || (lower_barrier && s <= *lower_barrier);
}

double intrinsic(OptionType type, double strike, double s) {
  return type == OptionType::Call ? std::max(s - strike, 0.0) : std::max(strike - s, 0.0);
}

std::vector<double> payoff(const ContractSpec& spec, const Grid& grid) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = grid.points[i];
    v[i] = spec.knocked_out(s) ? spec.rebate : intrinsic(spec.type, spec.strike, s);
  }
  return v;
}

namespace {

std::size_t node_at(const Grid& grid, double level) {
  const double tol = 1e-9 * (grid.back() - grid.front());
  auto it = std::lower_bound(grid.points.begin(), grid.points.end(), level - tol);
  if (it == grid.points.end() || std::abs(*it - level) > tol) {
    std::ostringstream s;
    s << "barrier " << level
      << " is not a grid node: place it on the grid (OnGrid placement) or use a ghost barrier mode";
    throw SpecError(s.str());
  }
  return static_cast<std::size_t>(it - grid.points.begin());
}

}  // namespace

ConstraintList constraint_hooks(const ContractSpec& spec, const Grid& grid, const PdeConfig& config) {
  spec.validate();
  ConstraintList hooks;
  const std::size_t n = grid.size();
  switch (spec.style) {
    case ExerciseStyle::EuropeanVanilla:
      break;
    case ExerciseStyle::AmericanVanilla: {
      std::vector<double> obstacle(n);
      for (std::size_t i = 0; i < n; ++i) obstacle[i] = intrinsic(spec.type, spec.strike, grid.points[i]);
      hooks.push_back(std::make_unique<Projection>(std::move(obstacle)));
      break;
    }
    case ExerciseStyle::DiscreteKO:
    case ExerciseStyle::DiscreteDoubleKO: {
      if (config.time_steps == 0) throw SpecError("contract: need at least one time step");
      const double dt = spec.maturity / static_cast<double>(config.time_steps);
      std::vector<std::size_t> steps;
      for (double t : spec.monitoring_dates()) {
        const double x = (spec.maturity - t) / dt;
        const double k = std::round(x);
        if (std::abs(x - k) > 1e-6) {
          std::ostringstream s;
          s << "observation date " << t << " does not fall on the time grid of "
            << config.time_steps << " steps";
          throw SpecError(s.str());
        }
        if (k >= 1.0) steps.push_back(static_cast<std::size_t>(k));
      }
      std::sort(steps.begin(), steps.end());
      steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
      std::vector<std::size_t> nodes;
      for (std::size_t i = 0; i < n; ++i) {
        if (spec.knocked_out(grid.points[i])) nodes.push_back(i);
      }
      hooks.push_back(std::make_unique<DiscreteKnockout>(std::move(nodes), spec.rebate, std::move(steps)));
      break;
    }
    case ExerciseStyle::ContinuousDoubleKO: {
      const double lo = *spec.lower_barrier;
      const double hi = *spec.upper_barrier;
      if (config.barrier_mode == BarrierMode::OnGridDirichlet) {
        const std::size_t jl = node_at(grid, lo);
        const std::size_t ju = node_at(grid, hi);
        hooks.push_back(std::make_unique<DirichletRegion>(0, jl, spec.rebate));
        hooks.push_back(std::make_unique<DirichletRegion>(ju, n - 1, spec.rebate));
      } else {
        const auto interp = config.barrier_mode == BarrierMode::GhostLinear ? GhostInterpolation::Linear
                                                                             : GhostInterpolation::Lagrange3;
        hooks.push_back(std::make_unique<GhostBarrier>(
            make_ghost_context(grid.points, lo, spec.rebate, BarrierSide::Down), interp, grid.points));
        hooks.push_back(std::make_unique<GhostBarrier>(
            make_ghost_context(grid.points, hi, spec.rebate, BarrierSide::Up), interp, grid.points));
      }
      break;
    }
  }
  return hooks;
}

std::vector<double> solve_backward(const ContractSpec& spec, const MarketParams& mkt, const Grid& grid,
                                   const PdeConfig& config) {
  spec.validate();
  if (config.time_steps == 0) throw SpecError("pde: need at least one time step");
  const ConstraintList hooks = constraint_hooks(spec, grid, config);
  TrBdf2Stepper stepper(grid.points, discretize_operator(grid, mkt, config));
  std::vector<double> v = payoff(spec, grid);
  const double dt = spec.maturity / static_cast<double>(config.time_steps);
  for (std::size_t k = 1; k <= config.time_steps; ++k) stepper.step(v, dt, hooks, k);
  return v;
}

double value_at(const Grid& grid, std::span<const double> values, double spot) {
  if (values.size() != grid.size()) throw SpecError("value_at: size mismatch");
  if (!(spot >= grid.front() && spot <= grid.back())) {
    throw SpecError("value_at: spot outside the grid");
  }
  const MonotoneCubic f(grid.points, std::vector<double>(values.begin(), values.end()));
  return f.value(spot);
}

std::vector<double> knock_in_by_parity(std::span<const double> vanilla, std::span<const double> knock_out) {
  if (vanilla.size() != knock_out.size()) throw SpecError("knock_in_by_parity: size mismatch");
  std::vector<double> v(vanilla.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = vanilla[i] - knock_out[i];
  return v;
}

}  // namespace stretchfd
