#pragma once

// Black-Scholes finite differences on nonuniform grids with TR-BDF2 time
// stepping, backward in calendar time (forward in time to maturity).

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "stretchfd/gridgen.hpp"
#include "stretchfd/tridiagonal.hpp"

namespace stretchfd {

struct MarketParams {
  double rate = 0.0;        ///< continuously compounded, 1/year
  double dividend = 0.0;    ///< continuous yield, 1/year
  double volatility = 0.0;  ///< 1/sqrt(year)

  void validate() const;
};

enum class BoundaryKind {
  DirichletValue,   ///< V = value
  ZeroGamma,        ///< V_SS = 0, one-sided first derivative
  DegenerateExact,  ///< S = 0: V_t = r V
};

struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::ZeroGamma;
  double value = 0.0;
};

enum class BarrierMode { OnGridDirichlet, GhostLinear, GhostLagrange3 };

struct PdeConfig {
  std::size_t time_steps = 1500;
  /// Defaults: DegenerateExact at a lower end S = 0, ZeroGamma otherwise.
  std::optional<BoundaryCondition> lower;
  std::optional<BoundaryCondition> upper;
  BarrierMode barrier_mode = BarrierMode::OnGridDirichlet;
};

/// Three-point weights for V' and V'' at a node with spacings h- and h+.
struct StencilWeights {
  double first[3];
  double second[3];
};
StencilWeights stencil_weights(double h_minus, double h_plus);

/// (L V)_i = lower[i] V_{i-1} + diag[i] V_i + upper[i] V_{i+1} with
/// L V = 1/2 sigma^2 S^2 V_SS + (r - q) S V_S - r V. Dirichlet boundary rows
/// are zero; the stepper replaces them.
struct SpatialOperator {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
  BoundaryCondition lower_bc;
  BoundaryCondition upper_bc;

  std::size_t size() const { return diag.size(); }
  void apply(std::span<const double> v, std::span<double> out) const;
};

SpatialOperator discretize_operator(std::span<const double> points, const MarketParams& mkt,
                                    BoundaryCondition lower, BoundaryCondition upper);
SpatialOperator discretize_operator(const Grid& grid, const MarketParams& mkt,
                                    const PdeConfig& config = {});

// ---------------------------------------------------------------------------
// Ghost-point barrier rows.

enum class BarrierSide { Up, Down };

/// The ghost node i0 is the first node at or beyond the barrier, seen from
/// the inside: S_{i0-1} < B <= S_{i0} for Up, S_{i0} <= B < S_{i0+1} for Down.
/// Nodes further out are pinned to the rebate.
struct GhostContext {
  std::size_t i0;
  double barrier;
  double rebate;
  BarrierSide side;

  std::size_t inner(std::size_t k) const { return side == BarrierSide::Up ? i0 - k : i0 + k; }
};

GhostContext make_ghost_context(std::span<const double> points, double barrier, double rebate,
                                BarrierSide side);

/// Explicit substage: override the ghost value before the right-hand side is
/// assembled, so that linear interpolation hits the rebate at the barrier.
void apply_ghost_linear(const GhostContext& ctx, std::span<const double> points,
                        std::span<double> values);
/// Implicit substage: write the interpolation relation into row i0.
void apply_ghost_linear(const GhostContext& ctx, std::span<const double> points,
                        TridiagonalSystem& sys);

void apply_ghost_lagrange3(const GhostContext& ctx, std::span<const double> points,
                           std::span<double> values);
/// Leaves an out-of-band entry at column i0 -/+ 2; see reduce_outofband.
void apply_ghost_lagrange3(const GhostContext& ctx, std::span<const double> points,
                           TridiagonalSystem& sys);

// ---------------------------------------------------------------------------
// Constraints applied by the stepper.

enum class Stage { Trapezoidal, Bdf2 };

struct StageContext {
  Stage stage;
  std::size_t step;  ///< 1-based count of steps taken from maturity
};

class Constraint {
 public:
  virtual ~Constraint() = default;
  /// Values used for the explicit part of the trapezoidal stage.
  virtual void override_explicit(std::span<double> /*values*/) const {}
  /// Rows of the implicit system, for both stages.
  virtual void adjust_system(TridiagonalSystem& /*sys*/) const {}
  /// Solution of each stage.
  virtual void after_stage(std::span<double> /*values*/, const StageContext& /*ctx*/) const {}
};

using ConstraintList = std::vector<std::unique_ptr<Constraint>>;

/// V = value on nodes [first, last] at all times.
class DirichletRegion : public Constraint {
 public:
  DirichletRegion(std::size_t first, std::size_t last, double value)
      : first_(first), last_(last), value_(value) {}
  void override_explicit(std::span<double> values) const override;
  void adjust_system(TridiagonalSystem& sys) const override;
  void after_stage(std::span<double> values, const StageContext& ctx) const override;

 private:
  std::size_t first_, last_;
  double value_;
};

enum class GhostInterpolation { Linear, Lagrange3 };

class GhostBarrier : public Constraint {
 public:
  GhostBarrier(GhostContext ctx, GhostInterpolation interp, std::vector<double> points)
      : ctx_(ctx), interp_(interp), points_(std::move(points)) {}
  void override_explicit(std::span<double> values) const override;
  void adjust_system(TridiagonalSystem& sys) const override;
  const GhostContext& context() const { return ctx_; }

 private:
  GhostContext ctx_;
  GhostInterpolation interp_;
  std::vector<double> points_;
};

/// American exercise: V <- max(V, obstacle) after every stage.
class Projection : public Constraint {
 public:
  explicit Projection(std::vector<double> obstacle) : obstacle_(std::move(obstacle)) {}
  void after_stage(std::span<double> values, const StageContext& ctx) const override;
  std::span<const double> obstacle() const { return obstacle_; }

 private:
  std::vector<double> obstacle_;
};

/// Discrete monitoring: V <- rebate on the knocked-out nodes at the end of the
/// listed steps.
class DiscreteKnockout : public Constraint {
 public:
  DiscreteKnockout(std::vector<std::size_t> nodes, double rebate, std::vector<std::size_t> steps)
      : nodes_(std::move(nodes)), rebate_(rebate), steps_(std::move(steps)) {}
  void after_stage(std::span<double> values, const StageContext& ctx) const override;

 private:
  std::vector<std::size_t> nodes_;
  double rebate_;
  std::vector<std::size_t> steps_;  // sorted
};

// ---------------------------------------------------------------------------

/// Composite TR-BDF2 step with gamma = 2 - sqrt(2): a trapezoidal substage
/// over gamma*dt followed by BDF2 over the remaining (1-gamma)*dt. Both
/// substages share the matrix I - (gamma/2) dt L. Owns its work buffers, so
/// one instance must not be shared between threads.
class TrBdf2Stepper {
 public:
  static inline const double kGamma = 2.0 - std::sqrt(2.0);

  TrBdf2Stepper(std::vector<double> points, SpatialOperator op);

  void step(std::span<double> values, double dt, const ConstraintList& constraints,
            std::size_t step_index);

  const SpatialOperator& op() const { return op_; }
  std::span<const double> points() const { return points_; }

 private:
  void prepare(double dt);
  void solve_stage(const ConstraintList& constraints);

  std::vector<double> points_;
  SpatialOperator op_;
  double dt_ = -1.0;
  TridiagonalSystem base_;
  TridiagonalSystem sys_;
  std::vector<double> explicit_, lv_, stage_, scratch_;
};

}  // namespace stretchfd
