#include "stretchfd/fdm.hpp"

#include <algorithm>
#include <sstream>

#include "stretchfd/error.hpp"

namespace stretchfd {

void MarketParams::validate() const {
  if (!std::isfinite(rate) || !std::isfinite(dividend) || !std::isfinite(volatility)) {
    throw DomainError("market: non-finite parameter");
  }
  if (volatility < 0.0) throw DomainError("market: volatility must be nonnegative");
}

StencilWeights stencil_weights(double hm, double hp) {
  const double s = hm + hp;
  return StencilWeights{{-hp / (hm * s), (hp - hm) / (hm * hp), hm / (hp * s)},
                        {2.0 / (hm * s), -2.0 / (hm * hp), 2.0 / (hp * s)}};
}

void SpatialOperator::apply(std::span<const double> v, std::span<double> out) const {
  const std::size_t n = size();
  if (n == 1) {
    out[0] = diag[0] * v[0];
    return;
  }
  out[0] = diag[0] * v[0] + upper[0] * v[1];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = lower[i] * v[i - 1] + diag[i] * v[i] + upper[i] * v[i + 1];
  }
  out[n - 1] = lower[n - 1] * v[n - 2] + diag[n - 1] * v[n - 1];
}

SpatialOperator discretize_operator(std::span<const double> s, const MarketParams& mkt,
                                    BoundaryCondition lower_bc, BoundaryCondition upper_bc) {
  mkt.validate();
  const std::size_t n = s.size();
  if (n < 3) throw SpecError("discretize_operator: need at least three nodes");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(s[i] > s[i - 1])) throw SpecError("discretize_operator: grid is not strictly increasing");
  }
  SpatialOperator op{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                     std::vector<double>(n, 0.0), lower_bc, upper_bc};
  const double r = mkt.rate;
  const double drift = mkt.rate - mkt.dividend;
  const double half_var = 0.5 * mkt.volatility * mkt.volatility;

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const StencilWeights w = stencil_weights(s[i] - s[i - 1], s[i + 1] - s[i]);
    const double a = half_var * s[i] * s[i];
    const double b = drift * s[i];
    op.lower[i] = a * w.second[0] + b * w.first[0];
    op.diag[i] = a * w.second[1] + b * w.first[1] - r;
    op.upper[i] = a * w.second[2] + b * w.first[2];
  }

  switch (lower_bc.kind) {
    case BoundaryKind::DirichletValue:
      break;
    case BoundaryKind::DegenerateExact:
      if (s[0] != 0.0) throw SpecError("discretize_operator: degenerate lower boundary needs S_0 = 0");
      op.diag[0] = -r;
      break;
    case BoundaryKind::ZeroGamma: {
      const double b = drift * s[0] / (s[1] - s[0]);
      op.diag[0] = -b - r;
      op.upper[0] = b;
      break;
    }
  }
  switch (upper_bc.kind) {
    case BoundaryKind::DirichletValue:
      break;
    case BoundaryKind::DegenerateExact:
      throw SpecError("discretize_operator: degenerate boundary only applies at S = 0");
    case BoundaryKind::ZeroGamma: {
      const double b = drift * s[n - 1] / (s[n - 1] - s[n - 2]);
      op.lower[n - 1] = -b;
      op.diag[n - 1] = b - r;
      break;
    }
  }
  return op;
}

SpatialOperator discretize_operator(const Grid& grid, const MarketParams& mkt, const PdeConfig& config) {
  const BoundaryCondition lower = config.lower.value_or(BoundaryCondition{
      grid.front() == 0.0 ? BoundaryKind::DegenerateExact : BoundaryKind::ZeroGamma, 0.0});
  const BoundaryCondition upper = config.upper.value_or(BoundaryCondition{BoundaryKind::ZeroGamma, 0.0});
  return discretize_operator(grid.points, mkt, lower, upper);
}

// ---------------------------------------------------------------------------

GhostContext make_ghost_context(std::span<const double> s, double barrier, double rebate,
                                BarrierSide side) {
  const std::size_t n = s.size();
  GhostContext ctx{0, barrier, rebate, side};
  if (side == BarrierSide::Up) {
    auto it = std::lower_bound(s.begin(), s.end(), barrier);
    if (it == s.end() || it == s.begin()) {
      throw SpecError("ghost: upper barrier must lie inside (S_0, S_max]");
    }
    ctx.i0 = static_cast<std::size_t>(it - s.begin());
  } else {
    auto it = std::upper_bound(s.begin(), s.end(), barrier);
    if (it == s.begin() || it == s.end()) {
      throw SpecError("ghost: lower barrier must lie inside [S_0, S_max)");
    }
    ctx.i0 = static_cast<std::size_t>(it - s.begin()) - 1;
  }
  (void)n;
  return ctx;
}

namespace {

void pin_beyond(const GhostContext& ctx, std::span<double> values) {
  if (ctx.side == BarrierSide::Up) {
    for (std::size_t i = ctx.i0 + 1; i < values.size(); ++i) values[i] = ctx.rebate;
  } else {
    for (std::size_t i = 0; i < ctx.i0; ++i) values[i] = ctx.rebate;
  }
}

void pin_beyond(const GhostContext& ctx, TridiagonalSystem& sys) {
  if (ctx.side == BarrierSide::Up) {
    for (std::size_t i = ctx.i0 + 1; i < sys.size(); ++i) sys.set_dirichlet(i, ctx.rebate);
  } else {
    for (std::size_t i = 0; i < ctx.i0; ++i) sys.set_dirichlet(i, ctx.rebate);
  }
}

struct LinearWeights {
  double ghost, inner;
};

LinearWeights linear_weights(const GhostContext& ctx, std::span<const double> s) {
  const double g = s[ctx.i0];
  const double p = s[ctx.inner(1)];
  if (ctx.barrier == p) {
    throw SpecError("ghost: barrier coincides with the inner node; use OnGridDirichlet");
  }
  return {(ctx.barrier - p) / (g - p), (g - ctx.barrier) / (g - p)};
}

struct LagrangeWeights {
  double ghost, inner1, inner2;
};

LagrangeWeights lagrange_weights(const GhostContext& ctx, std::span<const double> s) {
  if (ctx.side == BarrierSide::Up ? ctx.i0 < 2 : ctx.i0 + 2 >= s.size()) {
    throw SpecError("ghost: three-point interpolation needs two inner nodes");
  }
  const double b = ctx.barrier;
  const double g = s[ctx.i0];
  const double p1 = s[ctx.inner(1)];
  const double p2 = s[ctx.inner(2)];
  if (b == p1) throw SpecError("ghost: barrier coincides with the inner node; use OnGridDirichlet");
  return {(b - p1) * (b - p2) / ((g - p1) * (g - p2)), (b - g) * (b - p2) / ((p1 - g) * (p1 - p2)),
          (b - g) * (b - p1) / ((p2 - g) * (p2 - p1))};
}

// Row i0 of the implicit system: ghost weight on the diagonal, the inner
// neighbour on the side facing the domain, nothing outward.
void write_ghost_row(const GhostContext& ctx, TridiagonalSystem& sys, double ghost, double inner) {
  const std::size_t i = ctx.i0;
  sys.diag[i] = ghost;
  if (ctx.side == BarrierSide::Up) {
    sys.lower[i] = inner;
    sys.upper[i] = 0.0;
  } else {
    sys.upper[i] = inner;
    sys.lower[i] = 0.0;
  }
  sys.rhs[i] = ctx.rebate;
  std::erase_if(sys.out_of_band, [i](const OutOfBandEntry& e) { return e.row == i; });
}

}  // namespace

void apply_ghost_linear(const GhostContext& ctx, std::span<const double> s, std::span<double> v) {
  const LinearWeights w = linear_weights(ctx, s);
  v[ctx.i0] = (ctx.rebate - w.inner * v[ctx.inner(1)]) / w.ghost;
  pin_beyond(ctx, v);
}

void apply_ghost_linear(const GhostContext& ctx, std::span<const double> s, TridiagonalSystem& sys) {
  const LinearWeights w = linear_weights(ctx, s);
  pin_beyond(ctx, sys);
  write_ghost_row(ctx, sys, w.ghost, w.inner);
}

void apply_ghost_lagrange3(const GhostContext& ctx, std::span<const double> s, std::span<double> v) {
  const LagrangeWeights w = lagrange_weights(ctx, s);
  v[ctx.i0] = (ctx.rebate - w.inner1 * v[ctx.inner(1)] - w.inner2 * v[ctx.inner(2)]) / w.ghost;
  pin_beyond(ctx, v);
}

void apply_ghost_lagrange3(const GhostContext& ctx, std::span<const double> s, TridiagonalSystem& sys) {
  const LagrangeWeights w = lagrange_weights(ctx, s);
  pin_beyond(ctx, sys);
  write_ghost_row(ctx, sys, w.ghost, w.inner1);
  if (w.inner2 != 0.0) sys.out_of_band.push_back({ctx.i0, ctx.inner(2), w.inner2});
}

// ---------------------------------------------------------------------------

void DirichletRegion::override_explicit(std::span<double> v) const {
  for (std::size_t i = first_; i <= last_; ++i) v[i] = value_;
}

void DirichletRegion::adjust_system(TridiagonalSystem& sys) const {
  for (std::size_t i = first_; i <= last_; ++i) sys.set_dirichlet(i, value_);
}

void DirichletRegion::after_stage(std::span<double> v, const StageContext&) const {
  for (std::size_t i = first_; i <= last_; ++i) v[i] = value_;
}

void GhostBarrier::override_explicit(std::span<double> v) const {
  if (interp_ == GhostInterpolation::Linear) {
    apply_ghost_linear(ctx_, points_, v);
  } else {
    apply_ghost_lagrange3(ctx_, points_, v);
  }
}

void GhostBarrier::adjust_system(TridiagonalSystem& sys) const {
  if (interp_ == GhostInterpolation::Linear) {
    apply_ghost_linear(ctx_, points_, sys);
  } else {
    apply_ghost_lagrange3(ctx_, points_, sys);
  }
}

void Projection::after_stage(std::span<double> v, const StageContext&) const {
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(v[i], obstacle_[i]);
}

void DiscreteKnockout::after_stage(std::span<double> v, const StageContext& ctx) const {
  if (ctx.stage != Stage::Bdf2) return;
  if (!std::binary_search(steps_.begin(), steps_.end(), ctx.step)) return;
  for (std::size_t i : nodes_) v[i] = rebate_;
}

// ---------------------------------------------------------------------------

TrBdf2Stepper::TrBdf2Stepper(std::vector<double> points, SpatialOperator op)
    : points_(std::move(points)), op_(std::move(op)) {
  if (points_.size() != op_.size()) throw SpecError("TrBdf2Stepper: grid and operator sizes differ");
  const std::size_t n = op_.size();
  explicit_.resize(n);
  lv_.resize(n);
  stage_.resize(n);
  scratch_.resize(n);
}

void TrBdf2Stepper::prepare(double dt) {
  if (dt == dt_) return;
  const std::size_t n = op_.size();
  const double theta = 0.5 * kGamma * dt;
  base_ = TridiagonalSystem(n);
  for (std::size_t i = 0; i < n; ++i) {
    base_.lower[i] = -theta * op_.lower[i];
    base_.diag[i] = 1.0 - theta * op_.diag[i];
    base_.upper[i] = -theta * op_.upper[i];
  }
  if (op_.lower_bc.kind == BoundaryKind::DirichletValue) base_.set_dirichlet(0, op_.lower_bc.value);
  if (op_.upper_bc.kind == BoundaryKind::DirichletValue) base_.set_dirichlet(n - 1, op_.upper_bc.value);
  dt_ = dt;
}

void TrBdf2Stepper::solve_stage(const ConstraintList& constraints) {
  const std::size_t n = op_.size();
  if (op_.lower_bc.kind == BoundaryKind::DirichletValue) sys_.rhs[0] = op_.lower_bc.value;
  if (op_.upper_bc.kind == BoundaryKind::DirichletValue) sys_.rhs[n - 1] = op_.upper_bc.value;
  for (const auto& c : constraints) c->adjust_system(sys_);
  reduce_outofband(sys_);
  solve_tridiagonal(sys_, stage_, scratch_);
}

void TrBdf2Stepper::step(std::span<double> v, double dt, const ConstraintList& constraints,
                         std::size_t step_index) {
  if (!(dt > 0.0)) throw SpecError("TrBdf2Stepper: dt must be positive");
  if (v.size() != op_.size()) throw SpecError("TrBdf2Stepper: value vector size mismatch");
  prepare(dt);
  const std::size_t n = op_.size();
  const double theta = 0.5 * kGamma * dt;

  // Trapezoidal substage.
  std::copy(v.begin(), v.end(), explicit_.begin());
  for (const auto& c : constraints) c->override_explicit(explicit_);
  op_.apply(explicit_, lv_);
  sys_.lower = base_.lower;
  sys_.diag = base_.diag;
  sys_.upper = base_.upper;
  sys_.out_of_band.clear();
  sys_.rhs.resize(n);
  for (std::size_t i = 0; i < n; ++i) sys_.rhs[i] = explicit_[i] + theta * lv_[i];
  solve_stage(constraints);
  for (const auto& c : constraints) c->after_stage(stage_, {Stage::Trapezoidal, step_index});

  // BDF2 substage on the same matrix.
  const double a = 1.0 / (kGamma * (2.0 - kGamma));
  const double b = (1.0 - kGamma) * (1.0 - kGamma) / (kGamma * (2.0 - kGamma));
  sys_.lower = base_.lower;
  sys_.diag = base_.diag;
  sys_.upper = base_.upper;
  sys_.out_of_band.clear();
  for (std::size_t i = 0; i < n; ++i) sys_.rhs[i] = a * stage_[i] - b * v[i];
  solve_stage(constraints);
  std::copy(stage_.begin(), stage_.end(), v.begin());
  for (const auto& c : constraints) c->after_stage(v, {Stage::Bdf2, step_index});
}

}  // namespace stretchfd
