#pragma once

// Stretched coordinate maps S(u), u in [0,1], concentrating grid nodes near
// critical points (strikes, barriers), and their sampling into grids.

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "stretchfd/monotone_cubic.hpp"

namespace stretchfd {

enum class StretchKind { Uniform, Sinh, Cubic, PiecewiseCubicC1, PiecewiseC2, TavellaRandall };

/// How the quintic blending interval around each interior knot is chosen.
enum class KnotRule {
  Direct,   ///< fraction lambda of the neighbouring knot spacings
  Inverse,  ///< preimages of points between neighbouring critical points
};

struct StretchSpec {
  StretchKind kind = StretchKind::Uniform;
  double s_min = 0.0;
  double s_max = 1.0;
  std::vector<double> critical_points;
  /// One value per critical point, or a single shared value.
  std::vector<double> alphas;
  double chi = 6.0;
  double lambda = 0.25;
  KnotRule knot_rule = KnotRule::Direct;

  double alpha(std::size_t i) const { return alphas.size() == 1 ? alphas[0] : alphas.at(i); }
  double range() const { return s_max - s_min; }

  /// Throws SpecError when an invariant is violated. A spec without critical
  /// points is accepted for every kind and is treated as Uniform.
  void validate() const;
};

/// Unique real root t of t^3/chi + t + d = 0.
double solve_depressed_cubic(double chi, double d);

struct UniformCoefficients {
  double s_min;
  double range;
};

struct SinhCoefficients {
  double b;
  double alpha;
  double c1;
  double c2;
};

struct CubicCoefficients {
  double b;
  double alpha;
  double inv_chi;
  double c1;
  double c2;
};

/// One piece B + alpha*(x^3/chi + x) with x linear in u, going from
/// `x_left` at `d_left` to `x_right` at `d_right`. The x values at the piece
/// ends are the scaled coefficients c'_{2i-1} and c'_{2i}.
struct CubicPiece {
  double b;
  double alpha;
  double d_left;
  double d_right;
  double x_left;
  double x_right;
};

/// Quintic blend sum_k a[k] (u - d_left)^k replacing the C1 pieces on
/// [d_left, d_right] around the interior knot `d_knot`.
struct QuinticPatch {
  std::size_t knot = 0;  ///< 1-based interior knot index
  double d_left = 0.0;
  double d_knot = 0.0;
  double d_right = 0.0;
  double a[6] = {0, 0, 0, 0, 0, 0};
  bool a3_positive = false;
  bool slope_positive = false;  ///< derivative > 0 at every inflection inside
  bool accepted = false;
};

struct PiecewiseCoefficients {
  double inv_chi;
  std::vector<CubicPiece> pieces;   ///< m pieces
  std::vector<double> knots;        ///< d_0 = 0 < d_1 < ... < d_m = 1
  std::vector<QuinticPatch> patches;  ///< empty for the C1 kind
};

struct TavellaRandallCoefficients {
  double scale;  ///< normalizing constant A
  std::size_t ode_steps;
  MonotoneCubic trajectory;
};

class StretchMap {
 public:
  using Payload = std::variant<UniformCoefficients, SinhCoefficients, CubicCoefficients,
                               PiecewiseCoefficients, TavellaRandallCoefficients>;

  StretchMap(StretchSpec spec, Payload payload)
      : spec_(std::move(spec)), payload_(std::move(payload)) {}

  const StretchSpec& spec() const { return spec_; }
  const Payload& payload() const { return payload_; }
  const PiecewiseCoefficients* piecewise() const {
    return std::get_if<PiecewiseCoefficients>(&payload_);
  }

  double value(double u) const;
  double derivative(double u) const;
  double second_derivative(double u) const;

 private:
  StretchSpec spec_;
  Payload payload_;
};

StretchMap build_uniform(const StretchSpec& spec);
StretchMap build_sinh(const StretchSpec& spec);
StretchMap build_cubic(const StretchSpec& spec);
StretchMap build_piecewise_c1(const StretchSpec& spec);
StretchMap build_piecewise_c2(const StretchSpec& spec);
StretchMap build_tavella_randall(const StretchSpec& spec, std::size_t ode_steps);

/// Dispatch on spec.kind. `space_steps` sizes the Tavella-Randall ODE
/// integration (max(16, 8 * space_steps) steps) and is ignored otherwise.
StretchMap build_map(const StretchSpec& spec, std::size_t space_steps = 0);

/// (p_i''(d_i), p_{i+1}''(d_i)) for interior knot 1 <= i <= m-1 of a piecewise
/// map, from the C1 pieces. Empty when the map has no interior knot.
std::optional<std::pair<double, double>> second_derivative_jump(const StretchMap& map,
                                                                std::size_t i);

enum class PlacementGoal { MidCell, OnGrid };

struct PlacedPoint {
  double value;
  std::size_t cell;  ///< index k of the node left of (MidCell) or at (OnGrid) the point
  PlacementGoal goal;
};

struct Grid {
  std::vector<double> points;
  std::vector<PlacedPoint> placed;

  std::size_t size() const { return points.size(); }
  double front() const { return points.front(); }
  double back() const { return points.back(); }
  bool strictly_increasing() const;
};

/// Nodes S(j/I), j = 0..I, with the endpoints set exactly to s_min and s_max.
Grid sample_grid(const StretchMap& map, std::size_t steps);

// Inline evaluation used by the batch kernels.

inline double evaluate(const UniformCoefficients& c, double u) { return c.s_min + c.range * u; }

inline double evaluate(const SinhCoefficients& c, double u) {
  return c.b + c.alpha * std::sinh(c.c2 * u + c.c1 * (1.0 - u));
}

inline double evaluate(const CubicCoefficients& c, double u) {
  const double x = c.c1 + (c.c2 - c.c1) * u;
  return c.b + c.alpha * (x * x * x * c.inv_chi + x);
}

double evaluate(const PiecewiseCoefficients& c, double u);

}  // namespace stretchfd
