#include "stretchfd/gridgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gridgen_detail.hpp"
#include "stretchfd/error.hpp"

namespace stretchfd {

void StretchSpec::validate() const {
  if (!std::isfinite(s_min) || !std::isfinite(s_max) || !(s_min < s_max)) {
    throw SpecError("stretch: need finite s_min < s_max");
  }
  const std::size_t m = critical_points.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double b = critical_points[i];
    if (!(b > s_min && b < s_max)) {
      throw SpecError("stretch: critical point " + std::to_string(b) +
                      " not strictly inside (s_min, s_max)");
    }
    if (i > 0 && !(b > critical_points[i - 1])) {
      throw SpecError("stretch: critical points must be strictly increasing");
    }
  }
  if (m > 0) {
    if (alphas.size() != 1 && alphas.size() != m) {
      throw SpecError("stretch: need one alpha per critical point or a single shared alpha");
    }
  }
  for (double a : alphas) {
    if (!(a > 0.0) || !std::isfinite(a)) throw SpecError("stretch: alpha must be positive");
  }
  if (!(chi > 0.0) || !std::isfinite(chi)) throw SpecError("stretch: chi must be positive");
  if (!(lambda > 0.0 && lambda <= 0.5)) throw SpecError("stretch: lambda must lie in (0, 1/2]");
  if ((kind == StretchKind::Sinh || kind == StretchKind::Cubic) && m > 1) {
    throw SpecError("stretch: sinh and cubic kinds take exactly one critical point");
  }
}

double solve_depressed_cubic(double chi, double d) {
  if (!std::isfinite(chi) || !std::isfinite(d)) {
    throw DomainError("solve_depressed_cubic: non-finite input");
  }
  if (!(chi > 0.0)) throw DomainError("solve_depressed_cubic: chi must be positive");
  if (d == 0.0) return 0.0;
  // t^3 + p t + q = 0 with p = chi > 0: one real root, hyperbolic form.
  const double p = chi;
  const double q = chi * d;
  const double k = std::sqrt(p / 3.0);
  double t = -2.0 * k * std::sinh(std::asinh(1.5 * q / (p * k)) / 3.0);
  const double f = t * t * t / chi + t + d;
  const double df = 3.0 * t * t / chi + 1.0;
  t -= f / df;
  return t;
}

StretchMap build_uniform(const StretchSpec& spec) {
  spec.validate();
  StretchSpec s = spec;
  s.kind = StretchKind::Uniform;
  return StretchMap(std::move(s), UniformCoefficients{spec.s_min, spec.range()});
}

StretchMap build_sinh(const StretchSpec& spec) {
  spec.validate();
  if (spec.critical_points.empty()) return build_uniform(spec);
  if (spec.kind != StretchKind::Sinh) throw SpecError("build_sinh: spec kind is not Sinh");
  const double b = spec.critical_points[0];
  const double a = spec.alpha(0);
  SinhCoefficients c{b, a, std::asinh((spec.s_min - b) / a), std::asinh((spec.s_max - b) / a)};
  return StretchMap(spec, c);
}

StretchMap build_cubic(const StretchSpec& spec) {
  spec.validate();
  if (spec.critical_points.empty()) return build_uniform(spec);
  if (spec.kind != StretchKind::Cubic) throw SpecError("build_cubic: spec kind is not Cubic");
  const double b = spec.critical_points[0];
  const double a = spec.alpha(0);
  CubicCoefficients c{b, a, 1.0 / spec.chi, solve_depressed_cubic(spec.chi, (b - spec.s_min) / a),
                      solve_depressed_cubic(spec.chi, (b - spec.s_max) / a)};
  return StretchMap(spec, c);
}

StretchMap build_map(const StretchSpec& spec, std::size_t space_steps) {
  if (spec.critical_points.empty()) return build_uniform(spec);
  switch (spec.kind) {
    case StretchKind::Uniform:
      return build_uniform(spec);
    case StretchKind::Sinh:
      return build_sinh(spec);
    case StretchKind::Cubic:
      return build_cubic(spec);
    case StretchKind::PiecewiseCubicC1:
      return build_piecewise_c1(spec);
    case StretchKind::PiecewiseC2:
      return build_piecewise_c2(spec);
    case StretchKind::TavellaRandall:
      return build_tavella_randall(spec, std::max<std::size_t>(16, 8 * space_steps));
  }
  throw SpecError("build_map: unknown stretch kind");
}

double StretchMap::value(double u) const {
  return std::visit(
      [u](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TavellaRandallCoefficients>) {
          return c.trajectory.value(u);
        } else {
          return evaluate(c, u);
        }
      },
      payload_);
}

double StretchMap::derivative(double u) const {
  return std::visit(
      [u](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, UniformCoefficients>) {
          return c.range;
        } else if constexpr (std::is_same_v<T, SinhCoefficients>) {
          return c.alpha * (c.c2 - c.c1) * std::cosh(c.c2 * u + c.c1 * (1.0 - u));
        } else if constexpr (std::is_same_v<T, CubicCoefficients>) {
          const double x = c.c1 + (c.c2 - c.c1) * u;
          return c.alpha * (3.0 * x * x * c.inv_chi + 1.0) * (c.c2 - c.c1);
        } else if constexpr (std::is_same_v<T, PiecewiseCoefficients>) {
          return detail::piecewise_derivative(c, u);
        } else {
          return c.trajectory.derivative(u);
        }
      },
      payload_);
}

double StretchMap::second_derivative(double u) const {
  return std::visit(
      [u](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, UniformCoefficients>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, SinhCoefficients>) {
          const double w = c.c2 - c.c1;
          return c.alpha * w * w * std::sinh(c.c2 * u + c.c1 * (1.0 - u));
        } else if constexpr (std::is_same_v<T, CubicCoefficients>) {
          const double w = c.c2 - c.c1;
          const double x = c.c1 + w * u;
          return c.alpha * 6.0 * x * c.inv_chi * w * w;
        } else if constexpr (std::is_same_v<T, PiecewiseCoefficients>) {
          return detail::piecewise_second_derivative(c, u);
        } else {
          // Only the Hermite interpolant is available; difference its slope.
          const double h = 1e-6;
          const double lo = std::max(0.0, u - h);
          const double hi = std::min(1.0, u + h);
          return (c.trajectory.derivative(hi) - c.trajectory.derivative(lo)) / (hi - lo);
        }
      },
      payload_);
}

bool Grid::strictly_increasing() const {
  for (std::size_t j = 1; j < points.size(); ++j) {
    if (!(points[j] > points[j - 1])) return false;
  }
  return true;
}

Grid sample_grid(const StretchMap& map, std::size_t steps) {
  if (steps < 2) throw SpecError("sample_grid: need at least two steps");
  Grid g;
  g.points.resize(steps + 1);
  const double inv = 1.0 / static_cast<double>(steps);
  for (std::size_t j = 1; j < steps; ++j) g.points[j] = map.value(static_cast<double>(j) * inv);
  g.points.front() = map.spec().s_min;
  g.points.back() = map.spec().s_max;
  if (!g.strictly_increasing()) {
    throw ConstructionError("sample_grid: stretched nodes are not strictly increasing");
  }
  return g;
}

}  // namespace stretchfd
