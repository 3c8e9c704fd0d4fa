#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "gridgen_detail.hpp"
#include "stretchfd/error.hpp"
#include "stretchfd/gridgen.hpp"

namespace stretchfd {

namespace detail {

namespace {

double piece_x(const CubicPiece& p, double u) {
  return p.x_left + (p.x_right - p.x_left) * (u - p.d_left) / (p.d_right - p.d_left);
}

double piece_rate(const CubicPiece& p) { return (p.x_right - p.x_left) / (p.d_right - p.d_left); }

}  // namespace

double piece_value(const CubicPiece& p, double inv_chi, double u) {
  const double x = piece_x(p, u);
  return p.b + p.alpha * (x * x * x * inv_chi + x);
}

double piece_slope(const CubicPiece& p, double inv_chi, double u) {
  const double x = piece_x(p, u);
  return p.alpha * (3.0 * x * x * inv_chi + 1.0) * piece_rate(p);
}

double piece_curvature(const CubicPiece& p, double inv_chi, double u) {
  const double x = piece_x(p, u);
  const double w = piece_rate(p);
  return p.alpha * 6.0 * x * inv_chi * w * w;
}

double piece_inverse(const CubicPiece& p, double chi, double s) {
  const double x = solve_depressed_cubic(chi, (p.b - s) / p.alpha);
  return p.d_left + (x - p.x_left) * (p.d_right - p.d_left) / (p.x_right - p.x_left);
}

namespace {

std::size_t piece_index(const PiecewiseCoefficients& c, double u) {
  // knots[0] = 0 ... knots[m] = 1; piece k covers [knots[k], knots[k+1]).
  auto it = std::upper_bound(c.knots.begin() + 1, c.knots.end() - 1, u);
  return static_cast<std::size_t>(it - (c.knots.begin() + 1));
}

const QuinticPatch* active_patch(const PiecewiseCoefficients& c, double u) {
  for (const auto& q : c.patches) {
    if (q.accepted && u >= q.d_left && u <= q.d_right) return &q;
  }
  return nullptr;
}

double quintic_value(const QuinticPatch& q, double u) {
  const double t = u - q.d_left;
  return q.a[0] + t * (q.a[1] + t * (q.a[2] + t * (q.a[3] + t * (q.a[4] + t * q.a[5]))));
}

double quintic_slope(const QuinticPatch& q, double u) {
  const double t = u - q.d_left;
  return q.a[1] + t * (2.0 * q.a[2] + t * (3.0 * q.a[3] + t * (4.0 * q.a[4] + t * 5.0 * q.a[5])));
}

double quintic_curvature(const QuinticPatch& q, double u) {
  const double t = u - q.d_left;
  return 2.0 * q.a[2] + t * (6.0 * q.a[3] + t * (12.0 * q.a[4] + t * 20.0 * q.a[5]));
}

}  // namespace

double piecewise_derivative(const PiecewiseCoefficients& c, double u) {
  if (const auto* q = active_patch(c, u)) return quintic_slope(*q, u);
  return piece_slope(c.pieces[piece_index(c, u)], c.inv_chi, u);
}

double piecewise_second_derivative(const PiecewiseCoefficients& c, double u) {
  if (const auto* q = active_patch(c, u)) return quintic_curvature(*q, u);
  return piece_curvature(c.pieces[piece_index(c, u)], c.inv_chi, u);
}

}  // namespace detail

double evaluate(const PiecewiseCoefficients& c, double u) {
  for (const auto& q : c.patches) {
    if (q.accepted && u >= q.d_left && u <= q.d_right) {
      const double t = u - q.d_left;
      return q.a[0] + t * (q.a[1] + t * (q.a[2] + t * (q.a[3] + t * (q.a[4] + t * q.a[5]))));
    }
  }
  auto it = std::upper_bound(c.knots.begin() + 1, c.knots.end() - 1, u);
  const auto k = static_cast<std::size_t>(it - (c.knots.begin() + 1));
  return detail::piece_value(c.pieces[k], c.inv_chi, u);
}

namespace {

PiecewiseCoefficients c1_coefficients(const StretchSpec& spec) {
  const auto& b = spec.critical_points;
  const std::size_t m = b.size();
  std::vector<double> mids(m + 1);
  mids[0] = spec.s_min;
  mids[m] = spec.s_max;
  for (std::size_t i = 1; i < m; ++i) mids[i] = 0.5 * (b[i - 1] + b[i]);

  PiecewiseCoefficients c;
  c.inv_chi = 1.0 / spec.chi;
  c.pieces.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto& p = c.pieces[i];
    p.b = b[i];
    p.alpha = spec.alpha(i);
    p.x_left = solve_depressed_cubic(spec.chi, (b[i] - mids[i]) / p.alpha);
    p.x_right = solve_depressed_cubic(spec.chi, (b[i] - mids[i + 1]) / p.alpha);
  }

  // C1 at each interior knot: P_i h_{i+1} = Q_i h_i, with sum h_i = 1.
  std::vector<double> h(m);
  h[0] = 1.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const auto& l = c.pieces[i];
    const auto& r = c.pieces[i + 1];
    const double left = l.alpha * (3.0 * l.x_right * l.x_right * c.inv_chi + 1.0) *
                        (l.x_right - l.x_left);
    const double right = r.alpha * (3.0 * r.x_left * r.x_left * c.inv_chi + 1.0) *
                         (r.x_right - r.x_left);
    h[i + 1] = h[i] * right / left;
  }
  double total = 0.0;
  for (double v : h) total += v;
  c.knots.assign(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double width = h[i] / total;
    if (!(width > 0.0) || !std::isfinite(width)) {
      throw ConstructionError("piecewise cubic: knot collapse in piece " + std::to_string(i + 1));
    }
    c.knots[i + 1] = c.knots[i] + width;
  }
  c.knots[m] = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(c.knots[i + 1] > c.knots[i])) {
      throw ConstructionError("piecewise cubic: knot collapse in piece " + std::to_string(i + 1));
    }
    c.pieces[i].d_left = c.knots[i];
    c.pieces[i].d_right = c.knots[i + 1];
  }
  return c;
}

// Real roots of the cubic c0 + c1 t + c2 t^2 + c3 t^3 strictly inside (0, len).
std::vector<double> cubic_roots_in(const std::array<double, 4>& c, double len) {
  auto f = [&](double t) { return c[0] + t * (c[1] + t * (c[2] + t * c[3])); };
  // Split at the stationary points so f is monotone on each sub-interval.
  std::vector<double> cuts{0.0};
  const double qa = 3.0 * c[3], qb = 2.0 * c[2], qc = c[1];
  if (qa != 0.0) {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc > 0.0) {
      const double s = std::sqrt(disc);
      for (double r : {(-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)}) {
        if (r > 0.0 && r < len) cuts.push_back(r);
      }
    }
  } else if (qb != 0.0) {
    const double r = -qc / qb;
    if (r > 0.0 && r < len) cuts.push_back(r);
  }
  cuts.push_back(len);
  std::sort(cuts.begin(), cuts.end());

  std::vector<double> roots;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double lo = cuts[k], hi = cuts[k + 1];
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0 && lo > 0.0) roots.push_back(lo);
    if (flo * fhi >= 0.0) continue;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * len; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    roots.push_back(0.5 * (lo + hi));
  }
  return roots;
}

QuinticPatch make_patch(const StretchSpec& spec, const PiecewiseCoefficients& c, std::size_t knot) {
  const auto& left = c.pieces[knot - 1];
  const auto& right = c.pieces[knot];
  const double d = c.knots[knot];
  QuinticPatch q;
  q.knot = knot;
  q.d_knot = d;
  if (spec.knot_rule == KnotRule::Direct) {
    q.d_left = d - spec.lambda * (d - c.knots[knot - 1]);
    q.d_right = d + spec.lambda * (c.knots[knot + 1] - d);
  } else {
    const double gap = (right.b - left.b) * (0.5 - spec.lambda);
    q.d_left = detail::piece_inverse(left, spec.chi, left.b + gap);
    q.d_right = detail::piece_inverse(right, spec.chi, right.b - gap);
  }
  const double delta = q.d_right - q.d_left;
  if (!(delta > 0.0)) {
    throw ConstructionError("piecewise C2: empty quintic interval at knot " + std::to_string(knot));
  }

  q.a[0] = detail::piece_value(left, c.inv_chi, q.d_left);
  q.a[1] = detail::piece_slope(left, c.inv_chi, q.d_left);
  q.a[2] = 0.5 * detail::piece_curvature(left, c.inv_chi, q.d_left);
  const double r0 = detail::piece_value(right, c.inv_chi, q.d_right) -
                    (q.a[0] + q.a[1] * delta + q.a[2] * delta * delta);
  const double r1 = detail::piece_slope(right, c.inv_chi, q.d_right) - (q.a[1] + 2.0 * q.a[2] * delta);
  const double r2 = detail::piece_curvature(right, c.inv_chi, q.d_right) - 2.0 * q.a[2];
  // Closed-form inverse of [[D^3 D^4 D^5]; [3D^2 4D^3 5D^4]; [6D 12D^2 20D^3]].
  const double s1 = r1 * delta;
  const double s2 = r2 * delta * delta;
  q.a[3] = (10.0 * r0 - 4.0 * s1 + 0.5 * s2) / (delta * delta * delta);
  q.a[4] = (-15.0 * r0 + 7.0 * s1 - s2) / (delta * delta * delta * delta);
  q.a[5] = (6.0 * r0 - 3.0 * s1 + 0.5 * s2) / (delta * delta * delta * delta * delta);

  q.a3_positive = q.a[3] > 0.0;
  // Monotone iff the slope stays positive at every inflection point inside.
  const std::array<double, 4> curvature{2.0 * q.a[2], 6.0 * q.a[3], 12.0 * q.a[4], 20.0 * q.a[5]};
  q.slope_positive = true;
  for (double t : cubic_roots_in(curvature, delta)) {
    const double slope = q.a[1] + t * (2.0 * q.a[2] + t * (3.0 * q.a[3] + t * (4.0 * q.a[4] + t * 5.0 * q.a[5])));
    if (!(slope > 0.0)) q.slope_positive = false;
  }
  q.accepted = q.a3_positive && q.slope_positive;
  return q;
}

}  // namespace

StretchMap build_piecewise_c1(const StretchSpec& spec) {
  spec.validate();
  if (spec.critical_points.empty()) return build_uniform(spec);
  if (spec.kind != StretchKind::PiecewiseCubicC1 && spec.kind != StretchKind::PiecewiseC2) {
    throw SpecError("build_piecewise_c1: spec kind is not piecewise");
  }
  return StretchMap(spec, c1_coefficients(spec));
}

StretchMap build_piecewise_c2(const StretchSpec& spec) {
  spec.validate();
  if (spec.critical_points.empty()) return build_uniform(spec);
  if (spec.kind != StretchKind::PiecewiseC2) throw SpecError("build_piecewise_c2: spec kind is not PiecewiseC2");
  PiecewiseCoefficients c = c1_coefficients(spec);
  for (std::size_t knot = 1; knot + 1 < c.knots.size(); ++knot) {
    c.patches.push_back(make_patch(spec, c, knot));
  }
  return StretchMap(spec, std::move(c));
}

std::optional<std::pair<double, double>> second_derivative_jump(const StretchMap& map,
                                                                std::size_t i) {
  const auto* c = map.piecewise();
  if (c == nullptr) throw SpecError("second_derivative_jump: map is not piecewise");
  const std::size_t m = c->pieces.size();
  if (m < 2) return std::nullopt;
  if (i < 1 || i > m - 1) {
    throw std::out_of_range("second_derivative_jump: knot index " + std::to_string(i) +
                            " outside [1, " + std::to_string(m - 1) + "]");
  }
  const double d = c->knots[i];
  return std::pair{detail::piece_curvature(c->pieces[i - 1], c->inv_chi, d),
                   detail::piece_curvature(c->pieces[i], c->inv_chi, d)};
}

}  // namespace stretchfd
