#include "stretchfd/placement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stretchfd/error.hpp"
#include "stretchfd/monotone_cubic.hpp"

namespace stretchfd {

namespace {

std::string describe(double a, double b) {
  std::ostringstream s;
  s.precision(12);
  s << a << " and " << b;
  return s.str();
}

// Largest k with p[k] <= v (v strictly inside the grid).
std::size_t cell_of(const std::vector<double>& p, double v) {
  auto it = std::upper_bound(p.begin(), p.end(), v);
  return static_cast<std::size_t>(it - p.begin()) - 1;
}

void fill_placed(Grid& g, const PlacementSpec& spec) {
  g.placed.clear();
  for (const auto& t : spec.targets) {
    g.placed.push_back({t.value, cell_of(g.points, t.value), t.goal});
  }
}

}  // namespace

void PlacementSpec::validate(const Grid& grid) const {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double v = targets[i].value;
    if (!(v > grid.front() && v < grid.back())) {
      std::ostringstream s;
      s << "placement: target " << v << " not strictly inside the grid bounds";
      throw SpecError(s.str());
    }
    if (i > 0 && !(v > targets[i - 1].value)) {
      throw SpecError("placement: targets must be sorted and distinct");
    }
  }
}

Grid insert_points(const Grid& grid, const PlacementSpec& spec) {
  spec.validate(grid);
  std::vector<double> p = grid.points;
  const double tol = 1e-12 * (grid.back() - grid.front());

  // Cells touched by each target, to detect collisions up front.
  struct Claim {
    double value;
    std::size_t first, last;
  };
  std::vector<Claim> claims;
  for (const auto& t : spec.targets) {
    const std::size_t k = cell_of(p, t.value);
    const bool on_node = std::abs(t.value - p[k]) <= tol;
    Claim c{t.value, k, k};
    if (on_node && t.goal == PlacementGoal::MidCell) c.first = k - 1;
    for (const auto& other : claims) {
      if (c.first <= other.last && other.first <= c.last) {
        throw SpecError("insert_points: targets " + describe(other.value, t.value) +
                        " collide in the same cell");
      }
    }
    claims.push_back(c);
  }

  // Highest target first so earlier cell indices stay valid.
  for (auto it = spec.targets.rbegin(); it != spec.targets.rend(); ++it) {
    const double b = it->value;
    const std::size_t k = cell_of(p, b);
    if (it->goal == PlacementGoal::OnGrid) {
      if (std::abs(b - p[k]) > tol) p.insert(p.begin() + static_cast<std::ptrdiff_t>(k) + 1, b);
      continue;
    }
    if (std::abs(b - p[k]) <= tol) {
      if (k == 0 || k + 1 >= p.size()) throw SpecError("insert_points: target on a boundary node");
      const double half = 0.5 * std::min(p[k] - p[k - 1], p[k + 1] - p[k]);
      p[k] = b - half;
      p.insert(p.begin() + static_cast<std::ptrdiff_t>(k) + 1, b + half);
      continue;
    }
    if (std::abs(b - 0.5 * (p[k] + p[k + 1])) <= tol) continue;
    double s = 2.0 * b - p[k];
    if (!(s > p[k] && s < p[k + 1])) s = 2.0 * b - p[k + 1];
    p.insert(p.begin() + static_cast<std::ptrdiff_t>(k) + 1, s);
  }

  Grid out{std::move(p), {}};
  if (!out.strictly_increasing()) throw ConstructionError("insert_points: grid lost monotonicity");
  fill_placed(out, spec);
  return out;
}

namespace {

struct Knot {
  double index;   // position in the deformed index space
  double source;  // index of the original grid it maps to
  const PlacementTarget* target;
};

MonotoneCubic index_map(const std::vector<Knot>& knots, double n) {
  std::vector<double> x{0.0}, y{0.0};
  for (const auto& k : knots) {
    x.push_back(k.index);
    y.push_back(k.source);
  }
  x.push_back(n);
  y.push_back(n);
  return MonotoneCubic(std::move(x), std::move(y));
}

}  // namespace

Grid deform_smooth(const Grid& grid, const PlacementSpec& spec) {
  spec.validate(grid);
  if (spec.targets.empty()) return grid;

  const std::size_t cells = grid.size() - 1;
  const auto n = static_cast<double>(cells);
  std::vector<double> idx(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) idx[j] = static_cast<double>(j);
  const MonotoneCubic original(idx, grid.points);
  const double range = grid.back() - grid.front();

  std::vector<Knot> knots;
  for (const auto& t : spec.targets) {
    const double u = original.inverse(t.value);
    double desired;
    if (t.goal == PlacementGoal::OnGrid) {
      desired = std::clamp(std::round(u), 1.0, n - 1.0);
    } else {
      const double j = std::round(u);
      if (std::abs(u - j) <= 1e-12 * n) {
        const auto jj = static_cast<std::size_t>(j);
        const double right = jj < cells ? grid.points[jj + 1] - grid.points[jj] : 0.0;
        const double left = jj > 0 ? grid.points[jj] - grid.points[jj - 1] : 0.0;
        desired = right > left ? j + 0.5 : j - 0.5;
      } else {
        desired = std::floor(u) + 0.5;
      }
      desired = std::clamp(desired, 0.5, n - 0.5);
    }
    if (!knots.empty() && !(desired > knots.back().index)) {
      throw SpecError("deform_smooth: targets " + describe(knots.back().target->value, t.value) +
                      " collide in the same cell");
    }
    knots.push_back({desired, u, &t});
  }

  // Adjust the source index of each MidCell knot until the target is exactly
  // the midpoint of its deformed cell. Each residual is increasing in its own
  // knot value; neighbouring knots couple only through the slope limiter.
  auto midpoint_residual = [&](std::size_t i) {
    const MonotoneCubic phi = index_map(knots, n);
    const double k = knots[i].index - 0.5;
    return 0.5 * (original.value(phi.value(k)) + original.value(phi.value(k + 1.0))) -
           knots[i].target->value;
  };
  const double tol = 1e-14 * range;
  for (int sweep = 0; sweep < 50; ++sweep) {
    double worst = 0.0;
    for (std::size_t i = 0; i < knots.size(); ++i) {
      if (knots[i].target->goal != PlacementGoal::MidCell) continue;
      const double lower = i == 0 ? 0.0 : knots[i - 1].source;
      const double upper = i + 1 == knots.size() ? n : knots[i + 1].source;
      const double start = knots[i].source;
      double f = midpoint_residual(i);
      worst = std::max(worst, std::abs(f));
      if (std::abs(f) <= tol) continue;
      double lo = std::max(lower, start - 1.0), hi = std::min(upper, start + 1.0);
      knots[i].source = lo;
      double flo = midpoint_residual(i);
      knots[i].source = hi;
      double fhi = midpoint_residual(i);
      if (!(flo < 0.0 && fhi > 0.0)) {
        knots[i].source = start;  // keep the approximate placement
        continue;
      }
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        knots[i].source = mid;
        f = midpoint_residual(i);
        if (std::abs(f) <= tol || hi - lo <= 1e-15 * n) break;
        if (f < 0.0) lo = mid; else hi = mid;
      }
    }
    if (worst <= tol) break;
  }

  const MonotoneCubic phi = index_map(knots, n);
  Grid out;
  out.points.resize(grid.size());
  for (std::size_t j = 1; j < cells; ++j) out.points[j] = original.value(phi.value(idx[j]));
  out.points.front() = grid.front();
  out.points.back() = grid.back();
  for (const auto& k : knots) {
    if (k.target->goal == PlacementGoal::OnGrid) {
      out.points[static_cast<std::size_t>(k.index)] = k.target->value;
    }
  }
  if (!out.strictly_increasing()) throw ConstructionError("deform_smooth: grid lost monotonicity");
  fill_placed(out, spec);
  return out;
}

Grid apply_placement(const Grid& grid, const PlacementSpec& spec) {
  switch (spec.mode) {
    case PlacementMode::None: {
      Grid g = grid;
      fill_placed(g, spec);
      return g;
    }
    case PlacementMode::Insert:
      return insert_points(grid, spec);
    case PlacementMode::Deform:
      return deform_smooth(grid, spec);
  }
  return grid;
}

}  // namespace stretchfd
