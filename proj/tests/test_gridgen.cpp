#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "stretchfd/error.hpp"
#include "stretchfd/gridgen.hpp"

using namespace stretchfd;

namespace {

StretchSpec single(StretchKind kind, double b, double alpha, double lo = 0.0, double hi = 150.0) {
  StretchSpec s;
  s.kind = kind;
  s.s_min = lo;
  s.s_max = hi;
  s.critical_points = {b};
  s.alphas = {alpha};
  return s;
}

StretchSpec three_points(StretchKind kind) {
  StretchSpec s;
  s.kind = kind;
  s.s_min = 54.0;
  s.s_max = 183.0;
  s.critical_points = {90.0, 102.0, 110.0};
  s.alphas = {1.3};
  return s;
}

// Closed-form derivatives of one piece B + alpha (x^3/chi + x), x linear in u.
struct PieceCalculus {
  const CubicPiece& p;
  double chi;
  double dx() const { return (p.x_right - p.x_left) / (p.d_right - p.d_left); }
  double x(double u) const { return p.x_left + dx() * (u - p.d_left); }
  double value(double u) const { return p.b + p.alpha * (std::pow(x(u), 3) / chi + x(u)); }
  double slope(double u) const { return p.alpha * (3.0 * x(u) * x(u) / chi + 1.0) * dx(); }
  double curvature(double u) const { return p.alpha * 6.0 * x(u) / chi * dx() * dx(); }
};

double quintic(const QuinticPatch& q, double u, int order) {
  double t = u - q.d_left, sum = 0.0;
  for (int k = order; k < 6; ++k) {
    double f = 1.0;
    for (int j = 0; j < order; ++j) f *= k - j;
    sum += q.a[k] * f * std::pow(t, k - order);
  }
  return sum;
}

double bisect_depressed(double chi, double d) {
  double lo = -std::abs(d) - 1.0, hi = std::abs(d) + 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (mid * mid * mid / chi + mid + d > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

std::size_t min_spacing_cell(const Grid& g) {
  std::size_t best = 0;
  for (std::size_t k = 1; k + 1 < g.size(); ++k)
    if (g.points[k + 1] - g.points[k] < g.points[best + 1] - g.points[best]) best = k;
  return best;
}

}  // namespace

TEST_CASE("depressed cubic") {
  CHECK(solve_depressed_cubic(6.0, 0.0) == 0.0);
  CHECK(solve_depressed_cubic(6.0, -7.0 / 6.0) == doctest::Approx(1.0).epsilon(1e-15));
  for (double d : {83.333333333333, -1e6, 1e-9, -0.3, 1234.5}) {
    double t = solve_depressed_cubic(6.0, d);
    CHECK(std::abs(t * t * t / 6.0 + t + d) <= 1e-13 * std::max(1.0, std::abs(d)));
    CHECK(t == doctest::Approx(bisect_depressed(6.0, d)).epsilon(1e-12));
  }
  CHECK(solve_depressed_cubic(6.0, 83.333333333333) < 0.0);
  CHECK(solve_depressed_cubic(0.01, 5.0) == doctest::Approx(bisect_depressed(0.01, 5.0)).epsilon(1e-12));
  CHECK_THROWS_AS(solve_depressed_cubic(6.0, NAN), DomainError);
  CHECK_THROWS_AS(solve_depressed_cubic(INFINITY, 1.0), DomainError);
}

TEST_CASE("spec validation") {
  auto s = single(StretchKind::Sinh, 125.0, 1.5);
  CHECK_NOTHROW(s.validate());
  s.critical_points = {150.0};
  CHECK_THROWS_AS(s.validate(), SpecError);
  s = single(StretchKind::Sinh, 125.0, 0.0);
  CHECK_THROWS_AS(s.validate(), SpecError);
  s = three_points(StretchKind::Sinh);
  CHECK_THROWS_AS(s.validate(), SpecError);
  s = three_points(StretchKind::PiecewiseC2);
  s.lambda = 0.6;
  CHECK_THROWS_AS(s.validate(), SpecError);
  s.lambda = 0.5;
  s.alphas = {1.0, 2.0};
  CHECK_THROWS_AS(s.validate(), SpecError);
  s.alphas = {1.0, 2.0, 3.0};
  CHECK_NOTHROW(s.validate());
  s.critical_points = {102.0, 90.0, 110.0};
  CHECK_THROWS_AS(s.validate(), SpecError);
}

TEST_CASE("sinh stretch") {
  auto s = single(StretchKind::Sinh, 125.0, 1.5);
  StretchMap m = build_sinh(s);
  CHECK(m.value(0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(m.value(0.0)) <= 1e-10 * 150.0);
  CHECK(std::abs(m.value(1.0) - 150.0) <= 1e-10 * 150.0);
  const auto& c = std::get<SinhCoefficients>(m.payload());
  double ustar = c.c1 / (c.c1 - c.c2);
  CHECK(m.value(ustar) == doctest::Approx(125.0).epsilon(1e-14));

  Grid g = sample_grid(m, 62);
  CHECK(g.size() == 63u);
  std::size_t k = min_spacing_cell(g);
  CHECK(g.points[k] <= 125.0 + 1e-12);
  CHECK(g.points[k + 1] >= 125.0 - 1e-12 - (g.points[k + 1] - g.points[k]));
  CHECK(std::abs(0.5 * (g.points[k] + g.points[k + 1]) - 125.0) < 2.0);
}

TEST_CASE("cubic stretch") {
  auto s = single(StretchKind::Cubic, 125.0, 1.5);
  StretchMap m = build_cubic(s);
  CHECK(std::abs(m.value(0.0)) <= 1e-10 * 150.0);
  CHECK(std::abs(m.value(1.0) - 150.0) <= 1e-10 * 150.0);
  const auto& c = std::get<CubicCoefficients>(m.payload());
  CHECK(m.value(c.c1 / (c.c1 - c.c2)) == doctest::Approx(125.0).epsilon(1e-14));

  SUBCASE("slope at the critical point matches sinh with a smaller alpha") {
    StretchMap cubic = build_cubic(single(StretchKind::Cubic, 125.0, 0.9));
    StretchMap sinh = build_sinh(single(StretchKind::Sinh, 125.0, 1.5));
    const auto& cc = std::get<CubicCoefficients>(cubic.payload());
    const auto& sc = std::get<SinhCoefficients>(sinh.payload());
    double slope_cubic = cubic.derivative(cc.c1 / (cc.c1 - cc.c2));
    double slope_sinh = sinh.derivative(sc.c1 / (sc.c1 - sc.c2));
    CHECK(std::abs(slope_cubic / slope_sinh - 1.0) < 0.1);
  }
}

TEST_CASE("piecewise C1 with one point is the cubic stretch") {
  auto s = single(StretchKind::PiecewiseCubicC1, 125.0, 1.5);
  StretchMap pw = build_piecewise_c1(s);
  s.kind = StretchKind::Cubic;
  StretchMap cubic = build_cubic(s);
  for (int i = 0; i <= 1000; ++i) {
    double u = i / 1000.0;
    CHECK(std::abs(pw.value(u) - cubic.value(u)) <= 1e-12 * 150.0);
  }
  CHECK_FALSE(second_derivative_jump(pw, 1).has_value());
}

TEST_CASE("piecewise C1 symmetric points put the knot in the middle") {
  StretchSpec s;
  s.kind = StretchKind::PiecewiseCubicC1;
  s.s_min = 0.0;
  s.s_max = 10.0;
  s.critical_points = {3.0, 7.0};
  s.alphas = {0.5};
  StretchMap m = build_piecewise_c1(s);
  CHECK(m.piecewise()->knots[1] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(m.value(0.5) == doctest::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("piecewise C1 three points") {
  auto s = three_points(StretchKind::PiecewiseCubicC1);
  StretchMap m = build_piecewise_c1(s);
  const auto& c = *m.piecewise();
  REQUIRE(c.pieces.size() == 3u);
  CHECK(c.knots.front() == 0.0);
  CHECK(c.knots.back() == 1.0);

  for (std::size_t i = 1; i < c.pieces.size(); ++i) {
    double d = c.knots[i];
    PieceCalculus left{c.pieces[i - 1], s.chi}, right{c.pieces[i], s.chi};
    double mid = 0.5 * (s.critical_points[i - 1] + s.critical_points[i]);
    CHECK(left.value(d) == doctest::Approx(mid).epsilon(1e-12));
    CHECK(right.value(d) == doctest::Approx(mid).epsilon(1e-12));
    CHECK(left.slope(d) == doctest::Approx(right.slope(d)).epsilon(1e-10));

    auto jump = second_derivative_jump(m, i);
    REQUIRE(jump.has_value());
    CHECK(jump->first == doctest::Approx(left.curvature(d)).epsilon(1e-12));
    CHECK(jump->second == doctest::Approx(right.curvature(d)).epsilon(1e-12));
    CHECK(jump->first != 0.0);
    CHECK(jump->first * jump->second < 0.0);
    CHECK(jump->first == doctest::Approx(-jump->second).epsilon(1e-10));
  }
  CHECK_THROWS_AS(second_derivative_jump(m, 0), std::out_of_range);
  CHECK_THROWS_AS(second_derivative_jump(m, 3), std::out_of_range);

  Grid g = sample_grid(m, 49);
  CHECK(g.size() == 50u);
  CHECK(g.strictly_increasing());
  // Forward-difference slope has a local minimum next to each critical point.
  for (double b : s.critical_points) {
    auto it = std::upper_bound(g.points.begin(), g.points.end(), b);
    std::size_t k = static_cast<std::size_t>(it - g.points.begin()) - 1;
    double h = g.points[k + 1] - g.points[k];
    CHECK(h <= g.points[k - 1] - g.points[k - 2]);
    CHECK(h <= g.points[k + 3] - g.points[k + 2]);
  }
}

TEST_CASE("piecewise C2 quintic patches") {
  for (auto rule : {KnotRule::Direct, KnotRule::Inverse}) {
    for (double lambda : {0.1, 0.25, 0.5}) {
      auto s = three_points(StretchKind::PiecewiseC2);
      s.knot_rule = rule;
      s.lambda = lambda;
      StretchMap m = build_piecewise_c2(s);
      const auto& c = *m.piecewise();
      REQUIRE(c.patches.size() == 2u);
      for (const auto& q : c.patches) {
        PieceCalculus left{c.pieces[q.knot - 1], s.chi}, right{c.pieces[q.knot], s.chi};
        CHECK(q.d_left < q.d_knot);
        CHECK(q.d_knot < q.d_right);
        CHECK(quintic(q, q.d_left, 0) == doctest::Approx(left.value(q.d_left)).epsilon(1e-10));
        CHECK(quintic(q, q.d_left, 1) == doctest::Approx(left.slope(q.d_left)).epsilon(1e-10));
        CHECK(quintic(q, q.d_left, 2) == doctest::Approx(left.curvature(q.d_left)).epsilon(1e-10));
        CHECK(quintic(q, q.d_right, 0) == doctest::Approx(right.value(q.d_right)).epsilon(1e-10));
        CHECK(quintic(q, q.d_right, 1) == doctest::Approx(right.slope(q.d_right)).epsilon(1e-10));
        CHECK(quintic(q, q.d_right, 2) == doctest::Approx(right.curvature(q.d_right)).epsilon(1e-9));
        CHECK(q.accepted == (q.a3_positive && q.slope_positive));
        if (q.accepted) {
          CHECK(m.value(0.5 * (q.d_left + q.d_right)) == doctest::Approx(quintic(q, 0.5 * (q.d_left + q.d_right), 0)));
          // C2 across both ends of the patch, relative to the curvature scale.
          double e = 1e-10;
          double scale = 0.0;
          for (int j = 0; j <= 20; ++j)
            scale = std::max(scale, std::abs(quintic(q, q.d_left + (q.d_right - q.d_left) * j / 20.0, 2)));
          CHECK(std::abs(m.second_derivative(q.d_left - e) - m.second_derivative(q.d_left + e)) <= 1e-6 * scale);
          CHECK(std::abs(m.second_derivative(q.d_right - e) - m.second_derivative(q.d_right + e)) <= 1e-6 * scale);
        }
      }
      Grid g = sample_grid(m, 200);
      CHECK(g.strictly_increasing());
    }
  }

  SUBCASE("inverse rule with lambda 1/2 starts the quintic at the critical points") {
    auto s = three_points(StretchKind::PiecewiseC2);
    s.knot_rule = KnotRule::Inverse;
    s.lambda = 0.5;
    StretchMap m = build_piecewise_c2(s);
    const auto& c = *m.piecewise();
    for (const auto& q : c.patches) {
      PieceCalculus left{c.pieces[q.knot - 1], s.chi}, right{c.pieces[q.knot], s.chi};
      CHECK(left.value(q.d_left) == doctest::Approx(s.critical_points[q.knot - 1]).epsilon(1e-12));
      CHECK(right.value(q.d_right) == doctest::Approx(s.critical_points[q.knot]).epsilon(1e-12));
    }
  }

  SUBCASE("C2 grid is close to the C1 grid") {
    auto s = three_points(StretchKind::PiecewiseC2);
    s.knot_rule = KnotRule::Inverse;
    Grid g2 = sample_grid(build_piecewise_c2(s), 49);
    s.kind = StretchKind::PiecewiseCubicC1;
    Grid g1 = sample_grid(build_piecewise_c1(s), 49);
    double mean = (s.s_max - s.s_min) / 49.0;
    for (std::size_t j = 0; j < g1.size(); ++j) CHECK(std::abs(g1.points[j] - g2.points[j]) < 0.01 * mean);
  }
}

TEST_CASE("Tavella-Randall stretch") {
  SUBCASE("huge alpha gives the uniform map") {
    StretchSpec s = three_points(StretchKind::TavellaRandall);
    s.alphas = {1e6 * s.range()};
    StretchMap m = build_tavella_randall(s, 64);
    for (int i = 0; i <= 100; ++i) {
      double u = i / 100.0;
      CHECK(m.value(u) == doctest::Approx(s.s_min + u * s.range()).epsilon(1e-6));
    }
  }
  SUBCASE("endpoint residual") {
    StretchSpec s = three_points(StretchKind::TavellaRandall);
    StretchMap m = build_tavella_randall(s, 400);
    CHECK(std::abs(m.value(0.0) - s.s_min) <= 1e-10 * s.range());
    CHECK(std::abs(m.value(1.0) - s.s_max) <= 1e-10 * s.range());
    CHECK(sample_grid(m, 50).strictly_increasing());
    CHECK_THROWS_AS(build_tavella_randall(s, 8), SpecError);
  }
  SUBCASE("single point: densest next to it, spacing nearly linear far away") {
    StretchMap m = build_tavella_randall(single(StretchKind::TavellaRandall, 125.0, 1.5), 800);
    Grid g = sample_grid(m, 100);
    std::size_t k = min_spacing_cell(g);
    CHECK(g.points[k] <= 125.0 + (g.points[k + 1] - g.points[k]));
    CHECK(g.points[k + 1] >= 125.0 - (g.points[k + 1] - g.points[k]));
    // Far below B the jacobian is A |S - B| roughly: spacing ratio matches distance ratio.
    auto spacing = [&](double s) {
      auto it = std::upper_bound(g.points.begin(), g.points.end(), s);
      std::size_t j = static_cast<std::size_t>(it - g.points.begin()) - 1;
      return g.points[j + 1] - g.points[j];
    };
    double ratio = spacing(30.0) / spacing(90.0);
    CHECK(ratio == doctest::Approx((125.0 - 30.0) / (125.0 - 90.0)).epsilon(0.15));
  }
}

TEST_CASE("sample grid") {
  StretchSpec s;
  s.kind = StretchKind::Uniform;
  Grid g = sample_grid(build_map(s), 4);
  REQUIRE(g.size() == 5u);
  for (int j = 0; j <= 4; ++j) CHECK(g.points[j] == doctest::Approx(0.25 * j));

  StretchMap m = build_map(single(StretchKind::Cubic, 125.0, 1.5));
  Grid two = sample_grid(m, 2);
  CHECK(two.points == std::vector<double>{0.0, m.value(0.5), 150.0});
  CHECK_THROWS_AS(sample_grid(m, 1), SpecError);
}

TEST_CASE("no critical points means uniform for every kind") {
  for (auto kind : {StretchKind::Sinh, StretchKind::Cubic, StretchKind::PiecewiseCubicC1,
                    StretchKind::PiecewiseC2, StretchKind::TavellaRandall}) {
    StretchSpec s;
    s.kind = kind;
    s.s_min = 10.0;
    s.s_max = 20.0;
    StretchMap m = build_map(s, 100);
    CHECK(m.value(0.3) == doctest::Approx(13.0));
  }
}

TEST_CASE("randomized map properties") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const StretchKind kinds[] = {StretchKind::Sinh, StretchKind::Cubic, StretchKind::PiecewiseCubicC1,
                               StretchKind::PiecewiseC2, StretchKind::TavellaRandall};
  for (int trial = 0; trial < 100; ++trial) {
    StretchSpec s;
    s.kind = kinds[trial % 5];
    s.s_min = 100.0 * unit(rng);
    s.s_max = s.s_min + 10.0 + 200.0 * unit(rng);
    std::size_t m = (s.kind == StretchKind::Sinh || s.kind == StretchKind::Cubic) ? 1 : 1 + trial % 4;
    for (std::size_t i = 0; i < m; ++i)
      s.critical_points.push_back(s.s_min + s.range() * (0.1 + 0.8 * (i + unit(rng)) / m));
    s.alphas = {s.range() * (0.002 + 0.2 * unit(rng))};
    StretchMap map = build_map(s, 100);
    double prev = map.value(0.0);
    CHECK(std::abs(prev - s.s_min) <= 1e-10 * s.range());
    CHECK(std::abs(map.value(1.0) - s.s_max) <= 1e-10 * s.range());
    for (int j = 1; j <= 1024; ++j) {
      double v = map.value(j / 1024.0);
      CHECK(v > prev);
      prev = v;
    }
  }
}
