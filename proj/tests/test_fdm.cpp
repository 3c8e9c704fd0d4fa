#include <doctest.h>

#include <cmath>
#include <random>

#include "stretchfd/error.hpp"
#include "stretchfd/fdm.hpp"

using namespace stretchfd;

namespace {

std::vector<double> uniform_points(double lo, double hi, std::size_t steps) {
  std::vector<double> p(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) p[j] = lo + (hi - lo) * static_cast<double>(j) / steps;
  return p;
}

std::vector<double> random_points(std::mt19937_64& rng, std::size_t n, double lo) {
  std::uniform_real_distribution<double> u(0.1, 2.0);
  std::vector<double> p{lo};
  for (std::size_t i = 1; i < n; ++i) p.push_back(p.back() + u(rng));
  return p;
}

const BoundaryCondition kZeroGamma{BoundaryKind::ZeroGamma, 0.0};

}  // namespace

TEST_CASE("stencil weights") {
  std::mt19937_64 rng(1);
  auto p = random_points(rng, 30, 1.0);
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    auto w = stencil_weights(p[i] - p[i - 1], p[i + 1] - p[i]);
    auto sq = [&](std::size_t k) { return p[k] * p[k]; };
    double d2 = w.second[0] * sq(i - 1) + w.second[1] * sq(i) + w.second[2] * sq(i + 1);
    double d1 = w.first[0] * sq(i - 1) + w.first[1] * sq(i) + w.first[2] * sq(i + 1);
    CHECK(d2 == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(d1 == doctest::Approx(2.0 * p[i]).epsilon(1e-10));
  }
}

TEST_CASE("fourth-power stencil error is second order") {
  auto err = [](std::size_t steps) {
    auto p = uniform_points(1.0, 3.0, steps);
    std::size_t i = steps / 2;  // S = 2
    double h = p[1] - p[0];
    auto w = stencil_weights(h, h);
    auto f = [](double s) { return std::pow(s, 4); };
    double d2 = w.second[0] * f(p[i - 1]) + w.second[1] * f(p[i]) + w.second[2] * f(p[i + 1]);
    return std::abs(d2 - 12.0 * p[i] * p[i]);
  };
  double e1 = err(20), e2 = err(40);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("operator") {
  SUBCASE("zero market gives a zero operator") {
    auto op = discretize_operator(uniform_points(0.0, 10.0, 10), MarketParams{}, kZeroGamma, kZeroGamma);
    for (std::size_t i = 0; i < op.size(); ++i) {
      CHECK(op.lower[i] == 0.0);
      CHECK(op.diag[i] == 0.0);
      CHECK(op.upper[i] == 0.0);
    }
  }
  SUBCASE("applies the Black-Scholes generator to a quadratic exactly") {
    std::mt19937_64 rng(2);
    auto p = random_points(rng, 20, 5.0);
    MarketParams m{0.05, 0.01, 0.3};
    auto op = discretize_operator(p, m, kZeroGamma, kZeroGamma);
    std::vector<double> v(p.size()), out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) v[i] = p[i] * p[i];
    op.apply(v, out);
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      double s = p[i];
      double expected = m.volatility * m.volatility * s * s + (m.rate - m.dividend) * s * 2.0 * s - m.rate * s * s;
      CHECK(out[i] == doctest::Approx(expected).epsilon(1e-10));
    }
  }
  SUBCASE("rejects non-monotone points") {
    std::vector<double> p{0.0, 1.0, 0.5, 2.0};
    CHECK_THROWS_AS(discretize_operator(p, MarketParams{}, kZeroGamma, kZeroGamma), SpecError);
  }
  SUBCASE("S = 0 row is the degenerate ODE") {
    Grid g;
    g.points = uniform_points(0.0, 10.0, 10);
    MarketParams m{0.05, 0.0, 0.2};
    auto op = discretize_operator(g, m);
    CHECK(op.lower_bc.kind == BoundaryKind::DegenerateExact);
    CHECK(op.diag[0] == doctest::Approx(-0.05));
    CHECK(op.upper[0] == 0.0);
  }
}

TEST_CASE("TR-BDF2 step") {
  SUBCASE("zero operator leaves values unchanged") {
    auto p = uniform_points(0.0, 10.0, 10);
    TrBdf2Stepper st(p, discretize_operator(p, MarketParams{}, kZeroGamma, kZeroGamma));
    std::vector<double> v(p.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(static_cast<double>(i));
    auto before = v;
    st.step(v, 0.1, {}, 1);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == doctest::Approx(before[i]).epsilon(1e-15));
  }
  SUBCASE("pure discounting is third-order accurate per step") {
    // sigma = 0 and r = q: L V = -r V on every node.
    auto p = uniform_points(0.0, 10.0, 10);
    MarketParams m{0.5, 0.5, 0.0};
    auto err = [&](double dt) {
      TrBdf2Stepper st(p, discretize_operator(p, m, {BoundaryKind::DegenerateExact, 0.0}, kZeroGamma));
      std::vector<double> v(p.size(), 1.0);
      st.step(v, dt, {}, 1);
      double e = 0.0;
      for (double x : v) e = std::max(e, std::abs(x - std::exp(-m.rate * dt)));
      return e;
    };
    double e1 = err(0.2), e2 = err(0.1);
    CHECK(e1 < 1e-3);
    CHECK(std::log2(e1 / e2) == doctest::Approx(3.0).epsilon(0.05));
  }
}

TEST_CASE("ghost context") {
  auto p = uniform_points(0.0, 10.0, 10);
  auto up = make_ghost_context(p, 7.5, 0.0, BarrierSide::Up);
  CHECK(up.i0 == 8u);
  CHECK(make_ghost_context(p, 7.0, 0.0, BarrierSide::Up).i0 == 7u);
  auto down = make_ghost_context(p, 2.5, 0.0, BarrierSide::Down);
  CHECK(down.i0 == 2u);
  CHECK(down.inner(1) == 3u);
  CHECK_THROWS_AS(make_ghost_context(p, 11.0, 0.0, BarrierSide::Up), SpecError);
}

TEST_CASE("explicit ghost values interpolate the rebate at the barrier") {
  std::mt19937_64 rng(4);
  auto p = random_points(rng, 12, 1.0);
  for (auto side : {BarrierSide::Up, BarrierSide::Down}) {
    std::size_t cell = side == BarrierSide::Up ? 8 : 2;
    double b = p[cell] + 0.3 * (p[cell + 1] - p[cell]);
    auto ctx = make_ghost_context(p, b, 0.7, side);
    std::vector<double> v(p.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 + 0.1 * p[i];

    auto lin = v;
    apply_ghost_linear(ctx, p, lin);
    double g = p[ctx.i0], q = p[ctx.inner(1)];
    double at_b = lin[ctx.inner(1)] + (lin[ctx.i0] - lin[ctx.inner(1)]) * (b - q) / (g - q);
    CHECK(at_b == doctest::Approx(0.7).epsilon(1e-12));

    auto lag = v;
    apply_ghost_lagrange3(ctx, p, lag);
    double x[3] = {p[ctx.i0], p[ctx.inner(1)], p[ctx.inner(2)]};
    double y[3] = {lag[ctx.i0], lag[ctx.inner(1)], lag[ctx.inner(2)]};
    double sum = 0.0;
    for (int a = 0; a < 3; ++a) {
      double l = 1.0;
      for (int c = 0; c < 3; ++c)
        if (c != a) l *= (b - x[c]) / (x[a] - x[c]);
      sum += l * y[a];
    }
    CHECK(sum == doctest::Approx(0.7).epsilon(1e-12));
    // Nodes beyond the ghost are pinned.
    std::size_t beyond = side == BarrierSide::Up ? ctx.i0 + 1 : ctx.i0 - 1;
    CHECK(lin[beyond] == 0.7);
    CHECK(lag[beyond] == 0.7);
  }
}

TEST_CASE("ghost on the barrier node is a Dirichlet row") {
  auto p = uniform_points(0.0, 10.0, 10);
  auto ctx = make_ghost_context(p, 8.0, 0.3, BarrierSide::Up);
  std::vector<double> v(p.size(), 1.0);
  apply_ghost_linear(ctx, p, v);
  CHECK(v[8] == 0.3);
  v.assign(p.size(), 1.0);
  apply_ghost_lagrange3(ctx, p, v);
  CHECK(v[8] == 0.3);

  TridiagonalSystem sys(p.size());
  for (std::size_t i = 0; i < sys.size(); ++i) {
    sys.diag[i] = 2.0;
    sys.lower[i] = sys.upper[i] = -0.5;
  }
  apply_ghost_lagrange3(ctx, p, sys);
  CHECK(sys.diag[8] == 1.0);
  CHECK(sys.lower[8] == 0.0);
  CHECK(sys.rhs[8] == 0.3);
  CHECK(sys.out_of_band.empty());
}

TEST_CASE("R = 0 and zero inner value give a zero ghost") {
  auto p = uniform_points(0.0, 10.0, 10);
  auto ctx = make_ghost_context(p, 7.4, 0.0, BarrierSide::Up);
  std::vector<double> v(p.size(), 0.0);
  v[ctx.i0] = 5.0;
  apply_ghost_linear(ctx, p, v);
  CHECK(v[ctx.i0] == 0.0);
}

TEST_CASE("implicit lagrange row after elimination keeps the interpolation relation") {
  std::mt19937_64 rng(9);
  auto p = random_points(rng, 6, 1.0);
  double b = p[3] + 0.6 * (p[4] - p[3]);
  auto ctx = make_ghost_context(p, b, 0.2, BarrierSide::Up);
  REQUIRE(ctx.i0 == 4u);
  TridiagonalSystem sys(6);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (std::size_t i = 0; i < 6; ++i) {
    sys.diag[i] = 2.5 + u(rng);
    sys.lower[i] = u(rng);
    sys.upper[i] = u(rng);
    sys.rhs[i] = u(rng);
  }
  apply_ghost_lagrange3(ctx, p, sys);
  REQUIRE(sys.out_of_band.size() == 1u);
  reduce_outofband(sys);
  auto x = solve_tridiagonal(sys);
  double xs[3] = {p[4], p[3], p[2]};
  double ys[3] = {x[4], x[3], x[2]};
  double sum = 0.0;
  for (int a = 0; a < 3; ++a) {
    double l = 1.0;
    for (int c = 0; c < 3; ++c)
      if (c != a) l *= (b - xs[c]) / (xs[a] - xs[c]);
    sum += l * ys[a];
  }
  CHECK(sum == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(x[5] == doctest::Approx(0.2));
}

TEST_CASE("projection and knockout hooks") {
  std::vector<double> v{0.0, 1.0, 2.0, 3.0};
  Projection proj({1.5, 1.5, 1.5, 1.5});
  proj.after_stage(v, {Stage::Trapezoidal, 1});
  CHECK(v == std::vector<double>{1.5, 1.5, 2.0, 3.0});

  DiscreteKnockout ko({2, 3}, 0.25, {3, 6});
  v = {1.0, 1.0, 1.0, 1.0};
  ko.after_stage(v, {Stage::Bdf2, 2});
  CHECK(v[3] == 1.0);
  ko.after_stage(v, {Stage::Trapezoidal, 3});
  CHECK(v[3] == 1.0);
  ko.after_stage(v, {Stage::Bdf2, 3});
  CHECK(v == std::vector<double>{1.0, 1.0, 0.25, 0.25});
}
