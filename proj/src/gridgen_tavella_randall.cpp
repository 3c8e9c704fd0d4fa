#include <cmath>
#include <limits>
#include <sstream>

#include "stretchfd/error.hpp"
#include "stretchfd/gridgen.hpp"

namespace stretchfd {

namespace {

struct Jacobian {
  const StretchSpec& spec;

  // (sum_k 1 / (alpha_k^2 + (s - B_k)^2))^(-1/2), without the constant A.
  double operator()(double s) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < spec.critical_points.size(); ++k) {
      const double a = spec.alpha(k);
      const double e = s - spec.critical_points[k];
      sum += 1.0 / (a * a + e * e);
    }
    return 1.0 / std::sqrt(sum);
  }
};

// Classical RK4 for S' = A J(S) from S(0) = s_min. Returns S(1); fills the
// trajectory when `out` is non-null. Stops early once S overshoots `cap`.
double shoot(const Jacobian& jac, double scale, std::size_t steps, double cap,
             std::vector<double>* out) {
  const double h = 1.0 / static_cast<double>(steps);
  double s = jac.spec.s_min;
  if (out) {
    out->resize(steps + 1);
    (*out)[0] = s;
  }
  for (std::size_t n = 0; n < steps; ++n) {
    const double k1 = scale * jac(s);
    const double k2 = scale * jac(s + 0.5 * h * k1);
    const double k3 = scale * jac(s + 0.5 * h * k2);
    const double k4 = scale * jac(s + h * k3);
    s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (out) (*out)[n + 1] = s;
    if (!out && !(s <= cap)) return std::numeric_limits<double>::infinity();
  }
  return s;
}

}  // namespace

StretchMap build_tavella_randall(const StretchSpec& spec, std::size_t ode_steps) {
  spec.validate();
  if (spec.critical_points.empty()) return build_uniform(spec);
  if (spec.kind != StretchKind::TavellaRandall) {
    throw SpecError("build_tavella_randall: spec kind is not TavellaRandall");
  }
  if (ode_steps < 16) throw SpecError("build_tavella_randall: need at least 16 ODE steps");

  const Jacobian jac{spec};
  const double target = spec.s_max;
  const double range = spec.range();
  const double cap = spec.s_max + 10.0 * range;
  auto miss = [&](double a) { return shoot(jac, a, ode_steps, cap, nullptr) - target; };

  // S(1) increases with A: expand geometrically from a scale guess.
  double guess = range / jac(0.5 * (spec.s_min + spec.s_max));
  double lo = guess, hi = guess;
  double flo = miss(lo), fhi = flo;
  int expansions = 0;
  while (flo > 0.0 && expansions < 200) {
    hi = lo;
    fhi = flo;
    lo *= 0.5;
    flo = miss(lo);
    ++expansions;
  }
  while (fhi < 0.0 && expansions < 200) {
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = miss(hi);
    ++expansions;
  }
  if (!(flo <= 0.0 && fhi >= 0.0)) {
    std::ostringstream msg;
    msg << "Tavella-Randall shooting: no sign change in bracket [" << lo << ", " << hi
        << "], residuals " << flo << ", " << fhi;
    throw ConstructionError(msg.str());
  }

  const double tol = 1e-12 * range;
  double scale = 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    scale = 0.5 * (lo + hi);
    const double f = miss(scale);
    if (std::abs(f) <= tol || hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) break;
    if (f < 0.0) lo = scale; else hi = scale;
  }

  std::vector<double> s;
  const double end = shoot(jac, scale, ode_steps, cap, &s);
  if (!(std::abs(end - target) <= 1e-10 * range)) {
    std::ostringstream msg;
    msg << "Tavella-Randall shooting: endpoint residual " << end - target << " after bracketing A in ["
        << lo << ", " << hi << "]";
    throw ConstructionError(msg.str());
  }
  std::vector<double> u(ode_steps + 1), slope(ode_steps + 1);
  for (std::size_t n = 0; n <= ode_steps; ++n) {
    u[n] = static_cast<double>(n) / static_cast<double>(ode_steps);
    slope[n] = scale * jac(s[n]);
  }
  return StretchMap(spec, TavellaRandallCoefficients{scale, ode_steps,
                                                     MonotoneCubic(std::move(u), std::move(s), std::move(slope))});
}

}  // namespace stretchfd
