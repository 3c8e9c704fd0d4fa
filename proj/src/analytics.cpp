#include "stretchfd/analytics.hpp"

#include <algorithm>
#include <cmath>

#include "stretchfd/error.hpp"

namespace stretchfd {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

void check_inputs(double spot, double strike, double maturity, double sigma) {
  if (!std::isfinite(spot) || !std::isfinite(strike) || !std::isfinite(maturity) || !std::isfinite(sigma)) {
    throw DomainError("analytics: non-finite input");
  }
  if (spot < 0.0 || strike < 0.0 || maturity < 0.0 || sigma < 0.0) {
    throw DomainError("analytics: negative input");
  }
}

}  // namespace

double black_scholes_vanilla(double s, double k, double t, double r, double q, double sigma,
                             OptionType type) {
  check_inputs(s, k, t, sigma);
  const double df = std::exp(-r * t);
  const double fwd = s * std::exp((r - q) * t);
  const double sd = sigma * std::sqrt(t);
  if (sd == 0.0 || k == 0.0 || s == 0.0) return df * intrinsic(type, k, fwd);
  const double d1 = std::log(fwd / k) / sd + 0.5 * sd;
  const double d2 = d1 - sd;
  if (type == OptionType::Call) return df * (fwd * normal_cdf(d1) - k * normal_cdf(d2));
  return df * (k * normal_cdf(-d2) - fwd * normal_cdf(-d1));
}

double down_and_out_call(double s, double k, double h, double t, double r, double q, double sigma) {
  check_inputs(s, k, t, sigma);
  if (!(k >= h)) throw DomainError("down_and_out_call: strike must be at or above the barrier");
  if (s <= h) return 0.0;
  const double sd = sigma * std::sqrt(t);
  const double lambda = (r - q + 0.5 * sigma * sigma) / (sigma * sigma);
  const double y = std::log(h * h / (s * k)) / sd + lambda * sd;
  const double image = s * std::exp(-q * t) * std::pow(h / s, 2.0 * lambda) * normal_cdf(y) -
                       k * std::exp(-r * t) * std::pow(h / s, 2.0 * lambda - 2.0) * normal_cdf(y - sd);
  return black_scholes_vanilla(s, k, t, r, q, sigma, OptionType::Call) - image;
}

SeriesPrice double_barrier_ko_series(double s, double k, double t, double r, double q, double sigma,
                                     double lo, double hi, OptionType type, int terms) {
  check_inputs(s, k, t, sigma);
  if (!(lo < hi) || !(lo > 0.0)) throw DomainError("double barrier: need 0 < L < U");
  if (!(sigma > 0.0) || !(t > 0.0)) throw DomainError("double barrier: need sigma > 0 and T > 0");
  if (s <= lo || s >= hi) return {0.0, 0.0};

  // Image series for flat barriers: the payoff window is [K, U] for a call
  // and [L, K] for a put, clipped to the corridor.
  const double b = r - q;
  const double sd = sigma * std::sqrt(t);
  const double mu = 2.0 * b / (sigma * sigma) + 1.0;
  const double drift = (b + 0.5 * sigma * sigma) * t;
  const double a = type == OptionType::Call ? std::max(k, lo) : lo;
  const double c = type == OptionType::Call ? hi : std::min(k, hi);
  if (!(a < c)) return {0.0, 0.0};

  // P(lo < Z < hi) without cancellation in either tail.
  auto band = [](double upper, double lower) {
    if (lower > 0.0) return normal_cdf(-lower) - normal_cdf(-upper);
    return normal_cdf(upper) - normal_cdf(lower);
  };
  // weight^power * probability, in logs so far images neither overflow nor
  // produce inf * 0.
  auto weighted = [](double log_weight, double power, double prob) {
    if (prob <= 0.0) return 0.0;
    return std::exp(power * log_weight + std::log(prob));
  };

  // Price of the payoff window [a, c], image by image.
  const double log_ul = std::log(hi / lo);
  auto image_pair = [&](int n) {
    const double shift = 2.0 * n * log_ul;                          // ln (U/L)^(2n)
    const double log_refl = 2.0 * std::log(lo) - std::log(s) - shift;  // ln L^2 / (S (U/L)^(2n))
    const double x1 = (std::log(s / a) + shift + drift) / sd;
    const double x2 = (std::log(s / c) + shift + drift) / sd;
    const double x3 = (log_refl - std::log(a) + drift) / sd;
    const double x4 = (log_refl - std::log(c) + drift) / sd;
    const double log_direct = n * log_ul;                           // ln (U/L)^n
    const double log_base = std::log(lo / s) - n * log_ul;          // ln L^(n+1) / (U^n S)
    const double asset = weighted(log_direct, mu, band(x1, x2)) - weighted(log_base, mu, band(x3, x4));
    const double cash = weighted(log_direct, mu - 2.0, band(x1 - sd, x2 - sd)) -
                        weighted(log_base, mu - 2.0, band(x3 - sd, x4 - sd));
    const double sign = type == OptionType::Call ? 1.0 : -1.0;
    return sign * (s * std::exp(-q * t) * asset - k * std::exp(-r * t) * cash);
  };

  double price = image_pair(0);
  double tail = 0.0;
  for (int n = 1; n <= terms; ++n) {
    const double pair = image_pair(n) + image_pair(-n);
    price += pair;
    tail = std::abs(pair);
  }
  return {price, tail};
}

double double_barrier_ko_analytic(double s, double k, double t, double r, double q, double sigma,
                                  double lo, double hi, OptionType type, int terms) {
  return double_barrier_ko_series(s, k, t, r, q, sigma, lo, hi, type, terms).price;
}

}  // namespace stretchfd
