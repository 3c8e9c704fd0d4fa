#pragma once

#include "stretchfd/instruments.hpp"

namespace stretchfd {

double normal_cdf(double x);

/// Black-Scholes price of a European call or put. sigma = 0 or T = 0 give
/// the discounted intrinsic value on the forward.
double black_scholes_vanilla(double spot, double strike, double maturity, double rate,
                             double dividend, double sigma, OptionType type);

/// Continuously monitored down-and-out call with strike above the barrier.
double down_and_out_call(double spot, double strike, double barrier, double maturity, double rate,
                         double dividend, double sigma);

struct SeriesPrice {
  double price;
  double tail_bound;  ///< magnitude of the outermost image pair that was summed
};

/// Continuously monitored double knock-out with flat barriers L < U, zero
/// rebate: image series over n = -terms..terms. Zero outside (L, U).
SeriesPrice double_barrier_ko_series(double spot, double strike, double maturity, double rate,
                                     double dividend, double sigma, double lower, double upper,
                                     OptionType type, int terms = 32);

double double_barrier_ko_analytic(double spot, double strike, double maturity, double rate,
                                  double dividend, double sigma, double lower, double upper,
                                  OptionType type = OptionType::Call, int terms = 32);

}  // namespace stretchfd
