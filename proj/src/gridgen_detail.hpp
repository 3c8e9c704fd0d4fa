#pragma once

#include "stretchfd/gridgen.hpp"

namespace stretchfd::detail {

double piece_value(const CubicPiece& p, double inv_chi, double u);
double piece_slope(const CubicPiece& p, double inv_chi, double u);
double piece_curvature(const CubicPiece& p, double inv_chi, double u);

/// Inverse of a single piece: the u in [d_left, d_right] with value s.
double piece_inverse(const CubicPiece& p, double chi, double s);

double piecewise_derivative(const PiecewiseCoefficients& c, double u);
double piecewise_second_derivative(const PiecewiseCoefficients& c, double u);

}  // namespace stretchfd::detail
