#pragma once

#include <span>
#include <vector>

namespace stretchfd {

/// Piecewise cubic Hermite interpolant with Fritsch-Carlson limited slopes.
///
/// The interpolant is C1 and preserves the monotonicity of the data on every
/// interval: it never overshoots between two nodes. Abscissae must be strictly
/// increasing; ordinates are arbitrary.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;

  /// Slopes estimated from the data (three-point formula, then limited).
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  /// Slopes supplied by the caller (e.g. exact derivatives), then limited.
  MonotoneCubic(std::vector<double> x, std::vector<double> y, std::vector<double> slopes);

  double value(double x) const;
  double derivative(double x) const;

  /// Inverse of an increasing interpolant: the x with value(x) == y.
  /// `y` is clamped to the data range.
  double inverse(double y) const;

  std::span<const double> x() const { return x_; }
  std::span<const double> y() const { return y_; }
  std::span<const double> slopes() const { return d_; }
  std::size_t size() const { return x_.size(); }

 private:
  std::size_t interval(double x) const;
  void limit_slopes();

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> d_;
};

}  // namespace stretchfd
