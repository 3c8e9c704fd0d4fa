#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stretchfd {

/// Entry two places off the diagonal, e.g. left by a three-point boundary row.
struct OutOfBandEntry {
  std::size_t row;
  std::size_t col;  ///< row - 2 or row + 2
  double value;
};

/// Row i reads lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i];
/// lower[0] and upper[n-1] are ignored.
struct TridiagonalSystem {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
  std::vector<double> rhs;
  std::vector<OutOfBandEntry> out_of_band;

  TridiagonalSystem() = default;
  explicit TridiagonalSystem(std::size_t n) : lower(n), diag(n), upper(n), rhs(n) {}

  std::size_t size() const { return diag.size(); }

  /// Replace row i by x[i] = value.
  void set_dirichlet(std::size_t i, double value);

  /// A x including out-of-band entries.
  std::vector<double> multiply(std::span<const double> x) const;
};

/// Eliminate every out-of-band entry with the neighbouring row between it and
/// the diagonal, restoring a tridiagonal system with the same solution.
/// Throws SolverError on a zero pivot in that neighbouring row, or when the
/// neighbouring row carries an out-of-band entry of its own.
void reduce_outofband(TridiagonalSystem& sys);

/// Thomas algorithm. Throws SolverError on a zero pivot (reporting the row)
/// or when out-of-band entries remain.
std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys);

/// Same as above writing into `x`, reusing `scratch` of the system size.
void solve_tridiagonal(const TridiagonalSystem& sys, std::span<double> x, std::span<double> scratch);

}  // namespace stretchfd
