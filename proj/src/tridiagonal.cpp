#include "stretchfd/tridiagonal.hpp"

#include <string>

#include "stretchfd/error.hpp"

namespace stretchfd {

void TridiagonalSystem::set_dirichlet(std::size_t i, double value) {
  lower[i] = 0.0;
  diag[i] = 1.0;
  upper[i] = 0.0;
  rhs[i] = value;
  std::erase_if(out_of_band, [i](const OutOfBandEntry& e) { return e.row == i; });
}

std::vector<double> TridiagonalSystem::multiply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += lower[i] * x[i - 1];
    if (i + 1 < n) v += upper[i] * x[i + 1];
    y[i] = v;
  }
  for (const auto& e : out_of_band) y[e.row] += e.value * x[e.col];
  return y;
}

void reduce_outofband(TridiagonalSystem& sys) {
  for (const auto& e : sys.out_of_band) {
    const std::size_t i = e.row;
    if (e.value == 0.0) continue;
    const std::size_t pivot_row = e.col + 2 == i ? i - 1 : i + 1;
    for (const auto& other : sys.out_of_band) {
      if (other.row == pivot_row && other.value != 0.0) {
        throw SolverError("reduce_outofband: pivot row " + std::to_string(pivot_row) +
                          " has its own out-of-band entry");
      }
    }
    if (e.col + 2 == i) {
      // Row i-1 has its sub-diagonal entry in column i-2.
      const std::size_t k = i - 1;
      if (sys.lower[k] == 0.0) {
        throw SolverError("reduce_outofband: zero sub-diagonal pivot in row " + std::to_string(k));
      }
      const double f = e.value / sys.lower[k];
      sys.lower[i] -= f * sys.diag[k];
      sys.diag[i] -= f * sys.upper[k];
      sys.rhs[i] -= f * sys.rhs[k];
    } else if (e.col == i + 2) {
      const std::size_t k = i + 1;
      if (sys.upper[k] == 0.0) {
        throw SolverError("reduce_outofband: zero super-diagonal pivot in row " + std::to_string(k));
      }
      const double f = e.value / sys.upper[k];
      sys.upper[i] -= f * sys.diag[k];
      sys.diag[i] -= f * sys.lower[k];
      sys.rhs[i] -= f * sys.rhs[k];
    } else {
      throw SolverError("reduce_outofband: entry is not two places off the diagonal");
    }
  }
  sys.out_of_band.clear();
}

void solve_tridiagonal(const TridiagonalSystem& sys, std::span<double> x, std::span<double> c) {
  if (!sys.out_of_band.empty()) throw SolverError("solve_tridiagonal: out-of-band entries remain");
  const std::size_t n = sys.size();
  if (n == 0) return;
  double pivot = sys.diag[0];
  if (pivot == 0.0) throw SolverError("solve_tridiagonal: zero pivot in row 0");
  c[0] = n > 1 ? sys.upper[0] / pivot : 0.0;
  x[0] = sys.rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = sys.diag[i] - sys.lower[i] * c[i - 1];
    if (pivot == 0.0) throw SolverError("solve_tridiagonal: zero pivot in row " + std::to_string(i));
    c[i] = i + 1 < n ? sys.upper[i] / pivot : 0.0;
    x[i] = (sys.rhs[i] - sys.lower[i] * x[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
}

std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys) {
  std::vector<double> x(sys.size()), c(sys.size());
  solve_tridiagonal(sys, x, c);
  return x;
}

}  // namespace stretchfd
