#include "stretchfd/kernels.hpp"

#include <omp.h>

#include "stretchfd/error.hpp"

namespace stretchfd {

namespace {

void check_sizes(std::span<const double> u, std::span<double> out) {
  if (u.size() != out.size()) throw SpecError("evaluate: input and output sizes differ");
}

template <typename Coeffs>
void serial_loop(const Coeffs& c, std::span<const double> u, std::span<double> out) {
  const std::size_t n = u.size();
  const double* in = u.data();
  double* res = out.data();
  for (std::size_t k = 0; k < n; ++k) res[k] = evaluate(c, in[k]);
}

template <typename Coeffs>
void parallel_loop(const Coeffs& c, std::span<const double> u, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  const double* in = u.data();
  double* res = out.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) res[k] = evaluate(c, in[k]);
}

}  // namespace

void evaluate_serial(const StretchMap& map, std::span<const double> u, std::span<double> out) {
  check_sizes(u, out);
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TavellaRandallCoefficients>) {
          for (std::size_t k = 0; k < u.size(); ++k) out[k] = c.trajectory.value(u[k]);
        } else {
          serial_loop(c, u, out);
        }
      },
      map.payload());
}

void evaluate_parallel(const StretchMap& map, std::span<const double> u, std::span<double> out) {
  check_sizes(u, out);
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TavellaRandallCoefficients>) {
          const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static)
          for (std::ptrdiff_t k = 0; k < n; ++k) out[k] = c.trajectory.value(u[k]);
        } else {
          parallel_loop(c, u, out);
        }
      },
      map.payload());
}

int kernel_threads() { return omp_get_max_threads(); }

}  // namespace stretchfd
