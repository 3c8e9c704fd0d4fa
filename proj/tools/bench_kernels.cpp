// Serial against OpenMP map evaluation, and cubic against sinh.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <vector>

#include "stretchfd/gridgen.hpp"
#include "stretchfd/kernels.hpp"

using namespace stretchfd;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < repeats; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 10'000'000;
  std::vector<double> u(n), a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);

  StretchSpec spec;
  spec.s_min = 54.57;
  spec.s_max = 183.25;
  spec.critical_points = {90.0, 102.0, 110.0};
  spec.alphas = {0.64};

  std::printf("threads %d, samples %zu\n", kernel_threads(), n);
  std::printf("%-16s %12s %12s %8s\n", "map", "serial_s", "parallel_s", "speedup");
  const std::pair<const char*, StretchKind> kinds[] = {
      {"sinh", StretchKind::Sinh},
      {"cubic", StretchKind::Cubic},
      {"piecewise_c1", StretchKind::PiecewiseCubicC1},
      {"piecewise_c2", StretchKind::PiecewiseC2},
      {"tavella_randall", StretchKind::TavellaRandall},
  };
  for (const auto& [name, kind] : kinds) {
    StretchSpec s = spec;
    s.kind = kind;
    if (kind == StretchKind::Sinh || kind == StretchKind::Cubic) s.critical_points = {102.0};
    StretchMap map = build_map(s, 1000);
    double ts = best_of(3, [&] { evaluate_serial(map, u, a); });
    double tp = best_of(3, [&] { evaluate_parallel(map, u, b); });
    if (a != b) {
      std::printf("%s: serial and parallel results differ\n", name);
      return 1;
    }
    std::printf("%-16s %12.6f %12.6f %8.2f\n", name, ts, tp, ts / tp);
  }
  return 0;
}
