#pragma once

// Batch evaluation of stretch maps. The serial kernels are the reference the
// OpenMP kernels are tested against; both must agree bit for bit.

#include <span>

#include "stretchfd/gridgen.hpp"

namespace stretchfd {

void evaluate_serial(const StretchMap& map, std::span<const double> u, std::span<double> out);
void evaluate_parallel(const StretchMap& map, std::span<const double> u, std::span<double> out);

/// Number of OpenMP threads the parallel kernels will use.
int kernel_threads();

}  // namespace stretchfd
