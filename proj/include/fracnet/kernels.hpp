#pragma once

#include <cstddef>
#include <span>

// Data-parallel inner loops used by the time-domain integrator: the fractional
// history convolution (a reversed dot product against the weight sequence) and
// the output-energy reduction. Each has a scalar reference implementation and
// an AVX2 variant; the active backend is chosen once at runtime from CPU
// capabilities and can be pinned with FRACNET_SIMD=scalar|avx2|auto.

namespace fracnet::kernels {

/// sum over t of a[t] * b[len-1-t]; a and b must have equal length.
double dot_reversed(std::span<const double> a, std::span<const double> b);

/// sum over t of a[t]^2.
double sum_squares(std::span<const double> a);

/// Name of the backend serving the calls above ("scalar" or "avx2").
const char* active_backend();

namespace scalar {
double dot_reversed(const double* a, const double* b, std::size_t len);
double sum_squares(const double* a, std::size_t len);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
bool supported();
double dot_reversed(const double* a, const double* b, std::size_t len);
double sum_squares(const double* a, std::size_t len);
}  // namespace avx2
#endif

}  // namespace fracnet::kernels
