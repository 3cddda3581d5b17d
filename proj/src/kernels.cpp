#include "fracnet/kernels.hpp"

#include <cassert>
#include <cstdlib>
#include <cstring>

namespace fracnet::kernels {

namespace scalar {

double dot_reversed(const double* a, const double* b, std::size_t len) {
    double s0 = 0.0, s1 = 0.0;
    std::size_t t = 0;
    for (; t + 2 <= len; t += 2) {
        s0 += a[t] * b[len - 1 - t];
        s1 += a[t + 1] * b[len - 2 - t];
    }
    if (t < len) s0 += a[t] * b[len - 1 - t];
    return s0 + s1;
}

double sum_squares(const double* a, std::size_t len) {
    double s0 = 0.0, s1 = 0.0;
    std::size_t t = 0;
    for (; t + 2 <= len; t += 2) {
        s0 += a[t] * a[t];
        s1 += a[t + 1] * a[t + 1];
    }
    if (t < len) s0 += a[t] * a[t];
    return s0 + s1;
}

}  // namespace scalar

namespace {

using DotReversedFn = double (*)(const double*, const double*, std::size_t);
using SumSquaresFn = double (*)(const double*, std::size_t);

struct Backend {
    const char* name;
    DotReversedFn dot_reversed;
    SumSquaresFn sum_squares;
};

constexpr Backend kScalarBackend{"scalar", &scalar::dot_reversed, &scalar::sum_squares};

Backend select_backend() {
    const char* env = std::getenv("FRACNET_SIMD");
    const bool want_scalar = env && std::strcmp(env, "scalar") == 0;
    if (want_scalar) return kScalarBackend;
#if (defined(__x86_64__) || defined(_M_X64)) && defined(FRACNET_HAVE_AVX2_TU)
    if (avx2::supported()) return Backend{"avx2", &avx2::dot_reversed, &avx2::sum_squares};
#endif
    return kScalarBackend;
}

const Backend& backend() {
    static const Backend b = select_backend();
    return b;
}

}  // namespace

double dot_reversed(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    if (a.empty()) return 0.0;
    return backend().dot_reversed(a.data(), b.data(), a.size());
}

double sum_squares(std::span<const double> a) {
    if (a.empty()) return 0.0;
    return backend().sum_squares(a.data(), a.size());
}

const char* active_backend() { return backend().name; }

}  // namespace fracnet::kernels
