// AVX2/FMA kernel variants. This translation unit is the only one compiled
// with -mavx2 -mfma; callers reach it through the runtime dispatch table.

#include "fracnet/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace fracnet::kernels::avx2 {

bool supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

inline __m256d load_reversed(const double* p) {
    // [p0 p1 p2 p3] -> [p3 p2 p1 p0]
    return _mm256_permute4x64_pd(_mm256_loadu_pd(p), _MM_SHUFFLE(0, 1, 2, 3));
}

}  // namespace

double dot_reversed(const double* a, const double* b, std::size_t len) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc3 = _mm256_setzero_pd();
    std::size_t t = 0;
    for (; t + 16 <= len; t += 16) {
        const double* br = b + (len - t);
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + t), load_reversed(br - 4), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + t + 4), load_reversed(br - 8), acc1);
        acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + t + 8), load_reversed(br - 12), acc2);
        acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + t + 12), load_reversed(br - 16), acc3);
    }
    for (; t + 4 <= len; t += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + t), load_reversed(b + len - t - 4), acc0);
    double sum = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
    for (; t < len; ++t) sum += a[t] * b[len - 1 - t];
    return sum;
}

double sum_squares(const double* a, std::size_t len) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t t = 0;
    for (; t + 8 <= len; t += 8) {
        __m256d v0 = _mm256_loadu_pd(a + t);
        __m256d v1 = _mm256_loadu_pd(a + t + 4);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    for (; t + 4 <= len; t += 4) {
        __m256d v = _mm256_loadu_pd(a + t);
        acc0 = _mm256_fmadd_pd(v, v, acc0);
    }
    double sum = hsum(_mm256_add_pd(acc0, acc1));
    for (; t < len; ++t) sum += a[t] * a[t];
    return sum;
}

}  // namespace fracnet::kernels::avx2

#endif  // x86_64
