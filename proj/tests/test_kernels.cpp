#include "fracnet/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace fracnet;

namespace {

// Reference evaluation, deliberately naive.
double naive_dot_reversed(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t t = 0; t < a.size(); ++t) s += a[t] * b[a.size() - 1 - t];
    return s;
}

std::vector<double> random_vector(std::mt19937_64& rng, size_t len) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(len);
    for (auto& x : v) x = dist(rng);
    return v;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("dot_reversed matches the naive reference across SIMD boundaries") {
    std::mt19937_64 rng(1);
    for (size_t len : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 31u, 33u, 64u, 67u, 130u, 1001u}) {
        const auto a = random_vector(rng, len);
        const auto b = random_vector(rng, len);
        const double got = kernels::dot_reversed(a, b);
        const double want = naive_dot_reversed(a, b);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("sum_squares matches the naive reference") {
    std::mt19937_64 rng(2);
    for (size_t len : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 63u, 64u, 65u, 999u}) {
        const auto a = random_vector(rng, len);
        double want = 0.0;
        for (double x : a) want += x * x;
        CHECK(kernels::sum_squares(a) == doctest::Approx(want).epsilon(1e-12));
    }
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("scalar and AVX2 backends agree") {
    if (!kernels::avx2::supported()) return;
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const size_t len = static_cast<size_t>(rng() % 600);
        const auto a = random_vector(rng, len);
        const auto b = random_vector(rng, len);
        const double s = kernels::scalar::dot_reversed(a.data(), b.data(), len);
        const double v = kernels::avx2::dot_reversed(a.data(), b.data(), len);
        CHECK(v == doctest::Approx(s).epsilon(1e-12));
        CHECK(kernels::avx2::sum_squares(a.data(), len) ==
              doctest::Approx(kernels::scalar::sum_squares(a.data(), len)).epsilon(1e-12));
    }
}
#endif

TEST_CASE("active backend reports a known name") {
    const std::string name = kernels::active_backend();
    CHECK((name == "scalar" || name == "avx2"));
}

}  // TEST_SUITE
