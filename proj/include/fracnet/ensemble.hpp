#pragma once

#include "fracnet/types.hpp"

#include <cstdint>
#include <random>
#include <span>

namespace fracnet {

/// Generator identity written into run metadata; the raw 64-bit stream is
/// specified by the standard, and all real-valued draws below derive from it
/// with fixed arithmetic, so ensembles are bit-reproducible across platforms.
inline constexpr const char* kRngAlgorithm = "mt19937_64";

/// Uniform in [0, 1) from the top 53 bits of the generator.
double uniform_unit(std::mt19937_64& rng);
double uniform_in(std::mt19937_64& rng, double lo, double hi);
/// Standard normal via the polar method (used for hit-and-run directions).
double standard_normal(std::mt19937_64& rng);

struct EnsembleConfig {
    int count = 1000;
    int n = 10;
    double alpha = 0.5;
    double gamma = 1.5575;  // target geometric-mean ratio c_geo / a_geo
    double theta = 2.0;     // log-space bound on individual rates
    std::uint64_t seed = 0;
};

std::vector<std::string> validate_config(const EnsembleConfig& cfg);

/// Uniform sample from {v in [-theta, theta]^n : sum v = target_sum}.
/// Rejection on the first n-1 coordinates; when the acceptance rate falls
/// below roughly 0.1% the draw switches to a hit-and-run walk on the slice.
Vector sample_log_fixed_sum(int n, double target_sum, double theta, std::mt19937_64& rng);

/// count cyclic specs with prod(a) = 1 and prod(c) = gamma^n, every rate in
/// [exp(-theta), exp(theta)]; deterministic given the seed.
std::vector<CyclicSpec> generate_ensemble(const EnsembleConfig& cfg);

struct PolePoint {
    int system_id = 0;
    int k = 0;  // index within the system's spectrum
    Complex pole;
    double arg_margin = 0.0;  // |arg(pole)| - alpha*pi/2
};

struct PoleCloud {
    std::vector<PolePoint> poles;
    std::vector<int> failed_systems;  // eigensolver failures, not fatal
};

PoleCloud pole_cloud(std::span<const CyclicSpec> specs);

}  // namespace fracnet
