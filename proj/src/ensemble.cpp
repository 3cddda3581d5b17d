#include "fracnet/ensemble.hpp"

#include "fracnet/parallel.hpp"
#include "fracnet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracnet {

double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(rng);
}

double standard_normal(std::mt19937_64& rng) {
    double u, v, s;
    do {
        u = 2.0 * uniform_unit(rng) - 1.0;
        v = 2.0 * uniform_unit(rng) - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
}

std::vector<std::string> validate_config(const EnsembleConfig& cfg) {
    std::vector<std::string> out;
    if (cfg.count < 1) out.push_back("count: must be positive");
    if (cfg.n < 2) out.push_back("n: must be at least 2");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 2.0)) out.push_back("alpha: out of (0,2)");
    if (!(cfg.gamma > 0.0)) out.push_back("gamma: must be positive");
    if (!(cfg.theta >= 0.0)) out.push_back("theta: must be non-negative");
    if (cfg.gamma > 0.0 && std::abs(std::log(cfg.gamma)) > cfg.theta + 1e-12)
        out.push_back("gamma/theta: |log gamma| <= theta required for a nonempty constraint set");
    return out;
}

namespace {

// Uniform point on the sum-slice of the box via hit-and-run, started from the
// centroid. Each draw runs a fresh fixed-length chain so the stream layout
// stays deterministic.
Vector hit_and_run_sample(int n, double target, double theta, std::mt19937_64& rng) {
    Vector v = Vector::Constant(n, target / n);
    Vector dir(n);
    constexpr int kSteps = 512;
    for (int step = 0; step < kSteps; ++step) {
        double mean = 0.0;
        for (int i = 0; i < n; ++i) {
            dir[i] = standard_normal(rng);
            mean += dir[i];
        }
        mean /= n;
        dir.array() -= mean;  // stay on the sum-slice
        const double norm = dir.norm();
        if (norm < 1e-12) continue;
        dir /= norm;
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (dir[i] > 1e-300) {
                lo = std::max(lo, (-theta - v[i]) / dir[i]);
                hi = std::min(hi, (theta - v[i]) / dir[i]);
            } else if (dir[i] < -1e-300) {
                lo = std::max(lo, (theta - v[i]) / dir[i]);
                hi = std::min(hi, (-theta - v[i]) / dir[i]);
            }
        }
        if (!(hi > lo)) continue;
        v += uniform_in(rng, lo, hi) * dir;
    }
    // Close the sum exactly; the drift over a chain is at machine scale.
    v.array() += (target - v.sum()) / n;
    return v;
}

}  // namespace

Vector sample_log_fixed_sum(int n, double target_sum, double theta, std::mt19937_64& rng) {
    if (n < 1) throw ValidationError("sample_log_fixed_sum: n must be positive");
    if (!(theta >= 0.0)) throw ValidationError("sample_log_fixed_sum: theta must be non-negative");
    if (std::abs(target_sum) > n * theta + 1e-12)
        throw ValidationError("sample_log_fixed_sum: |target_sum| > n*theta is infeasible");
    if (n == 1) return Vector::Constant(1, target_sum);

    // 3000 consecutive misses puts the acceptance rate below ~0.1% with high
    // confidence; fall back to the slice walk from there.
    constexpr int kMaxRejects = 3000;
    Vector v(n);
    for (int attempt = 0; attempt < kMaxRejects; ++attempt) {
        double partial = 0.0;
        for (int i = 0; i + 1 < n; ++i) {
            v[i] = uniform_in(rng, -theta, theta);
            partial += v[i];
        }
        const double last = target_sum - partial;
        if (std::abs(last) <= theta) {
            v[n - 1] = last;
            return v;
        }
    }
    return hit_and_run_sample(n, target_sum, theta, rng);
}

std::vector<CyclicSpec> generate_ensemble(const EnsembleConfig& cfg) {
    if (auto violations = validate_config(cfg); !violations.empty()) {
        std::string msg = "generate_ensemble:";
        for (const auto& v : violations) msg += " [" + v + "]";
        throw ValidationError(msg);
    }
    std::mt19937_64 rng(cfg.seed);
    const double c_target = cfg.n * std::log(cfg.gamma);
    std::vector<CyclicSpec> specs;
    specs.reserve(cfg.count);
    for (int s = 0; s < cfg.count; ++s) {
        CyclicSpec spec;
        spec.n = cfg.n;
        spec.alpha = cfg.alpha;
        spec.a = sample_log_fixed_sum(cfg.n, 0.0, cfg.theta, rng).array().exp();
        spec.c = sample_log_fixed_sum(cfg.n, c_target, cfg.theta, rng).array().exp();
        specs.push_back(std::move(spec));
    }
    return specs;
}

PoleCloud pole_cloud(std::span<const CyclicSpec> specs) {
    const int count = static_cast<int>(specs.size());
    std::vector<std::vector<PolePoint>> rows(count);
    std::vector<char> failed(count, 0);
    parallel_for(count, [&](Index s) {
        const CyclicSpec& spec = specs[s];
        try {
            const Spectrum sp = eigenvalues(compile_cyclic(spec).A);
            const double half = spec.alpha * kPi / 2.0;
            auto& row = rows[s];
            row.reserve(sp.size());
            for (Index k = 0; k < sp.size(); ++k) {
                row.push_back({static_cast<int>(s), static_cast<int>(k), sp.eigenvalues[k],
                               std::abs(sp.args[k]) - half});
            }
        } catch (const Error&) {
            failed[s] = 1;
        }
    });
    PoleCloud cloud;
    for (int s = 0; s < count; ++s) {
        if (failed[s]) {
            cloud.failed_systems.push_back(s);
            continue;
        }
        cloud.poles.insert(cloud.poles.end(), rows[s].begin(), rows[s].end());
    }
    return cloud;
}

}  // namespace fracnet
