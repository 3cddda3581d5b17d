#pragma once

#include "fracnet/spectral.hpp"
#include "fracnet/types.hpp"

#include <functional>
#include <optional>

namespace fracnet {

struct Trajectory {
    double h = 0.0;
    double alpha = 1.0;
    std::vector<double> times;  // uniform grid starting at 0
    Matrix states;              // one row per time point
    bool diverged = false;
    double first_exceedance_time = 0.0;  // set when diverged
};

/// Input signal u(t); a null function means zero input.
using InputFunction = std::function<Vector(double)>;

struct GlOptions {
    /// Short-memory truncation of the history sum. Cheaper but biased for
    /// alpha != 1; leave unset for oracle work.
    std::optional<int> memory_window;
    double overflow_guard = 1e12;
};

/// Implicit Grunwald-Letnikov step for the Caputo dynamics of the system:
/// h^-alpha sum_j w_j (x_{k-j} - x0) = A x_k + B' u(t_k) with the binomial
/// weights w_0 = 1, w_j = w_{j-1} (1 - (alpha+1)/j). The history sum applies
/// to x - x0, which realizes the Caputo initialization (for 1 < alpha < 2 the
/// initial rate is taken as zero). Full memory by default.
Trajectory gl_integrate(const FractionalSystem& sys, const Vector& x0, const InputFunction& input,
                        double h, double T, const GlOptions& opt = {});

/// E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta), by compensated
/// long-double series where that carries 1e-10 relative accuracy and by the
/// algebraic/exponential large-argument expansion beyond; orders above one are
/// reduced by the duplication identity. Throws NumericalError where neither
/// route attains the target.
Complex mittag_leffler(double alpha, double beta_param, Complex z);

/// Time-domain squared H2 estimate: one simulation per input channel with the
/// unit impulse realized as a width-h area-one rectangle, energies summed via
/// the kernel reduction. Error estimate from a step-doubled rerun plus a
/// power-law tail extrapolation; a tail above 1% of the total is an error.
H2Report impulse_energy(const FractionalSystem& sys, double h, double T);

struct ConsensusLimit {
    Vector limit_estimate;            // time average over the final window
    double consensus_residual = 0.0;  // inf-norm distance to span{1}
    bool converged = false;           // residual below 1e-3
    double measured_prefactor = 0.0;  // mean(limit) / mean(x0)
    double dev_plain = 0.0;           // |mean(limit) - mean(x0)|
    double dev_scaled = 0.0;          // |mean(limit) - mean(x0)/alpha|
};

/// Simulates d^alpha x = -L x and measures the consensus value reached,
/// reporting the empirical prefactor against both candidate limits.
ConsensusLimit consensus_limit(const Laplacian& lap, const Vector& x0, double alpha, double T,
                               double h = 0.0 /* 0 = auto from T */);

}  // namespace fracnet
