#include "fracnet/simulation.hpp"

#include <cmath>
#include <complex>
#include <limits>

namespace fracnet {

namespace {

using LongComplex = std::complex<long double>;

constexpr double kTargetRel = 1e-10;
constexpr long double kEpsLong = std::numeric_limits<long double>::epsilon();

struct Estimate {
    Complex value{};
    double rel_error = std::numeric_limits<double>::infinity();
    bool usable = false;
};

// Power series with Kahan compensation in long double. Cancellation is
// tracked through the largest term magnitude; the estimate is unusable once
// that wipes out the target accuracy.
Estimate series(double alpha, double beta, Complex z) {
    const LongComplex zl(z.real(), z.imag());
    LongComplex sum(0.0L, 0.0L), comp(0.0L, 0.0L);
    long double max_term = 0.0L, abs_accum = 0.0L;
    const long double log_abs_z = std::abs(z) > 0 ? std::log((long double)std::abs(z)) : 0.0L;
    const long double phase = std::arg(zl);

    Estimate out;
    bool decaying = false;
    for (int k = 0; k < 4000; ++k) {
        const long double g = std::lgamma((long double)alpha * k + (long double)beta);
        const long double log_mag = k * log_abs_z - g;
        if (log_mag > 11000.0L) return out;  // would overflow long double
        const long double mag = std::exp(log_mag);
        LongComplex term;
        if (k == 0 && std::abs(z) == 0.0) {
            term = LongComplex(std::exp(-g), 0.0L);
        } else if (z.imag() == 0.0) {  // keep real arguments exactly real
            term = LongComplex(z.real() < 0.0 && (k % 2) ? -mag : mag, 0.0L);
        } else {
            term = std::polar(mag, phase * k);
        }
        const LongComplex y = term - comp;
        const LongComplex t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        max_term = std::max(max_term, mag);
        abs_accum += mag;
        if (mag < max_term * 1e-30L && k > 2) decaying = true;
        const long double abs_sum = std::abs(sum);
        if (decaying && mag <= abs_sum * 1e-25L + 1e-300L) {
            out.value = Complex((double)sum.real(), (double)sum.imag());
            // compensated-summation roundoff: 2 eps sum|terms|, first order
            const long double floor_err = 2.0L * kEpsLong * abs_accum;
            out.rel_error = abs_sum > 0 ? (double)(floor_err / abs_sum) : 0.0;
            out.usable = true;
            return out;
        }
    }
    return out;
}

// Large-|z| expansion: algebraic part -sum_k z^-k / Gamma(beta - alpha k),
// truncated at its smallest term, plus the exponential branch
// (1/alpha) w^((1-beta)/alpha) exp(w), w = z^(1/alpha), inside the sector
// |arg z| < alpha*pi. Near the sector boundary the switching is delicate and
// the estimate is reported unusable.
Estimate asymptotic(double alpha, double beta, Complex z) {
    Estimate out;
    const double abs_z = std::abs(z);
    if (abs_z < 1.5) return out;
    const double arg_z = principal_arg(z);
    const double sector = alpha * kPi;
    const double margin = 0.05 * sector;

    Complex alg(0.0, 0.0);
    double smallest = std::numeric_limits<double>::infinity();
    double last_mag = std::numeric_limits<double>::infinity();
    Complex zk(1.0, 0.0);
    for (int k = 1; k <= 200; ++k) {
        zk /= z;
        const double g_arg = beta - alpha * k;
        // 1/Gamma at the poles is zero; skip those terms exactly.
        double inv_gamma;
        if (g_arg <= 0.0 && std::abs(g_arg - std::round(g_arg)) < 1e-14) {
            inv_gamma = 0.0;
        } else {
            inv_gamma = 1.0 / std::tgamma(g_arg);
        }
        const Complex term = -zk * inv_gamma;
        const double mag = std::abs(term);
        if (mag > last_mag && k > 2) break;  // past the optimal truncation
        alg += term;
        if (mag > 0.0) {
            last_mag = mag;
            smallest = mag;
        }
    }

    Complex value = alg;
    if (std::abs(arg_z) < sector - margin) {
        const Complex w = std::pow(z, 1.0 / alpha);
        value += std::pow(z, (1.0 - beta) / alpha) * std::exp(w) / alpha;
    } else if (std::abs(std::abs(arg_z) - sector) < margin) {
        return out;  // Stokes region
    }

    const double abs_val = std::abs(value);
    if (abs_val == 0.0) return out;
    out.value = value;
    out.rel_error = 2.0 * smallest / abs_val;
    out.usable = std::isfinite(abs_val);
    return out;
}

}  // namespace

Complex mittag_leffler(double alpha, double beta_param, Complex z) {
    if (!(alpha > 0.0)) throw ValidationError("mittag_leffler: alpha must be positive");

    if (alpha > 1.0) {
        // Duplication: E_{a,b}(z) = (E_{a/2,b}(sqrt z) + E_{a/2,b}(-sqrt z)) / 2.
        // Only needed when the direct series loses too much accuracy.
        Estimate direct = series(alpha, beta_param, z);
        if (direct.usable && direct.rel_error <= kTargetRel) return direct.value;
        const Complex root = std::sqrt(z);
        return 0.5 * (mittag_leffler(alpha / 2.0, beta_param, root) +
                      mittag_leffler(alpha / 2.0, beta_param, -root));
    }

    Estimate best = series(alpha, beta_param, z);
    if (best.usable && best.rel_error <= kTargetRel) return best.value;
    Estimate tail = asymptotic(alpha, beta_param, z);
    if (tail.usable && tail.rel_error < best.rel_error) best = tail;
    if (best.usable && best.rel_error <= kTargetRel) return best.value;
    throw NumericalError("mittag_leffler: 1e-10 relative accuracy not attainable here");
}

}  // namespace fracnet
