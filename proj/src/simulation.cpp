#include "fracnet/simulation.hpp"

#include "fracnet/kernels.hpp"
#include "fracnet/robustness.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fracnet {

namespace {

std::vector<double> gl_weights(double alpha, long count) {
    std::vector<double> w(count + 1);
    w[0] = 1.0;
    for (long j = 1; j <= count; ++j) w[j] = w[j - 1] * (1.0 - (alpha + 1.0) / j);
    return w;
}

}  // namespace

Trajectory gl_integrate(const FractionalSystem& sys, const Vector& x0, const InputFunction& input,
                        double h, double T, const GlOptions& opt) {
    require_valid(sys);
    if (!(h > 0.0)) throw ValidationError("gl_integrate: step must be positive");
    if (!(T >= h)) throw ValidationError("gl_integrate: horizon must cover one step");
    const Index n = sys.order();
    if (x0.size() != n) throw ValidationError("gl_integrate: x0 has wrong dimension");

    const long K = std::lround(T / h);
    const std::vector<double> w = gl_weights(sys.alpha, K);
    const double fac = std::pow(h, -sys.alpha);
    const Eigen::PartialPivLU<Matrix> step(fac * Matrix::Identity(n, n) - sys.A);

    Trajectory traj;
    traj.h = h;
    traj.alpha = sys.alpha;
    traj.times.resize(K + 1);
    for (long k = 0; k <= K; ++k) traj.times[k] = k * h;
    traj.states.resize(K + 1, n);
    traj.states.row(0) = x0;

    // History of z = x - x0 stored per component so each step's convolution is
    // one contiguous reversed dot product per state.
    std::vector<std::vector<double>> hist(n);
    for (Index i = 0; i < n; ++i) hist[i].reserve(K);

    Vector rhs(n), x(n);
    const long window = opt.memory_window.value_or(std::numeric_limits<int>::max());
    for (long k = 1; k <= K; ++k) {
        const long m = std::min<long>(k - 1, window);
        for (Index i = 0; i < n; ++i) {
            const double conv = kernels::dot_reversed(
                {w.data() + 1, static_cast<size_t>(m)},
                {hist[i].data() + (k - 1 - m), static_cast<size_t>(m)});
            rhs[i] = fac * (x0[i] - conv);
        }
        if (input) rhs += sys.B * input(k * h);
        x = step.solve(rhs);
        traj.states.row(k) = x;
        if (!x.allFinite() || x.lpNorm<Eigen::Infinity>() > opt.overflow_guard) {
            traj.diverged = true;
            traj.first_exceedance_time = k * h;
            traj.states.conservativeResize(k + 1, n);
            traj.times.resize(k + 1);
            break;
        }
        for (Index i = 0; i < n; ++i) hist[i].push_back(x[i] - x0[i]);
    }
    return traj;
}

namespace {

double output_energy(const FractionalSystem& sys, double h, double T, Index channel,
                     Matrix* power_out) {
    const Index n = sys.order();
    Vector impulse = Vector::Zero(sys.B.cols());
    impulse[channel] = 1.0 / h;
    const auto pulse = [&](double t) -> Vector {
        return t <= h * 1.5 ? Vector(impulse) : Vector(Vector::Zero(sys.B.cols()));
    };
    const Trajectory traj = gl_integrate(sys, Vector::Zero(n), pulse, h, T);
    if (traj.diverged) throw AnalysisError("impulse_energy: trajectory diverged");

    const long K = static_cast<long>(traj.states.rows()) - 1;
    const Index p = sys.C.rows();
    Matrix outputs = traj.states * sys.C.transpose();  // (K+1) x p
    double energy = 0.0;
    for (Index j = 0; j < p; ++j)
        energy += kernels::sum_squares({outputs.col(j).data(), static_cast<size_t>(K + 1)});
    if (power_out) *power_out += outputs.cwiseAbs2();
    return energy * h;
}

double run_total_energy(const FractionalSystem& sys, double h, double T, Matrix* power_out) {
    double total = 0.0;
    for (Index i = 0; i < sys.B.cols(); ++i) total += output_energy(sys, h, T, i, power_out);
    return total;
}

}  // namespace

H2Report impulse_energy(const FractionalSystem& sys, double h, double T) {
    require_valid(sys);
    if (!(h > 0.0) || !(T > 10.0 * h))
        throw ValidationError("impulse_energy: need a positive step well below the horizon");
    H2Report rep;
    rep.method = H2Method::TimeDomain;
    if (sys.alpha <= 0.5) {
        rep.infinite = true;
        rep.value = std::numeric_limits<double>::infinity();
        rep.abs_error_estimate = rep.value;
        return rep;
    }

    const long K = std::lround(T / h);
    Matrix power = Matrix::Zero(K + 1, sys.C.rows());
    const double fine = run_total_energy(sys, h, T, &power);
    const double coarse = run_total_energy(sys, 2.0 * h, T, nullptr);

    // Power-law tail extrapolation from the last two windows of the summed
    // output power profile.
    const Vector profile = power.rowwise().sum();
    auto window_mean = [&](double lo, double hi) {
        const long a = std::lround(lo * K), b = std::lround(hi * K);
        double s = 0.0;
        for (long k = a; k < b; ++k) s += profile[k];
        return s / std::max<long>(1, b - a);
    };
    const double p1 = window_mean(0.6, 0.8);
    const double p2 = window_mean(0.8, 1.0);
    // Below this the window power is numerical noise (e.g. the projected-out
    // consensus mode), not a physical tail.
    const double noise_floor = 1e-12 * fine / T;
    double tail = 0.0;
    if (p2 > noise_floor && p2 < p1) {
        const double decay = std::log(p1 / p2) / std::log(0.9 / 0.7);
        if (decay <= 1.05) {
            std::ostringstream msg;
            msg << "impulse_energy: horizon too short (output power decays too slowly); try T="
                << 10.0 * T;
            throw AnalysisError(msg.str());
        }
        tail = p2 * 0.9 * T / (decay - 1.0) * std::pow(1.0 / 0.9, 1.0 - decay);
    } else if (p2 >= p1 && p2 > noise_floor) {
        throw AnalysisError("impulse_energy: output power is not decaying; horizon too short");
    }
    if (tail > 0.01 * fine) {
        std::ostringstream msg;
        msg << "impulse_energy: estimated tail energy " << tail << " exceeds 1% of total "
            << fine << "; try T=" << 4.0 * T;
        throw AnalysisError(msg.str());
    }

    rep.value = fine;
    rep.abs_error_estimate = std::abs(fine - coarse) + tail;
    return rep;
}

ConsensusLimit consensus_limit(const Laplacian& lap, const Vector& x0, double alpha, double T,
                               double h) {
    if (!lap.connected) throw AnalysisError("consensus_limit: graph is disconnected");
    const int n = lap.size();
    if (x0.size() != n) throw ValidationError("consensus_limit: x0 has wrong dimension");
    if (h <= 0.0) h = std::clamp(T / 60000.0, 1e-3, 4.0);

    FractionalSystem sys = FractionalSystem::pseudo_states(-lap.matrix, alpha);
    const Trajectory traj = gl_integrate(sys, x0, nullptr, h, T);
    if (traj.diverged) throw NumericalError("consensus_limit: trajectory diverged");

    const long K = static_cast<long>(traj.states.rows()) - 1;
    const long start = std::max<long>(0, K - K / 5);  // final 20% window
    ConsensusLimit out;
    out.limit_estimate = traj.states.bottomRows(K + 1 - start).colwise().mean().transpose();
    const double level = out.limit_estimate.mean();
    out.consensus_residual =
        (out.limit_estimate.array() - level).abs().maxCoeff();
    out.converged = out.consensus_residual < 1e-3;

    const double mean0 = x0.mean();
    out.measured_prefactor = mean0 != 0.0 ? level / mean0 : 0.0;
    out.dev_plain = std::abs(level - mean0);
    out.dev_scaled = std::abs(level - mean0 / alpha);
    return out;
}

}  // namespace fracnet
