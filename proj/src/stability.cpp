#include "fracnet/stability.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int rank_of(const ComplexMatrix& M, double scale) {
    Eigen::JacobiSVD<ComplexMatrix> svd(M);
    const double thresh = std::max(scale, svd.singularValues().size() > 0
                                              ? svd.singularValues()[0]
                                              : 0.0) *
                          M.rows() * 1e-12;
    int rank = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > thresh) ++rank;
    return rank;
}

}  // namespace

double secant_bound(int n, double alpha) {
    if (n < 2) throw ValidationError("secant_bound: n must be at least 2");
    if (!(alpha > 0.0 && alpha < 2.0)) throw ValidationError("secant_bound: alpha out of (0,2)");
    if (alpha <= 2.0 / n) return kInf;
    const double half = alpha * kPi / 2.0;
    return std::sin(half) / std::sin(half - kPi / n);
}

const char* to_string(SecantRegime regime) {
    return regime == SecantRegime::AlwaysStable ? "AlwaysStable" : "Conditional";
}

SecantAssessment assess_cyclic(const CyclicSpec& spec) {
    require_valid(spec);
    SecantAssessment out;
    out.a_geo = geometric_mean(spec.a);
    out.c_geo = geometric_mean(spec.c);
    out.gamma = out.c_geo / out.a_geo;
    out.bound = secant_bound(spec.n, spec.alpha);
    out.regime = std::isinf(out.bound) ? SecantRegime::AlwaysStable : SecantRegime::Conditional;
    out.sufficient_pass = out.regime == SecantRegime::AlwaysStable || out.gamma < out.bound;
    out.necessary_applicable = uniform_rates(spec);
    return out;
}

StabilityVerdict matignon_verdict(const FractionalSystem& sys) {
    require_valid(sys);
    const Spectrum sp = eigenvalues(sys.A);
    const double half = sys.alpha * kPi / 2.0;
    const double scale = std::max(1.0, sys.A.norm());
    const double zero_tol = 1e-12 * scale;

    StabilityVerdict verdict;
    verdict.margin = kInf;
    std::vector<Index> critical;
    bool strictly_inside = false;
    for (Index i = 0; i < sp.size(); ++i) {
        const Complex lambda = sp.eigenvalues[i];
        // A zero eigenvalue sits on the vertex of the instability wedge: not
        // asymptotically stable for any order, boundedness decided by the
        // multiplicity test like any other boundary mode.
        const double margin =
            std::abs(lambda) <= zero_tol ? 0.0 : std::abs(sp.args[i]) - half;
        if (margin < verdict.margin) {
            verdict.margin = margin;
            verdict.witness = lambda;
        }
        if (std::abs(margin) <= kCriticalArgTol)
            critical.push_back(i);
        else if (margin < 0.0)
            strictly_inside = true;
    }

    if (strictly_inside) {
        verdict.kind = StabilityKind::Unstable;
        return verdict;
    }
    if (critical.empty()) {
        verdict.kind = StabilityKind::AsymptoticallyStable;
        return verdict;
    }

    // Boundary modes present: marginally stable iff each critical eigenvalue
    // has equal geometric and algebraic multiplicities.
    const double cluster_tol = 1e-7 * scale;
    std::vector<char> visited(critical.size(), 0);
    for (size_t ci = 0; ci < critical.size(); ++ci) {
        if (visited[ci]) continue;
        const Complex lambda = sp.eigenvalues[critical[ci]];
        int algebraic = 0;
        for (size_t cj = ci; cj < critical.size(); ++cj) {
            if (!visited[cj] && std::abs(sp.eigenvalues[critical[cj]] - lambda) <= cluster_tol) {
                visited[cj] = 1;
                ++algebraic;
            }
        }
        ComplexMatrix shifted = sys.A.cast<Complex>();
        shifted.diagonal().array() -= lambda;
        const int geometric = static_cast<int>(sys.A.rows()) - rank_of(shifted, scale);
        if (geometric != algebraic) {
            verdict.kind = StabilityKind::Unstable;
            return verdict;
        }
    }
    verdict.kind = StabilityKind::MarginallyStable;
    return verdict;
}

std::vector<BoundCurvePoint> bound_curve(int n, std::span<const double> alpha_grid) {
    std::vector<BoundCurvePoint> out;
    out.reserve(alpha_grid.size());
    for (double alpha : alpha_grid) out.push_back({alpha, secant_bound(n, alpha)});
    return out;
}

std::vector<double> linspace(double lo, double hi, int steps) {
    if (steps < 1) throw ValidationError("linspace: steps must be positive");
    std::vector<double> grid(steps);
    if (steps == 1) {
        grid[0] = lo;
        return grid;
    }
    for (int i = 0; i < steps; ++i) grid[i] = lo + (hi - lo) * i / (steps - 1);
    return grid;
}

}  // namespace fracnet
