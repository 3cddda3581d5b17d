#include "fracnet/quadrature.hpp"

#include "fracnet/types.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace fracnet {

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (positive half; the rule is
// symmetric). Kronrod weights cover all 15 nodes, Gauss weights the odd ones.
constexpr double kNodes[8] = {
    0.000000000000000000, 0.207784955007898468, 0.405845151377397167, 0.586087235467691130,
    0.741531185599394440, 0.864864423359769073, 0.949107912342758525, 0.991455371120812639,
};
constexpr double kKronrod[8] = {
    0.209482141084727828, 0.204432940075298892, 0.190350578064785410, 0.169004726639267903,
    0.140653259715525919, 0.104790010322250184, 0.063092092629978553, 0.022935322010529225,
};
constexpr double kGauss[4] = {
    0.417959183673469388, 0.381830050505118945, 0.279705391489276668, 0.129484966168869693,
};

struct Panel {
    double a, b, value, error;
};

Panel evaluate(const std::function<double(double)>& f, double a, double b, long& evals) {
    const double mid = 0.5 * (a + b);
    const double halflen = 0.5 * (b - a);
    const double f0 = f(mid);
    double k15 = kKronrod[0] * f0;
    double g7 = kGauss[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = halflen * kNodes[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        k15 += kKronrod[i] * fsum;
        if (i % 2 == 0) g7 += kGauss[i / 2] * fsum;
    }
    evals += 15;
    k15 *= halflen;
    g7 *= halflen;
    const double diff = std::abs(k15 - g7);
    // Standard QUADPACK-style sharpening of the raw difference.
    const double err = diff * std::min(1.0, std::pow(200.0 * diff / std::max(std::abs(k15), 1e-300), 1.5)) + diff * 1e-14;
    return {a, b, k15, std::max(err, std::abs(k15) * 1e-15)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, double abs_floor, int max_panels) {
    if (!(b > a)) throw ValidationError("integrate_adaptive: empty interval");
    long evals = 0;
    auto worse = [](const Panel& x, const Panel& y) {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a;  // deterministic tie-break
    };
    std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> heap(worse);
    Panel root = evaluate(f, a, b, evals);
    double total = root.value;
    double total_err = root.error;
    heap.push(root);

    while (static_cast<int>(heap.size()) < max_panels) {
        const double goal = std::max(rel_tol * std::abs(total), abs_floor);
        if (total_err <= goal) break;
        Panel worst = heap.top();
        if (worst.error <= goal / std::max<size_t>(heap.size(), 1)) break;
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {  // interval exhausted by rounding
            heap.push(worst);
            break;
        }
        Panel left = evaluate(f, worst.a, mid, evals);
        Panel right = evaluate(f, mid, worst.b, evals);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Fixed-order reduction: re-sum panels by interval start.
    std::vector<Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    QuadratureResult out;
    for (const Panel& p : panels) {
        out.value += p.value;
        out.abs_error += p.error;
    }
    out.panels = static_cast<int>(panels.size());
    out.evals = evals;
    if (!std::isfinite(out.value))
        throw NumericalError("integrate_adaptive: integrand produced non-finite values");
    return out;
}

}  // namespace fracnet
