#pragma once

#include <functional>

namespace fracnet {

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;  // sum of Kronrod-Gauss panel discrepancies
    int panels = 0;
    long evals = 0;
};

/// Adaptive Gauss-Kronrod 7-15 over [a, b]: the worst panel is bisected until
/// the summed error estimate drops below max(rel_tol * |value|, abs_floor) or
/// the panel budget runs out. Panels are summed in interval order so repeated
/// runs reduce in a fixed order.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, double abs_floor = 0.0,
                                    int max_panels = 4000);

}  // namespace fracnet
