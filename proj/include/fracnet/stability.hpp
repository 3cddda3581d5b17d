#pragma once

#include "fracnet/spectral.hpp"
#include "fracnet/types.hpp"

#include <span>

namespace fracnet {

/// Eigenvalues within this angular distance of the critical rays are treated
/// as boundary modes and routed to the multiplicity test.
inline constexpr double kCriticalArgTol = 1e-9;

/// Right-hand side of the generalized secant condition,
/// sin(alpha*pi/2) / sin(alpha*pi/2 - pi/n); +infinity for alpha <= 2/n where
/// the loop is stable regardless of gains.
double secant_bound(int n, double alpha);

enum class SecantRegime { AlwaysStable, Conditional };

const char* to_string(SecantRegime regime);

struct SecantAssessment {
    double a_geo = 0.0;  // geometric mean of self-decay rates
    double c_geo = 0.0;  // geometric mean of coupling gains
    double gamma = 0.0;  // c_geo / a_geo
    double bound = 0.0;  // +infinity in the AlwaysStable regime
    SecantRegime regime = SecantRegime::Conditional;
    bool sufficient_pass = false;       // regime AlwaysStable or gamma < bound
    bool necessary_applicable = false;  // all a_i identical (to 1e-9 relative)
};

SecantAssessment assess_cyclic(const CyclicSpec& spec);

/// Argument test on the spectrum of the state matrix. Every eigenvalue must
/// satisfy |arg(lambda)| > alpha*pi/2 for asymptotic stability; eigenvalues on
/// the rays (and zero eigenvalues, which sit on the wedge vertex) must have
/// equal geometric and algebraic multiplicities for marginal stability.
StabilityVerdict matignon_verdict(const FractionalSystem& sys);

struct BoundCurvePoint {
    double alpha = 0.0;
    double bound = 0.0;  // +infinity marks the asymptote alpha <= 2/n
};

/// Tabulates secant_bound over the grid (each value in (0,2)).
std::vector<BoundCurvePoint> bound_curve(int n, std::span<const double> alpha_grid);

std::vector<double> linspace(double lo, double hi, int steps);

}  // namespace fracnet
