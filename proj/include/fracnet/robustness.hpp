#pragma once

#include "fracnet/spectral.hpp"
#include "fracnet/types.hpp"

namespace fracnet {

/// ||A^T A - A A^T||_F <= rel_tol * ||A||_F^2.
bool is_normal(const Matrix& A, double rel_tol = 1e-10);

/// Additive share of one state-matrix eigenvalue in the squared H2 norm:
/// (1/2pi) * integral over the whole line of |(jw)^alpha - lambda|^-2 dw,
/// evaluated in closed form for 1/2 < alpha < 2. Requires the mode to lie
/// strictly outside the instability wedge. The order-one case is a removable
/// singularity handled by its analytic limit 1 / (2 Re(-lambda)).
double mode_h2_contribution(Complex lambda, double alpha);

/// Closed-form squared H2 norm for B = C = I and normal A.
H2Report h2_normal(const FractionalSystem& sys);

/// Closed-form squared H2 norm of the uniform cyclic loop.
H2Report h2_cyclic(const CyclicSpec& spec);

/// Order-one cyclic value by the tan / n^2/(4c) / tanh branches. Pure formula
/// evaluation (no stability gate), algebraically equal to
/// (1/2) sum_k 1 / Re(-lambda_k) over the loop poles.
double cyclic_alpha1_value(int n, double a, double c);

/// Squared H2 norm of the consensus network over a connected Laplacian: the
/// deviation-from-average output leaves the zero mode unobservable.
H2Report h2_consensus(const Laplacian& lap, double alpha);

struct H2QuadratureOptions {
    double rel_tol = 1e-6;
    int max_panels = 6000;
    // Integration cutoff chosen so the analytic tail bound c * w^(1-2a)/(2a-1)
    // stays below this fraction of the running estimate.
    double tail_fraction = 1e-6;
};

/// Frequency-domain oracle: (1/2pi) integral of tr[G*(jw) G(jw)] with
/// G(s) = C (s^alpha I - A)^{-1} B, the resolvent factored afresh at every
/// node. Independent of the closed forms above.
H2Report h2_quadrature(const FractionalSystem& sys, const H2QuadratureOptions& opt = {});

/// Quadrature oracle for the consensus network. The averaging output matrix
/// is applied inside the integrand; the unobservable zero mode is shifted off
/// the origin by +J/n, which leaves the output exactly unchanged.
H2Report h2_consensus_quadrature(const Laplacian& lap, double alpha,
                                 const H2QuadratureOptions& opt = {});

}  // namespace fracnet
