#pragma once

#include "fracnet/types.hpp"

namespace fracnet {

/// All eigenvalues of a square real matrix (Hessenberg + shifted QR through
/// the dense solver). Non-real eigenvalues come in exact conjugate pairs.
Spectrum eigenvalues(const Matrix& A);

/// Eigenvalues plus right eigenvectors, for observability checks.
struct EigenPairs {
    ComplexVector values;
    ComplexMatrix vectors;
};
EigenPairs eigen_pairs(const Matrix& A);

/// Closed-form poles of the uniform cyclic loop: n points on the circle of
/// radius c_geo centered at -a, at angles pi/n + 2*pi*k/n.
Spectrum uniform_cyclic_poles(int n, double a, double c_geo);

struct Laplacian {
    Matrix matrix;    // symmetric, zero row sums
    Vector spectrum;  // ascending, spectrum[0] ~ 0
    bool connected = false;

    int size() const { return static_cast<int>(matrix.rows()); }
    double fiedler_value() const { return spectrum.size() > 1 ? spectrum[1] : 0.0; }
};

/// Degree matrix minus adjacency matrix; spectrum from a symmetric solver so
/// connectivity can be read off lambda_2 without spurious imaginary parts.
/// A disconnected graph is not an error here: the connected flag carries the
/// warning and consensus operations reject it.
Laplacian laplacian(const WeightedGraph& g);

/// (sum_{i>=2} lambda_i^q)^(1/q) over the nonzero Laplacian spectrum, q >= 1.
double spectral_zeta(const Laplacian& lap, double q);

/// Multiset distance between two equally sized eigenvalue lists: the largest
/// pairwise |x - y| under a minimum-cost perfect matching. Used instead of
/// sorted-order comparison because conjugate-pair ordering is solver-dependent.
double match_distance(const std::vector<Complex>& x, const std::vector<Complex>& y);

}  // namespace fracnet
