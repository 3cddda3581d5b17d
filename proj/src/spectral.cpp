#include "fracnet/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace fracnet {

namespace {

void check_square_finite(const Matrix& A) {
    if (A.rows() != A.cols()) throw ValidationError("eigenvalues: matrix must be square");
    if (!A.allFinite()) throw ValidationError("eigenvalues: matrix entries must be finite");
}

}  // namespace

Spectrum eigenvalues(const Matrix& A) {
    check_square_finite(A);
    if (A.rows() == 0) return {};
    Eigen::EigenSolver<Matrix> solver(A, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigenvalues: QR iteration did not converge");
    const ComplexVector& ev = solver.eigenvalues();
    return make_spectrum({ev.data(), ev.data() + ev.size()});
}

EigenPairs eigen_pairs(const Matrix& A) {
    check_square_finite(A);
    Eigen::EigenSolver<Matrix> solver(A, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigenvalues: QR iteration did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Spectrum uniform_cyclic_poles(int n, double a, double c_geo) {
    if (n < 2) throw ValidationError("uniform_cyclic_poles: n must be at least 2");
    if (!(a > 0.0) || !(c_geo > 0.0))
        throw ValidationError("uniform_cyclic_poles: rates must be strictly positive");
    std::vector<Complex> poles;
    poles.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double angle = kPi / n + 2.0 * kPi * k / n;
        poles.emplace_back(-a + c_geo * std::cos(angle), c_geo * std::sin(angle));
    }
    return make_spectrum(std::move(poles));
}

Laplacian laplacian(const WeightedGraph& g) {
    require_valid(g);
    Matrix L = Matrix::Zero(g.n, g.n);
    for (const auto& e : g.edges) {
        L(e.i, e.j) -= e.weight;
        L(e.j, e.i) -= e.weight;
        L(e.i, e.i) += e.weight;
        L(e.j, e.j) += e.weight;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(L, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericalError("laplacian: symmetric eigensolver did not converge");
    Laplacian lap;
    lap.spectrum = solver.eigenvalues();
    const double scale = std::max(1.0, lap.spectrum.cwiseAbs().maxCoeff());
    lap.connected = g.n == 1 || (lap.spectrum.size() > 1 && lap.spectrum[1] > 1e-9 * scale);
    lap.matrix = std::move(L);
    return lap;
}

double spectral_zeta(const Laplacian& lap, double q) {
    if (!lap.connected) throw AnalysisError("spectral_zeta: graph is disconnected");
    if (!(q >= 1.0)) throw ValidationError("spectral_zeta: order q must be >= 1");
    double sum = 0.0;
    for (Index i = 1; i < lap.spectrum.size(); ++i) sum += std::pow(lap.spectrum[i], q);
    return std::pow(sum, 1.0 / q);
}

double match_distance(const std::vector<Complex>& x, const std::vector<Complex>& y) {
    if (x.size() != y.size())
        throw ValidationError("match_distance: spectra must have equal size");
    const int n = static_cast<int>(x.size());
    if (n == 0) return 0.0;

    // Minimum-cost perfect matching via shortest augmenting paths with
    // potentials; O(n^3), plenty for desk-scale spectra.
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);
    auto cost = [&](int i, int j) { return std::abs(x[i - 1] - y[j - 1]); };

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = match[j0];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    double worst = 0.0;
    for (int j = 1; j <= n; ++j) worst = std::max(worst, cost(match[j], j));
    return worst;
}

}  // namespace fracnet
