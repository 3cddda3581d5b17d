#include "fracnet/robustness.hpp"

#include "fracnet/quadrature.hpp"
#include "fracnet/stability.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fracnet;

namespace {

CyclicSpec uniform(int n, double a, double c, double alpha) {
    return {n, Vector::Constant(n, a), Vector::Constant(n, c), alpha};
}

WeightedGraph complete(int n) {
    WeightedGraph g;
    g.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j, 1.0});
    return g;
}

WeightedGraph cycle(int n) {
    WeightedGraph g;
    g.n = n;
    for (int i = 0; i < n; ++i) g.edges.push_back({i, (i + 1) % n, 1.0});
    return g;
}

// Plain midpoint-rule oracle for the single-mode line integral, independent of
// both the closed form and the adaptive scheme. Substituting w = exp(u) makes
// both the origin and the power-law tail exponentially localized in u.
double midpoint_mode_integral(Complex lambda, double alpha) {
    auto f = [&](double w) {
        const Complex s = std::polar(std::pow(std::abs(w), alpha),
                                     (w >= 0 ? 1.0 : -1.0) * alpha * kPi / 2);
        return 1.0 / std::norm(s - lambda);
    };
    const long steps = 300000;
    const double ulo = -40.0, uhi = 60.0 / (2.0 * alpha - 1.0);
    const double du = (uhi - ulo) / steps;
    double sum = 0.0;
    for (long k = 0; k < steps; ++k) {
        const double w = std::exp(ulo + (k + 0.5) * du);
        sum += (f(w) + f(-w)) * w;  // dw = w du
    }
    return sum * du / (2.0 * kPi);
}

}  // namespace

TEST_SUITE("robustness") {

TEST_CASE("per-mode contribution matches a brute-force line integral") {
    for (const auto& [lambda, alpha] :
         {std::pair<Complex, double>{{-1.0, 0.0}, 0.75},
          {{-1.0, 0.0}, 1.25},
          {{-1.4142135623730951, 1.4142135623730951}, 0.9},
          {{-0.25, 0.5}, 1.6}}) {
        const double closed = mode_h2_contribution(lambda, alpha);
        const double brute = midpoint_mode_integral(lambda, alpha);
        CHECK(closed == doctest::Approx(brute).epsilon(2e-4));
    }
}

TEST_CASE("mode contribution rejects boundary modes") {
    CHECK_THROWS_AS(mode_h2_contribution(Complex(0.0, 0.0), 0.8), AnalysisError);
    // On the critical ray: the line integral diverges.
    const Complex on_ray = std::polar(1.0, 0.8 * kPi / 2);
    CHECK_THROWS_AS(mode_h2_contribution(on_ray, 0.8), AnalysisError);
    CHECK_THROWS_AS(mode_h2_contribution(Complex(-1.0, 0.0), 0.4), AnalysisError);
}

TEST_CASE("h2_normal classical values") {
    FractionalSystem scalar = FractionalSystem::pseudo_states(-Matrix::Identity(1, 1), 1.0);
    CHECK(h2_normal(scalar).value == doctest::Approx(0.5).epsilon(1e-12));

    Vector d(2);
    d << -1.0, -2.0;
    FractionalSystem diag = FractionalSystem::pseudo_states(d.asDiagonal(), 1.0);
    CHECK(h2_normal(diag).value == doctest::Approx(0.75).epsilon(1e-12));

    scalar.alpha = 0.75;
    const H2Report rep = h2_normal(scalar);
    const H2Report quad = h2_quadrature(scalar);
    CHECK(std::abs(rep.value - quad.value) / quad.value < 1e-4);
    REQUIRE(rep.per_mode.has_value());
    CHECK(rep.per_mode->size() == 1);
}

TEST_CASE("h2_normal preconditions") {
    Matrix shear(2, 2);
    shear << -1.0, 5.0, 0.0, -1.0;  // stable but not normal
    CHECK_THROWS_AS(h2_normal(FractionalSystem::pseudo_states(shear, 1.0)), AnalysisError);

    FractionalSystem unstable = FractionalSystem::pseudo_states(Matrix::Identity(1, 1), 1.0);
    CHECK_THROWS_AS(h2_normal(unstable), AnalysisError);

    FractionalSystem low = FractionalSystem::pseudo_states(-Matrix::Identity(1, 1), 0.4);
    const H2Report rep = h2_normal(low);
    CHECK(rep.infinite);

    FractionalSystem wrong_b = FractionalSystem::pseudo_states(-Matrix::Identity(2, 2), 1.0);
    wrong_b.B(0, 0) = 2.0;
    CHECK_THROWS_AS(h2_normal(wrong_b), AnalysisError);
}

TEST_CASE("order-one continuity across the switch") {
    Matrix rot(2, 2);
    rot << -1.0, 0.8, -0.8, -1.0;  // normal, complex pair -1 +- 0.8j
    FractionalSystem sys = FractionalSystem::pseudo_states(rot, 1.0);
    const double at_one = h2_normal(sys).value;
    for (double alpha : {1.0 - 1e-4, 1.0 + 1e-4}) {
        sys.alpha = alpha;
        CHECK(std::abs(h2_normal(sys).value - at_one) / at_one < 1e-3);
    }
}

TEST_CASE("h2_cyclic branches and consistency") {
    CHECK(h2_cyclic(uniform(4, 1.0, 1.0, 1.0)).value == doctest::Approx(4.0).epsilon(1e-12));

    // a > c: tanh branch against the eigenvalue sum.
    double eig_sum = 0.0;
    for (Complex pole : uniform_cyclic_poles(4, 2.0, 1.0).eigenvalues)
        eig_sum += 0.5 / (-pole).real();
    CHECK(h2_cyclic(uniform(4, 2.0, 1.0, 1.0)).value == doctest::Approx(eig_sum).epsilon(1e-12));

    // General order: corollary sum equals the normal-matrix closed form.
    const CyclicSpec spec = uniform(4, 1.0, 1.0, 0.9);
    const double via_cyclic = h2_cyclic(spec).value;
    const double via_normal = h2_normal(compile_cyclic(spec)).value;
    CHECK(std::abs(via_cyclic - via_normal) < 1e-10 * via_normal);

    CyclicSpec mixed = uniform(4, 1.0, 0.5, 0.9);
    mixed.a[2] = 2.0;
    CHECK_THROWS_AS(h2_cyclic(mixed), AnalysisError);
    CHECK_THROWS_AS(h2_cyclic(uniform(10, 1.0, 2.0, 0.5)), AnalysisError);  // unstable
    CHECK(h2_cyclic(uniform(4, 1.0, 0.5, 0.45)).infinite);
}

TEST_CASE("cyclic order-one branch formulas against the pole sum") {
    for (const auto& [n, a, c] : {std::tuple<int, double, double>{4, 1.0, 1.0},
                                  {4, 2.0, 1.0},
                                  {4, 1.0, 2.0},
                                  {7, 0.8, 1.1},
                                  {5, 3.0, 0.4}}) {
        double eig_sum = 0.0;
        for (Complex pole : uniform_cyclic_poles(n, a, c).eigenvalues)
            eig_sum += 0.5 / (-pole).real();
        CHECK(cyclic_alpha1_value(n, a, c) == doctest::Approx(eig_sum).epsilon(1e-12));
    }
}

TEST_CASE("h2_consensus golden values") {
    CHECK(h2_consensus(laplacian(complete(4)), 1.0).value == doctest::Approx(0.375));
    WeightedGraph p3;
    p3.n = 3;
    p3.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
    CHECK(h2_consensus(laplacian(p3), 1.0).value == doctest::Approx(2.0 / 3.0));

    const Laplacian c5 = laplacian(cycle(5));
    const double closed = h2_consensus(c5, 0.8).value;
    const double quad = h2_consensus_quadrature(c5, 0.8).value;
    CHECK(std::abs(closed - quad) / quad < 1e-4);

    WeightedGraph disconnected;
    disconnected.n = 4;
    disconnected.edges = {{0, 1, 1.0}, {2, 3, 1.0}};
    CHECK_THROWS_AS(h2_consensus(laplacian(disconnected), 1.0), AnalysisError);
    CHECK(h2_consensus(laplacian(complete(3)), 0.5).infinite);
}

TEST_CASE("consensus value equals the generic mode formula on -L") {
    const Laplacian lap = laplacian(cycle(6));
    for (double alpha : {0.7, 1.2, 1.6}) {
        double direct = 0.0;
        for (Index i = 1; i < lap.spectrum.size(); ++i)
            direct += mode_h2_contribution(Complex(-lap.spectrum[i], 0.0), alpha);
        CHECK(h2_consensus(lap, alpha).value == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("consensus scaling law and permutation invariance") {
    std::mt19937_64 rng(41);
    WeightedGraph g;
    g.n = 5;
    std::uniform_real_distribution<double> weight(0.2, 3.0);
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j)
            if ((rng() % 3) != 0) g.edges.push_back({i, j, weight(rng)});
    g.edges.push_back({0, 4, weight(rng)});
    WeightedGraph scaled = g;
    const double sigma = 2.7;
    for (auto& e : scaled.edges) e.weight *= sigma;
    WeightedGraph permuted = g;
    const int perm[5] = {3, 0, 4, 2, 1};
    for (auto& e : permuted.edges) {
        e.i = perm[e.i];
        e.j = perm[e.j];
    }
    for (double alpha : {0.7, 1.0, 1.4}) {
        const double beta = 2.0 - 1.0 / alpha;
        const double base = h2_consensus(laplacian(g), alpha).value;
        CHECK(h2_consensus(laplacian(scaled), alpha).value ==
              doctest::Approx(std::pow(sigma, -beta) * base).epsilon(1e-10));
        CHECK(h2_consensus(laplacian(permuted), alpha).value ==
              doctest::Approx(base).epsilon(1e-10));
    }
}

TEST_CASE("quadrature handles the classical scalar case") {
    FractionalSystem scalar = FractionalSystem::pseudo_states(-Matrix::Identity(1, 1), 1.0);
    const H2Report rep = h2_quadrature(scalar);
    CHECK(std::abs(rep.value - 0.5) < 1e-6);
    CHECK(rep.abs_error_estimate < 1e-5);
    CHECK(rep.method == H2Method::Quadrature);
}

TEST_CASE("oracle agreement across the order range") {
    Matrix rot(2, 2);
    rot << -0.8, 0.5, -0.5, -0.8;  // normal with a complex pair
    FractionalSystem sys = FractionalSystem::pseudo_states(rot, 1.0);
    for (double alpha : {0.6, 0.75, 0.9, 1.1, 1.25, 1.5}) {
        sys.alpha = alpha;
        const double closed = h2_normal(sys).value;
        const double quad = h2_quadrature(sys).value;
        CHECK(std::abs(closed - quad) / quad < 1e-4);
    }
}

TEST_CASE("quadrature agrees with the cyclic closed form off order one") {
    const CyclicSpec spec = uniform(3, 1.0, 0.5, 0.75);
    const double closed = h2_cyclic(spec).value;
    const double quad = h2_quadrature(compile_cyclic(spec)).value;
    CHECK(std::abs(quad - closed) / closed < 1e-4);
}

TEST_CASE("quadrature rejects observably unstable systems") {
    FractionalSystem bad = FractionalSystem::pseudo_states(Matrix::Identity(1, 1), 1.0);
    CHECK_THROWS_AS(h2_quadrature(bad), AnalysisError);
    CHECK(h2_quadrature(FractionalSystem::pseudo_states(-Matrix::Identity(1, 1), 0.5)).infinite);
}

TEST_CASE("divergence toward both order limits") {
    FractionalSystem scalar = FractionalSystem::pseudo_states(-Matrix::Identity(1, 1), 1.0);
    const double at_one = h2_normal(scalar).value;
    double prev = at_one;
    for (double alpha : {0.8, 0.7, 0.6, 0.55, 0.52}) {
        scalar.alpha = alpha;
        const double v = h2_normal(scalar).value;
        CHECK(v > prev);
        prev = v;
    }
    prev = at_one;
    for (double alpha : {1.5, 1.7, 1.9, 1.97, 1.99}) {
        scalar.alpha = alpha;
        const double v = h2_normal(scalar).value;
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("adaptive quadrature building block") {
    const auto smooth = [](double x) { return std::exp(-x * x); };
    const QuadratureResult g = integrate_adaptive(smooth, 0.0, 10.0, 1e-10);
    CHECK(g.value == doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-10));
    CHECK(g.abs_error < 1e-8);

    // Integrable endpoint singularity.
    const auto spike = [](double x) { return 1.0 / std::sqrt(x); };
    const QuadratureResult s = integrate_adaptive(spike, 0.0, 1.0, 1e-8, 0.0, 20000);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-6));
}

}  // TEST_SUITE
