#include "fracnet/ensemble.hpp"
#include "fracnet/stability.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fracnet;

namespace {

CyclicSpec uniform(int n, double a, double c, double alpha) {
    return {n, Vector::Constant(n, a), Vector::Constant(n, c), alpha};
}

}  // namespace

TEST_SUITE("stability") {

TEST_CASE("matignon basic verdicts") {
    FractionalSystem scalar = FractionalSystem::pseudo_states(-Matrix::Identity(1, 1), 1.0);
    StabilityVerdict v = matignon_verdict(scalar);
    CHECK(v.kind == StabilityKind::AsymptoticallyStable);
    CHECK(v.margin == doctest::Approx(kPi / 2));

    Matrix rotation(2, 2);
    rotation << 0.0, -1.0, 1.0, 0.0;
    v = matignon_verdict(FractionalSystem::pseudo_states(rotation, 0.5));
    CHECK(v.kind == StabilityKind::AsymptoticallyStable);
    CHECK(v.margin == doctest::Approx(kPi / 4));

    v = matignon_verdict(FractionalSystem::pseudo_states(Matrix::Identity(1, 1), 1.0));
    CHECK(v.kind == StabilityKind::Unstable);
}

TEST_CASE("marginal loop at the exact bound carries one critical pair") {
    const double alpha = 0.5;
    const double gamma = secant_bound(10, alpha);
    const FractionalSystem sys = compile_cyclic(uniform(10, 1.0, gamma, alpha));
    const StabilityVerdict v = matignon_verdict(sys);
    CHECK(v.kind == StabilityKind::MarginallyStable);

    const Spectrum sp = eigenvalues(sys.A);
    int critical = 0;
    for (double arg : sp.args) critical += std::abs(std::abs(arg) - alpha * kPi / 2) <= 1e-9;
    CHECK(critical == 2);
}

TEST_CASE("defective critical eigenvalue is ruled unstable") {
    // Jordan block on the imaginary axis at order 1: equal |arg| but the
    // geometric multiplicity is short.
    Matrix J(4, 4);
    J << 0.0, -1.0, 1.0, 0.0,
         1.0,  0.0, 0.0, 1.0,
         0.0,  0.0, 0.0, -1.0,
         0.0,  0.0, 1.0, 0.0;
    const StabilityVerdict v = matignon_verdict(FractionalSystem::pseudo_states(J, 1.0));
    CHECK(v.kind == StabilityKind::Unstable);

    // Simple +-j pair at order 1 is marginal.
    Matrix rotation(2, 2);
    rotation << 0.0, -1.0, 1.0, 0.0;
    CHECK(matignon_verdict(FractionalSystem::pseudo_states(rotation, 1.0)).kind ==
          StabilityKind::MarginallyStable);
}

TEST_CASE("consensus state matrix is marginally stable") {
    // -L of a connected graph: one simple zero eigenvalue on the wedge vertex.
    Matrix L(3, 3);
    L << 2, -1, -1, -1, 2, -1, -1, -1, 2;
    const StabilityVerdict v = matignon_verdict(FractionalSystem::pseudo_states(-L, 0.8));
    CHECK(v.kind == StabilityKind::MarginallyStable);
}

TEST_CASE("secant bound values") {
    CHECK(secant_bound(10, 0.5) ==
          doctest::Approx(std::sin(kPi / 4) / std::sin(3 * kPi / 20)).epsilon(1e-15));
    CHECK(std::abs(secant_bound(10, 0.5) - 1.55753651) < 1e-4);  // printed digits
    CHECK(std::isinf(secant_bound(10, 0.2)));  // boundary alpha = 2/n included
    CHECK(std::isinf(secant_bound(2, 1.0)));
    CHECK_THROWS_AS(secant_bound(1, 0.5), ValidationError);
    CHECK_THROWS_AS(secant_bound(5, 2.0), ValidationError);
}

TEST_CASE("order-one reduction recovers the classical secant criterion") {
    for (int n = 3; n <= 25; ++n)
        CHECK(std::abs(secant_bound(n, 1.0) - 1.0 / std::cos(kPi / n)) < 1e-12);
    CHECK(secant_bound(5, 1.0) == doctest::Approx(1.2360679774997896));
}

TEST_CASE("assess_cyclic on the two published configurations") {
    std::mt19937_64 rng(31);
    EnsembleConfig cfg;
    cfg.count = 1;
    cfg.n = 10;
    cfg.alpha = 0.5;
    cfg.theta = 2.0;
    cfg.gamma = 1.5575;
    cfg.seed = 5;
    SecantAssessment a = assess_cyclic(generate_ensemble(cfg).front());
    CHECK(a.regime == SecantRegime::Conditional);
    CHECK(a.gamma == doctest::Approx(1.5575).epsilon(1e-10));
    CHECK(a.sufficient_pass);
    CHECK(!a.necessary_applicable);

    cfg.gamma = 2.0;
    cfg.theta = 1.0;
    a = assess_cyclic(generate_ensemble(cfg).front());
    CHECK(!a.sufficient_pass);

    a = assess_cyclic(uniform(10, 1.0, 2.0, 0.5));
    CHECK(!a.sufficient_pass);
    CHECK(a.necessary_applicable);  // identical rates: conclusively unstable

    a = assess_cyclic(uniform(10, 1.0, 5.0, 0.1));
    CHECK(a.regime == SecantRegime::AlwaysStable);
    CHECK(a.sufficient_pass);
    CHECK(std::isinf(a.bound));
}

TEST_CASE("sufficiency: passing specs are verdicted stable") {
    EnsembleConfig cfg;
    cfg.count = 60;
    cfg.n = 10;
    cfg.alpha = 0.5;
    cfg.gamma = 1.5575;
    cfg.theta = 2.0;
    cfg.seed = 77;
    for (const auto& spec : generate_ensemble(cfg)) {
        REQUIRE(assess_cyclic(spec).sufficient_pass);
        CHECK(matignon_verdict(compile_cyclic(spec)).kind ==
              StabilityKind::AsymptoticallyStable);
    }
}

TEST_CASE("necessity in the uniform case") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 10);
        const double alpha = uniform_in(rng, 2.2 / n, 1.4);
        const double a = std::exp(uniform_in(rng, -1.0, 1.0));
        const double bound = secant_bound(n, alpha);
        const double above = bound * uniform_in(rng, 1.01, 1.5);
        const double below = bound * uniform_in(rng, 0.5, 0.99);
        CHECK(matignon_verdict(compile_cyclic(uniform(n, a, a * above, alpha))).kind ==
              StabilityKind::Unstable);
        CHECK(matignon_verdict(compile_cyclic(uniform(n, a, a * below, alpha))).kind ==
              StabilityKind::AsymptoticallyStable);
    }
}

TEST_CASE("bound curve marks the asymptote and shrinks with n") {
    const auto grid = linspace(0.1, 1.0, 19);
    const auto c5 = bound_curve(5, grid);
    const auto c10 = bound_curve(10, grid);
    const auto c20 = bound_curve(20, grid);
    for (size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] <= 0.4 + 1e-12) CHECK(std::isinf(c5[i].bound));
        if (grid[i] > 0.4 + 1e-12) {
            CHECK(c20[i].bound < c10[i].bound);
            CHECK(c10[i].bound < c5[i].bound);
        }
    }
    // Shared order 0.5: tighter bound for the longer loop.
    CHECK(secant_bound(20, 0.5) < secant_bound(10, 0.5));
    CHECK_THROWS_AS(bound_curve(5, std::vector<double>{0.0}), ValidationError);
}

TEST_CASE("bound decreases in order and blows up at the regime edge") {
    for (int n : {5, 10, 20}) {
        double prev = std::numeric_limits<double>::infinity();
        for (double alpha : linspace(2.0 / n + 0.01, 1.0, 25)) {
            const double b = secant_bound(n, alpha);
            CHECK(b < prev);
            prev = b;
        }
        CHECK(secant_bound(n, 2.0 / n + 1e-9) > 1e6);
    }
}

TEST_CASE("product of sine ratios is minimized at equal angles") {
    // The constrained minimum behind the sufficiency proof, probed at random
    // angle configurations: prod 1/sin(theta_i) >= (1/sin(mean))^n.
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 8);
        const double alpha = uniform_in(rng, 2.2 / n, 1.5);
        const double total = n * alpha * kPi / 2 - kPi;
        if (total <= 0.0) continue;
        // Random positive split of the fixed angle sum, kept inside (0, pi).
        Vector theta(n);
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += theta[i] = -std::log(uniform_unit(rng) + 1e-12);
        theta *= total / s;
        if ((theta.array() >= kPi).any()) continue;
        double log_prod = 0.0;
        for (int i = 0; i < n; ++i) log_prod += std::log(std::sin(theta[i]));
        CHECK(log_prod <= n * std::log(std::sin(total / n)) + 1e-9);
    }
}

}  // TEST_SUITE
