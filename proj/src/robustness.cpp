#include "fracnet/robustness.hpp"

#include "fracnet/quadrature.hpp"
#include "fracnet/stability.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Width of the removable singularity at alpha = 1 where the generic closed
// form degenerates to 0/0 and the analytic limit takes over.
constexpr double kAlphaOneSwitch = 1e-6;

H2Report infinite_report(H2Method method) {
    H2Report rep;
    rep.infinite = true;
    rep.value = kInf;
    rep.method = method;
    rep.abs_error_estimate = kInf;
    return rep;
}

// sin(c1 * (pi - t)) / sin(t) for t in (0, pi]; t == pi is the removable case.
double half_line_term(double theta, double c1) {
    double t = std::abs(theta);
    if (t > kPi) t = 2.0 * kPi - t;  // fold by evenness of cos into (0, pi]
    const double gap = kPi - t;
    if (t <= 1e-9)
        throw AnalysisError("mode_h2_contribution: eigenvalue on the integration ray");
    if (std::abs(gap) < 1e-8) return c1;  // limit of sin(c1*gap)/sin(gap)
    return std::sin(c1 * gap) / std::sin(t);
}

void require_identity(const Matrix& M, const char* name) {
    if (M.rows() != M.cols() || !M.isApprox(Matrix::Identity(M.rows(), M.cols()), 1e-12))
        throw AnalysisError(std::string("h2_normal: ") + name + " must be the identity");
}

double alpha1_mode(Complex lambda) {
    const double re = (-lambda).real();
    if (!(re > 0.0)) throw AnalysisError("mode_h2_contribution: mode not strictly stable at order 1");
    return 0.5 / re;
}

std::vector<ModeContribution> closed_form_modes(const std::vector<Complex>& lambdas,
                                                double alpha) {
    std::vector<ModeContribution> modes;
    modes.reserve(lambdas.size());
    for (Complex lambda : lambdas) {
        ModeContribution m;
        m.eigenvalue = lambda;
        m.arg_term = alpha * kPi / 2.0 - principal_arg(-lambda);
        m.contribution = mode_h2_contribution(lambda, alpha);
        modes.push_back(m);
    }
    return modes;
}

H2Report report_from_modes(std::vector<ModeContribution> modes) {
    H2Report rep;
    rep.method = H2Method::ClosedForm;
    double sum = 0.0, abs_sum = 0.0;
    for (const auto& m : modes) {
        sum += m.contribution;
        abs_sum += std::abs(m.contribution);
    }
    rep.value = sum;
    rep.abs_error_estimate = 16.0 * std::numeric_limits<double>::epsilon() * abs_sum;
    rep.per_mode = std::move(modes);
    return rep;
}

}  // namespace

bool is_normal(const Matrix& A, double rel_tol) {
    if (A.rows() != A.cols()) return false;
    const double scale = A.squaredNorm();
    if (scale == 0.0) return true;
    return (A.transpose() * A - A * A.transpose()).norm() <= rel_tol * scale;
}

double mode_h2_contribution(Complex lambda, double alpha) {
    if (!(alpha > 0.5 && alpha < 2.0))
        throw AnalysisError("mode_h2_contribution: order outside (1/2, 2)");
    if (std::abs(lambda) == 0.0)
        throw AnalysisError("mode_h2_contribution: zero eigenvalue has no finite contribution");
    if (std::abs(alpha - 1.0) < kAlphaOneSwitch) return alpha1_mode(lambda);

    const double psi = principal_arg(lambda);
    const double half = alpha * kPi / 2.0;
    const double c1 = 1.0 - 1.0 / alpha;
    const double sum = half_line_term(half - psi, c1) + half_line_term(half + psi, c1);
    const double scale = std::pow(std::abs(lambda), 1.0 / alpha - 2.0);
    return sum * scale / (2.0 * alpha * std::sin(kPi / alpha));
}

H2Report h2_normal(const FractionalSystem& sys) {
    require_valid(sys);
    require_identity(sys.B, "B");
    require_identity(sys.C, "C");
    if (!is_normal(sys.A)) throw AnalysisError("h2_normal: state matrix is not normal");
    if (sys.alpha <= 0.5) return infinite_report(H2Method::ClosedForm);
    const StabilityVerdict verdict = matignon_verdict(sys);
    if (verdict.kind != StabilityKind::AsymptoticallyStable)
        throw AnalysisError("h2_normal: system is not asymptotically stable");
    return report_from_modes(closed_form_modes(eigenvalues(sys.A).eigenvalues, sys.alpha));
}

double cyclic_alpha1_value(int n, double a, double c) {
    if (n < 2) throw ValidationError("cyclic_alpha1_value: n must be at least 2");
    if (!(a > 0.0) || !(c > 0.0))
        throw ValidationError("cyclic_alpha1_value: rates must be strictly positive");
    const double ratio = a / c;
    if (std::abs(ratio - 1.0) <= 1e-12) return n * static_cast<double>(n) / (4.0 * c);
    if (ratio < 1.0) {
        const double beta = std::acos(ratio) * n;
        return n * std::tan(beta / 2.0) / (2.0 * c * std::sin(beta / n));
    }
    const double beta = std::acosh(ratio) * n;
    return n * std::tanh(beta / 2.0) / (2.0 * c * std::sinh(beta / n));
}

H2Report h2_cyclic(const CyclicSpec& spec) {
    require_valid(spec);
    const auto uniform = [](const Vector& v) {
        return v.minCoeff() > 0.0 && (v.maxCoeff() / v.minCoeff() - 1.0) <= 1e-9;
    };
    if (!uniform(spec.a) || !uniform(spec.c))
        throw AnalysisError(
            "h2_cyclic: spec is not uniform; compile it and check h2_normal applicability");
    const SecantAssessment assess = assess_cyclic(spec);
    if (!assess.sufficient_pass)
        throw AnalysisError("h2_cyclic: loop fails the secant condition (not stable)");
    if (spec.alpha <= 0.5) return infinite_report(H2Method::ClosedForm);

    const double a = assess.a_geo;
    const double c = assess.c_geo;
    const Spectrum poles = uniform_cyclic_poles(spec.n, a, c);
    H2Report rep = report_from_modes(closed_form_modes(poles.eigenvalues, spec.alpha));
    if (std::abs(spec.alpha - 1.0) < kAlphaOneSwitch) {
        rep.value = cyclic_alpha1_value(spec.n, a, c);
    }
    return rep;
}

H2Report h2_consensus(const Laplacian& lap, double alpha) {
    if (!lap.connected) throw AnalysisError("h2_consensus: graph is disconnected");
    if (!(alpha > 0.0 && alpha < 2.0)) throw ValidationError("h2_consensus: alpha out of (0,2)");
    if (alpha <= 0.5) return infinite_report(H2Method::ClosedForm);

    const double beta = 2.0 - 1.0 / alpha;
    const bool at_one = std::abs(alpha - 1.0) < kAlphaOneSwitch;
    const double prefactor =
        at_one ? 0.5
               : std::abs(1.0 / (std::tan(alpha * kPi / 2.0) * alpha * std::sin(kPi / alpha)));
    std::vector<ModeContribution> modes;
    modes.reserve(lap.spectrum.size() > 0 ? lap.spectrum.size() - 1 : 0);
    for (Index i = 1; i < lap.spectrum.size(); ++i) {
        const double li = lap.spectrum[i];
        ModeContribution m;
        m.eigenvalue = Complex(-li, 0.0);  // eigenvalue of the state matrix -L
        m.arg_term = alpha * kPi / 2.0;
        m.contribution = at_one ? 0.5 / li : prefactor * std::pow(li, -beta);
        modes.push_back(m);
    }
    return report_from_modes(std::move(modes));
}

namespace {

// tr[G*(jw) G(jw)] with the resolvent solved afresh at every node.
class ResolventIntegrand {
public:
    ResolventIntegrand(const Matrix& A, const Matrix& B, const Matrix& C, double alpha)
        : A_(A.cast<Complex>()), B_(B.cast<Complex>()), C_(C), alpha_(alpha),
          phase_(std::polar(1.0, alpha * kPi / 2.0)) {}

    double operator()(double w) const {
        ComplexMatrix S = -A_;
        S.diagonal().array() += std::pow(w, alpha_) * phase_;
        ComplexMatrix G = C_.cast<Complex>() * Eigen::PartialPivLU<ComplexMatrix>(S).solve(B_);
        return G.squaredNorm();
    }

private:
    ComplexMatrix A_, B_;
    Matrix C_;
    double alpha_;
    Complex phase_;
};

void check_observable_stability(const FractionalSystem& sys) {
    const double half = sys.alpha * kPi / 2.0;
    const double scale = std::max(1.0, sys.A.norm());
    const EigenPairs pairs = eigen_pairs(sys.A);
    for (Index i = 0; i < pairs.values.size(); ++i) {
        const Complex lambda = pairs.values[i];
        const bool boundary_or_inside =
            std::abs(lambda) <= 1e-12 * scale ||
            std::abs(principal_arg(lambda)) <= half + kCriticalArgTol;
        if (!boundary_or_inside) continue;
        const double gain = (sys.C * pairs.vectors.col(i).real()).norm() +
                            (sys.C * pairs.vectors.col(i).imag()).norm();
        if (gain > 1e-8 * std::max(1.0, sys.C.norm()))
            throw AnalysisError("h2_quadrature: observable dynamics are not stable");
    }
}

}  // namespace

H2Report h2_quadrature(const FractionalSystem& sys, const H2QuadratureOptions& opt) {
    require_valid(sys);
    if (sys.alpha <= 0.5) return infinite_report(H2Method::Quadrature);  // divergent tail
    check_observable_stability(sys);

    const ResolventIntegrand f(sys.A, sys.B, sys.C, sys.alpha);
    const double alpha = sys.alpha;

    // Beyond omega0 the resolvent is dominated by (jw)^alpha and the integrand
    // decays like ||C B||_F^2 * w^(-2 alpha).
    const double omega0 = std::pow(10.0 * (1.0 + sys.A.norm()), 1.0 / alpha);
    double tail_coeff = 0.0;
    for (double w : {omega0, 2.0 * omega0, 4.0 * omega0})
        tail_coeff = std::max(tail_coeff, f(w) * std::pow(w, 2.0 * alpha));
    tail_coeff *= 2.0;

    QuadratureResult head =
        integrate_adaptive(f, 0.0, omega0, opt.rel_tol * 0.5, 0.0, opt.max_panels);

    // Extend the range until the closed-form tail bound is negligible.
    const double exponent = 2.0 * alpha - 1.0;
    const double target = opt.tail_fraction * std::max(head.value, 1e-300);
    double omega_end = std::pow(tail_coeff / (exponent * target), 1.0 / exponent);
    omega_end = std::clamp(omega_end, omega0 * 2.0, 1e250);
    QuadratureResult tail_part = integrate_adaptive(
        f, omega0, omega_end, opt.rel_tol * 0.5,
        opt.rel_tol * 0.1 * std::abs(head.value), opt.max_panels);
    const double tail_bound = tail_coeff * std::pow(omega_end, -exponent) / exponent;

    H2Report rep;
    rep.method = H2Method::Quadrature;
    rep.value = (head.value + tail_part.value) / kPi;  // even integrand, half line doubled
    rep.abs_error_estimate = (head.abs_error + tail_part.abs_error + tail_bound) / kPi;
    if (!std::isfinite(rep.value))
        throw NumericalError("h2_quadrature: resolvent singular within the integration range");
    return rep;
}

H2Report h2_consensus_quadrature(const Laplacian& lap, double alpha,
                                 const H2QuadratureOptions& opt) {
    if (!lap.connected) throw AnalysisError("h2_consensus_quadrature: graph is disconnected");
    const int n = lap.size();
    // M_n (s^a I + L)^{-1} == M_n (s^a I + L + J/n)^{-1}: the rank-one shift
    // moves the unobservable all-ones mode away from the origin and nothing
    // the output can see changes.
    Matrix A = -lap.matrix;
    A.array() -= 1.0 / n;
    FractionalSystem sys;
    sys.A = std::move(A);
    sys.B = Matrix::Identity(n, n);
    sys.C = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / n);
    sys.alpha = alpha;
    return h2_quadrature(sys, opt);
}

}  // namespace fracnet
