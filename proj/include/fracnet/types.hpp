#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;
using Index = Eigen::Index;

inline constexpr double kPi = std::numbers::pi;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// Malformed input: invariants of a domain type are violated.
struct ValidationError : Error {
    using Error::Error;
};
/// A numerical routine could not deliver its accuracy contract.
struct NumericalError : Error {
    using Error::Error;
};
/// The requested analysis is undefined for the given system.
struct AnalysisError : Error {
    using Error::Error;
};

/// Principal argument in (-pi, pi]. Negative reals map to +pi, zero to 0,
/// so conjugate eigenvalues get arguments of equal magnitude.
double principal_arg(Complex z);

// ---------------------------------------------------------------------------
// Pseudo state space with a single commensurate derivative order.
// ---------------------------------------------------------------------------
struct FractionalSystem {
    Matrix A;            // n x n state matrix
    Matrix B;            // n x m input matrix
    Matrix C;            // p x n output matrix
    double alpha = 1.0;  // derivative order, 0 < alpha < 2

    Index order() const { return A.rows(); }

    /// System with B = C = I, the form all closed-form results assume.
    static FractionalSystem pseudo_states(Matrix state, double alpha);
};

/// Empty result means every invariant holds; each entry names field and rule.
std::vector<std::string> validate_system(const FractionalSystem& sys);
void require_valid(const FractionalSystem& sys);

// ---------------------------------------------------------------------------
// Cyclic loop parameterization: n first-order cells with self-decay a_i,
// coupling gains c_i, and one inhibitory feedback edge closing the ring.
// ---------------------------------------------------------------------------
struct CyclicSpec {
    int n = 0;
    Vector a;  // self-decay rates, all > 0
    Vector c;  // coupling gains, all > 0
    double alpha = 1.0;
};

std::vector<std::string> validate_cyclic(const CyclicSpec& spec);
void require_valid(const CyclicSpec& spec);

/// State matrix with -a_i on the diagonal, c_i on the subdiagonal and -c_n in
/// the top-right corner; B = C = I.
FractionalSystem compile_cyclic(const CyclicSpec& spec);

/// True when max(a)/min(a) - 1 <= rel_tol (the regime where the secant
/// condition is also necessary).
bool uniform_rates(const CyclicSpec& spec, double rel_tol = 1e-9);

double geometric_mean(const Vector& v);

// ---------------------------------------------------------------------------
// Undirected weighted simple graph (consensus coupling topologies).
// ---------------------------------------------------------------------------
struct WeightedGraph {
    struct Edge {
        int i = 0;
        int j = 0;
        double weight = 0.0;
    };
    int n = 0;
    std::vector<Edge> edges;

    double total_weight() const;
};

std::vector<std::string> validate_graph(const WeightedGraph& g);
void require_valid(const WeightedGraph& g);

// ---------------------------------------------------------------------------
// Eigenvalue sets with argument metadata.
// ---------------------------------------------------------------------------
struct Spectrum {
    std::vector<Complex> eigenvalues;  // sorted by (re, im)
    std::vector<double> args;          // principal arguments, same order

    Index size() const { return static_cast<Index>(eigenvalues.size()); }
    double min_abs_arg() const;
};

/// Sorts by (re, im) and fills the argument table.
Spectrum make_spectrum(std::vector<Complex> values);

// ---------------------------------------------------------------------------
// Stability classification per the fractional argument test.
// ---------------------------------------------------------------------------
enum class StabilityKind { AsymptoticallyStable, MarginallyStable, Unstable };

const char* to_string(StabilityKind kind);

struct StabilityVerdict {
    StabilityKind kind = StabilityKind::Unstable;
    std::optional<Complex> witness;  // eigenvalue attaining the minimal |arg|
    double margin = 0.0;             // min over spectrum of |arg| - alpha*pi/2
};

// ---------------------------------------------------------------------------
// Squared H2 robustness reports.
// ---------------------------------------------------------------------------
enum class H2Method { ClosedForm, Quadrature, TimeDomain };

const char* to_string(H2Method method);

struct ModeContribution {
    Complex eigenvalue;         // eigenvalue of the state matrix
    double arg_term = 0.0;      // alpha*pi/2 - arg(-lambda)
    double contribution = 0.0;  // additive share of the squared H2 norm
};

struct H2Report {
    double value = 0.0;
    bool infinite = false;  // set whenever alpha <= 1/2 with observable response
    H2Method method = H2Method::ClosedForm;
    double abs_error_estimate = 0.0;
    std::optional<std::vector<ModeContribution>> per_mode;
};

}  // namespace fracnet
