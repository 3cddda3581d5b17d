#include "fracnet/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fracnet {

double principal_arg(Complex z) {
    if (z.imag() == 0.0) return z.real() < 0.0 ? kPi : 0.0;
    double a = std::arg(z);
    if (a <= -kPi) a = kPi;  // fold the branch cut onto +pi
    return a;
}

FractionalSystem FractionalSystem::pseudo_states(Matrix state, double alpha) {
    FractionalSystem sys;
    const Index n = state.rows();
    sys.A = std::move(state);
    sys.B = Matrix::Identity(n, n);
    sys.C = Matrix::Identity(n, n);
    sys.alpha = alpha;
    return sys;
}

std::vector<std::string> validate_system(const FractionalSystem& sys) {
    std::vector<std::string> out;
    if (sys.A.rows() != sys.A.cols()) out.push_back("A: must be square");
    if (!sys.A.allFinite()) out.push_back("A: entries must be finite");
    if (sys.B.rows() != sys.A.rows()) out.push_back("B: row count must equal order of A");
    if (!sys.B.allFinite()) out.push_back("B: entries must be finite");
    if (sys.C.cols() != sys.A.rows()) out.push_back("C: column count must equal order of A");
    if (!sys.C.allFinite()) out.push_back("C: entries must be finite");
    if (!(sys.alpha > 0.0 && sys.alpha < 2.0)) out.push_back("alpha: out of (0,2)");
    return out;
}

namespace {

[[noreturn]] void throw_violations(const char* what, const std::vector<std::string>& violations) {
    std::ostringstream msg;
    msg << what << ":";
    for (const auto& v : violations) msg << " [" << v << "]";
    throw ValidationError(msg.str());
}

}  // namespace

void require_valid(const FractionalSystem& sys) {
    auto v = validate_system(sys);
    if (!v.empty()) throw_violations("invalid system", v);
}

std::vector<std::string> validate_cyclic(const CyclicSpec& spec) {
    std::vector<std::string> out;
    if (spec.n < 2) out.push_back("n: must be at least 2");
    if (spec.a.size() != spec.n) out.push_back("a: must have n entries");
    if (spec.c.size() != spec.n) out.push_back("c: must have n entries");
    if ((spec.a.array() <= 0.0).any() || !spec.a.allFinite())
        out.push_back("a: entries must be strictly positive");
    if ((spec.c.array() <= 0.0).any() || !spec.c.allFinite())
        out.push_back("c: entries must be strictly positive");
    if (!(spec.alpha > 0.0 && spec.alpha < 2.0)) out.push_back("alpha: out of (0,2)");
    return out;
}

void require_valid(const CyclicSpec& spec) {
    auto v = validate_cyclic(spec);
    if (!v.empty()) throw_violations("invalid cyclic spec", v);
}

FractionalSystem compile_cyclic(const CyclicSpec& spec) {
    require_valid(spec);
    const int n = spec.n;
    Matrix A = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) A(i, i) = -spec.a[i];
    for (int i = 0; i + 1 < n; ++i) A(i + 1, i) = spec.c[i];
    A(0, n - 1) = -spec.c[n - 1];
    return FractionalSystem::pseudo_states(std::move(A), spec.alpha);
}

bool uniform_rates(const CyclicSpec& spec, double rel_tol) {
    const double lo = spec.a.minCoeff();
    const double hi = spec.a.maxCoeff();
    return lo > 0.0 && (hi / lo - 1.0) <= rel_tol;
}

double geometric_mean(const Vector& v) {
    if (v.size() == 0) throw ValidationError("geometric mean of empty vector");
    return std::exp(v.array().log().mean());
}

double WeightedGraph::total_weight() const {
    double s = 0.0;
    for (const auto& e : edges) s += e.weight;
    return s;
}

std::vector<std::string> validate_graph(const WeightedGraph& g) {
    std::vector<std::string> out;
    if (g.n < 1) out.push_back("n: must be positive");
    std::vector<std::pair<int, int>> seen;
    seen.reserve(g.edges.size());
    for (const auto& e : g.edges) {
        if (e.i < 0 || e.j < 0 || e.i >= g.n || e.j >= g.n) {
            out.push_back("edges: node index out of range");
            continue;
        }
        if (e.i == e.j) out.push_back("edges: self-loops are not allowed");
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            out.push_back("edges: weights must be strictly positive");
        seen.emplace_back(std::min(e.i, e.j), std::max(e.i, e.j));
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        out.push_back("edges: duplicate node pair");
    return out;
}

void require_valid(const WeightedGraph& g) {
    auto v = validate_graph(g);
    if (!v.empty()) throw_violations("invalid graph", v);
}

double Spectrum::min_abs_arg() const {
    double m = kPi;
    for (double a : args) m = std::min(m, std::abs(a));
    return m;
}

Spectrum make_spectrum(std::vector<Complex> values) {
    std::sort(values.begin(), values.end(), [](Complex x, Complex y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    Spectrum sp;
    sp.args.reserve(values.size());
    for (Complex z : values) sp.args.push_back(principal_arg(z));
    sp.eigenvalues = std::move(values);
    return sp;
}

const char* to_string(StabilityKind kind) {
    switch (kind) {
        case StabilityKind::AsymptoticallyStable: return "asymptotically_stable";
        case StabilityKind::MarginallyStable: return "marginally_stable";
        case StabilityKind::Unstable: return "unstable";
    }
    return "unknown";
}

const char* to_string(H2Method method) {
    switch (method) {
        case H2Method::ClosedForm: return "closed_form";
        case H2Method::Quadrature: return "quadrature";
        case H2Method::TimeDomain: return "time_domain";
    }
    return "unknown";
}

}  // namespace fracnet
