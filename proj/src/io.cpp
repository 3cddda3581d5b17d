#include "fracnet/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fracnet::io {

namespace {

double finite_number(const json& j, const char* what) {
    if (!j.is_number()) throw ValidationError(std::string(what) + ": expected a number");
    return j.get<double>();
}

}  // namespace

json to_json(const Matrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.empty())
        throw ValidationError(std::string(what) + ": expected a non-empty array of rows");
    const size_t rows = j.size();
    const size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw ValidationError(std::string(what) + ": rows must be non-empty arrays");
    Matrix m(rows, cols);
    for (size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw ValidationError(std::string(what) + ": ragged rows");
        for (size_t c = 0; c < cols; ++c) m(r, c) = finite_number(j[r][c], what);
    }
    return m;
}

json to_json(const FractionalSystem& sys) {
    return json{{"A", to_json(sys.A)}, {"B", to_json(sys.B)}, {"C", to_json(sys.C)},
                {"alpha", sys.alpha}};
}

FractionalSystem system_from_json(const json& j) {
    if (!j.contains("A") || !j.contains("alpha"))
        throw ValidationError("system: fields A and alpha are required");
    FractionalSystem sys;
    sys.A = matrix_from_json(j.at("A"), "A");
    sys.alpha = finite_number(j.at("alpha"), "alpha");
    const Index n = sys.A.rows();
    sys.B = j.contains("B") ? matrix_from_json(j.at("B"), "B") : Matrix::Identity(n, n);
    sys.C = j.contains("C") ? matrix_from_json(j.at("C"), "C") : Matrix::Identity(n, n);
    return sys;
}

json to_json(const CyclicSpec& spec) {
    return json{{"n", spec.n},
                {"a", std::vector<double>(spec.a.data(), spec.a.data() + spec.a.size())},
                {"c", std::vector<double>(spec.c.data(), spec.c.data() + spec.c.size())},
                {"alpha", spec.alpha}};
}

CyclicSpec cyclic_from_json(const json& j) {
    for (const char* key : {"n", "a", "c", "alpha"})
        if (!j.contains(key)) throw ValidationError(std::string("cyclic: field ") + key + " is required");
    CyclicSpec spec;
    spec.n = j.at("n").get<int>();
    const auto a = j.at("a").get<std::vector<double>>();
    const auto c = j.at("c").get<std::vector<double>>();
    spec.a = Eigen::Map<const Vector>(a.data(), a.size());
    spec.c = Eigen::Map<const Vector>(c.data(), c.size());
    spec.alpha = finite_number(j.at("alpha"), "alpha");
    return spec;
}

json to_json(const StabilityVerdict& verdict, double alpha) {
    json out{{"kind", to_string(verdict.kind)}, {"margin", verdict.margin}, {"alpha", alpha}};
    if (verdict.witness)
        out["witness"] = json{{"re", verdict.witness->real()}, {"im", verdict.witness->imag()}};
    return out;
}

json to_json(const SecantAssessment& assessment) {
    json out{{"a_geo", assessment.a_geo},
             {"c_geo", assessment.c_geo},
             {"gamma", assessment.gamma},
             {"regime", to_string(assessment.regime)},
             {"sufficient_pass", assessment.sufficient_pass},
             {"necessary_applicable", assessment.necessary_applicable}};
    if (std::isinf(assessment.bound))
        out["bound"] = "inf";
    else
        out["bound"] = assessment.bound;
    return out;
}

json to_json(const H2Report& report) {
    json out{{"method", to_string(report.method)},
             {"infinite", report.infinite},
             {"abs_error_estimate", report.infinite ? json("inf") : json(report.abs_error_estimate)}};
    out["value"] = report.infinite ? json("inf") : json(report.value);
    if (report.per_mode) {
        json modes = json::array();
        for (const auto& m : *report.per_mode) {
            modes.push_back(json{{"re", m.eigenvalue.real()},
                                 {"im", m.eigenvalue.imag()},
                                 {"arg_term", m.arg_term},
                                 {"contribution", m.contribution}});
        }
        out["per_mode"] = std::move(modes);
    }
    return out;
}

json to_json(const EnsembleConfig& cfg) {
    return json{{"count", cfg.count}, {"n", cfg.n},         {"alpha", cfg.alpha},
                {"gamma", cfg.gamma}, {"theta", cfg.theta}, {"seed", cfg.seed}};
}

EnsembleConfig ensemble_config_from_json(const json& j) {
    EnsembleConfig cfg;
    cfg.count = j.value("count", cfg.count);
    cfg.n = j.value("n", cfg.n);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.gamma = j.value("gamma", cfg.gamma);
    cfg.theta = j.value("theta", cfg.theta);
    cfg.seed = j.value("seed", cfg.seed);
    return cfg;
}

WeightedGraph parse_edge_list(std::istream& in) {
    WeightedGraph g;
    std::string line;
    int max_node = -1;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        int i, j;
        double w;
        if (!(fields >> i)) continue;  // blank or comment-only line
        if (!(fields >> j >> w)) {
            throw ValidationError("edge list line " + std::to_string(lineno) +
                                  ": expected 'i j weight'");
        }
        g.edges.push_back({i, j, w});
        max_node = std::max({max_node, i, j});
    }
    g.n = max_node + 1;
    require_valid(g);
    return g;
}

WeightedGraph load_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open graph file: " + path.string());
    return parse_edge_list(in);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json load_json(const std::filesystem::path& path) {
    return json::parse(read_file(path));
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("short write: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string curve_csv(const std::vector<std::pair<int, std::vector<BoundCurvePoint>>>& curves) {
    std::string out = "alpha,bound,n\n";
    for (const auto& [n, points] : curves) {
        for (const auto& p : points) {
            out += format_double(p.alpha);
            out += ',';
            out += format_double(p.bound);
            out += ',';
            out += std::to_string(n);
            out += '\n';
        }
    }
    return out;
}

std::string poles_csv(const PoleCloud& cloud) {
    std::string out = "system_id,k,re,im,arg_margin\n";
    for (const auto& p : cloud.poles) {
        out += std::to_string(p.system_id);
        out += ',';
        out += std::to_string(p.k);
        out += ',';
        out += format_double(p.pole.real());
        out += ',';
        out += format_double(p.pole.imag());
        out += ',';
        out += format_double(p.arg_margin);
        out += '\n';
    }
    return out;
}

std::string verdicts_csv(const std::vector<StabilityVerdict>& verdicts) {
    std::string out = "system_id,kind,margin,witness_re,witness_im\n";
    for (size_t s = 0; s < verdicts.size(); ++s) {
        const auto& v = verdicts[s];
        out += std::to_string(s);
        out += ',';
        out += to_string(v.kind);
        out += ',';
        out += format_double(v.margin);
        out += ',';
        out += format_double(v.witness ? v.witness->real() : 0.0);
        out += ',';
        out += format_double(v.witness ? v.witness->imag() : 0.0);
        out += '\n';
    }
    return out;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t";
    for (Index i = 0; i < traj.states.cols(); ++i) out += ",x_" + std::to_string(i + 1);
    out += '\n';
    for (size_t k = 0; k < traj.times.size(); ++k) {
        out += format_double(traj.times[k]);
        for (Index i = 0; i < traj.states.cols(); ++i) {
            out += ',';
            out += format_double(traj.states(static_cast<Index>(k), i));
        }
        out += '\n';
    }
    return out;
}

namespace {

struct SvgFrame {
    double xmin, xmax, ymin, ymax;
    static constexpr int width = 720;
    static constexpr int height = 560;
    static constexpr int pad = 46;

    double px(double x) const { return pad + (x - xmin) / (xmax - xmin) * (width - 2 * pad); }
    double py(double y) const { return height - pad - (y - ymin) / (ymax - ymin) * (height - 2 * pad); }
};

void svg_open(std::string& svg) {
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"560\" "
           "viewBox=\"0 0 720 560\">\n<rect width=\"720\" height=\"560\" fill=\"white\"/>\n";
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

std::string pole_cloud_svg(const PoleCloud& cloud, double alpha) {
    SvgFrame fr{-1.0, 1.0, -1.0, 1.0};
    for (const auto& p : cloud.poles) {
        fr.xmin = std::min(fr.xmin, p.pole.real());
        fr.xmax = std::max(fr.xmax, p.pole.real());
        fr.ymin = std::min(fr.ymin, p.pole.imag());
        fr.ymax = std::max(fr.ymax, p.pole.imag());
    }
    const double mx = 0.08 * (fr.xmax - fr.xmin), my = 0.08 * (fr.ymax - fr.ymin);
    fr.xmin -= mx; fr.xmax += mx; fr.ymin -= my; fr.ymax += my;

    std::string svg;
    svg_open(svg);

    // Shaded instability wedge |arg| < alpha*pi/2 and its boundary rays.
    const double half = alpha * kPi / 2.0;
    const double reach = 4.0 * std::max({std::abs(fr.xmin), std::abs(fr.xmax),
                                         std::abs(fr.ymin), std::abs(fr.ymax), 1.0});
    const double rx = reach * std::cos(half), ry = reach * std::sin(half);
    svg += "<path d=\"M " + fmt(fr.px(0)) + " " + fmt(fr.py(0)) + " L " + fmt(fr.px(rx)) + " " +
           fmt(fr.py(ry)) + " L " + fmt(fr.px(reach)) + " " + fmt(fr.py(ry)) + " L " +
           fmt(fr.px(reach)) + " " + fmt(fr.py(-ry)) + " L " + fmt(fr.px(rx)) + " " +
           fmt(fr.py(-ry)) + " Z\" fill=\"#d9d9d9\" stroke=\"none\"/>\n";
    for (double sign : {1.0, -1.0}) {
        svg += "<line x1=\"" + fmt(fr.px(0)) + "\" y1=\"" + fmt(fr.py(0)) + "\" x2=\"" +
               fmt(fr.px(rx)) + "\" y2=\"" + fmt(fr.py(sign * ry)) +
               "\" stroke=\"red\" stroke-width=\"1.2\"/>\n";
    }
    // Axes.
    svg += "<line x1=\"" + fmt(fr.px(fr.xmin)) + "\" y1=\"" + fmt(fr.py(0)) + "\" x2=\"" +
           fmt(fr.px(fr.xmax)) + "\" y2=\"" + fmt(fr.py(0)) + "\" stroke=\"#888\"/>\n";
    svg += "<line x1=\"" + fmt(fr.px(0)) + "\" y1=\"" + fmt(fr.py(fr.ymin)) + "\" x2=\"" +
           fmt(fr.px(0)) + "\" y2=\"" + fmt(fr.py(fr.ymax)) + "\" stroke=\"#888\"/>\n";
    for (const auto& p : cloud.poles) {
        svg += "<circle cx=\"" + fmt(fr.px(p.pole.real())) + "\" cy=\"" +
               fmt(fr.py(p.pole.imag())) + "\" r=\"1.4\" fill=\"black\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string curve_svg(const std::vector<std::pair<int, std::vector<BoundCurvePoint>>>& curves) {
    SvgFrame fr{0.0, 1.0, 0.0, 1.0};
    for (const auto& [n, points] : curves) {
        for (const auto& p : points) {
            fr.xmax = std::max(fr.xmax, p.alpha);
            if (std::isfinite(p.bound)) fr.ymax = std::max(fr.ymax, std::min(p.bound, 50.0));
        }
    }
    fr.ymax *= 1.05;

    static constexpr const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};
    std::string svg;
    svg_open(svg);
    svg += "<line x1=\"" + fmt(fr.px(fr.xmin)) + "\" y1=\"" + fmt(fr.py(0)) + "\" x2=\"" +
           fmt(fr.px(fr.xmax)) + "\" y2=\"" + fmt(fr.py(0)) + "\" stroke=\"#888\"/>\n";
    int color = 0;
    for (const auto& [n, points] : curves) {
        // Dashed asymptote at alpha = 2/n, then the finite branch.
        const double asym = 2.0 / n;
        svg += "<line x1=\"" + fmt(fr.px(asym)) + "\" y1=\"" + fmt(fr.py(fr.ymin)) + "\" x2=\"" +
               fmt(fr.px(asym)) + "\" y2=\"" + fmt(fr.py(fr.ymax)) +
               "\" stroke=\"red\" stroke-dasharray=\"6 4\"/>\n";
        std::string path;
        bool open = false;
        for (const auto& p : points) {
            if (!std::isfinite(p.bound) || p.bound > fr.ymax) {
                open = false;
                continue;
            }
            path += open ? " L " : " M ";
            path += fmt(fr.px(p.alpha)) + " " + fmt(fr.py(p.bound));
            open = true;
        }
        svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + kColors[color % 4] +
               "\" stroke-width=\"1.8\"/>\n";
        svg += "<text x=\"" + fmt(fr.px(fr.xmax) - 60) + "\" y=\"" +
               fmt(fr.py(fr.ymax) + 16.0 * (color + 1)) + "\" fill=\"" + kColors[color % 4] +
               "\" font-size=\"13\">n = " + std::to_string(n) + "</text>\n";
        ++color;
    }
    svg += "</svg>\n";
    return svg;
}

json to_json(const RunManifest& m) {
    json out{{"command", m.command},
             {"config", m.config},
             {"tool_version", m.tool_version},
             {"timestamp", m.timestamp},
             {"rng", kRngAlgorithm},
             {"outputs", m.outputs}};
    if (m.seed) out["seed"] = *m.seed;
    return out;
}

RunManifest manifest_from_json(const json& j) {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config");
    m.tool_version = j.value("tool_version", "");
    m.timestamp = j.value("timestamp", "");
    if (j.contains("seed")) m.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("outputs")) m.outputs = j.at("outputs").get<std::vector<std::string>>();
    return m;
}

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace fracnet::io
