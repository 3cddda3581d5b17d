#include "fracnet/cli.hpp"

#include "fracnet/ensemble.hpp"
#include "fracnet/io.hpp"
#include "fracnet/robustness.hpp"
#include "fracnet/simulation.hpp"
#include "fracnet/spectral.hpp"
#include "fracnet/stability.hpp"
#include "fracnet/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>

namespace fracnet::cli {

namespace {

using io::json;

#ifndef FRACNET_VERSION
#define FRACNET_VERSION "0.0.0"
#endif

Vector parse_double_list(const std::string& text, const char* what) {
    std::vector<double> values;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        try {
            values.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw ValidationError(std::string(what) + ": cannot parse '" + token + "'");
        }
    }
    if (values.empty()) throw ValidationError(std::string(what) + ": empty list");
    return Eigen::Map<const Vector>(values.data(), values.size());
}

void write_manifest(const std::string& command, const json& config,
                    const std::vector<std::string>& outputs, const std::string& path) {
    io::RunManifest manifest;
    manifest.command = command;
    manifest.config = config;
    manifest.tool_version = FRACNET_VERSION;
    manifest.timestamp = io::iso8601_now();
    manifest.outputs = outputs;
    if (config.contains("seed")) manifest.seed = config["seed"].get<std::uint64_t>();
    io::atomic_write(path, io::to_json(manifest).dump(2) + "\n");
}

void emit(const std::string& command, const json& config, const json& report,
          const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << report.dump(2) << '\n';
    } else {
        io::atomic_write(out_path, report.dump(2) + "\n");
        write_manifest(command, config, {out_path}, out_path + ".manifest.json");
    }
}

// Loads the system/cyclic/graph input named by the config; the parsed content
// is embedded back into the config so a manifest replays without the original
// input files.
struct ModelInput {
    std::optional<FractionalSystem> system;
    std::optional<CyclicSpec> cyclic;
    std::optional<WeightedGraph> graph;
};

ModelInput resolve_model(json& config) {
    ModelInput model;
    // Embedded copies (present when replaying a manifest) win over the file
    // paths, so a recorded run replays without the original inputs.
    int sources = 0;
    if (config.contains("system_file") && !config["system_file"].get<std::string>().empty()) {
        if (!config.contains("system"))
            config["system"] = io::load_json(config["system_file"].get<std::string>());
        ++sources;
    }
    if (config.contains("cyclic_file") && !config["cyclic_file"].get<std::string>().empty()) {
        if (!config.contains("cyclic"))
            config["cyclic"] = io::load_json(config["cyclic_file"].get<std::string>());
        ++sources;
    }
    if (config.contains("graph_file") && !config["graph_file"].get<std::string>().empty()) {
        if (!config.contains("graph")) {
            const WeightedGraph g = io::load_edge_list(config["graph_file"].get<std::string>());
            json edges = json::array();
            for (const auto& e : g.edges) edges.push_back(json::array({e.i, e.j, e.weight}));
            config["graph"] = json{{"n", g.n}, {"edges", edges}};
        }
        ++sources;
    }
    if (sources > 1) throw ValidationError("give exactly one of --system, --cyclic, --graph");

    if (config.contains("system")) model.system = io::system_from_json(config["system"]);
    if (config.contains("cyclic")) model.cyclic = io::cyclic_from_json(config["cyclic"]);
    if (config.contains("graph")) {
        WeightedGraph g;
        g.n = config["graph"].at("n").get<int>();
        for (const auto& e : config["graph"].at("edges"))
            g.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
        model.graph = g;
    }
    return model;
}

// --- subcommand bodies -------------------------------------------------------

void run_stability(json& config, std::ostream& out) {
    const ModelInput model = resolve_model(config);
    FractionalSystem sys;
    if (model.system) {
        sys = *model.system;
    } else if (model.cyclic) {
        sys = compile_cyclic(*model.cyclic);
    } else {
        throw ValidationError("stability: provide --system or --cyclic");
    }
    const StabilityVerdict verdict = matignon_verdict(sys);
    json report = io::to_json(verdict, sys.alpha);
    if (model.cyclic) report["secant"] = io::to_json(assess_cyclic(*model.cyclic));
    emit("stability", config, report, config.value("out", ""), out);
}

void run_secant(json& config, std::ostream& out) {
    const int n = config.at("n").get<int>();
    const double alpha = config.at("alpha").get<double>();
    json report;
    if (config.contains("a_list")) {
        CyclicSpec spec;
        spec.n = n;
        spec.alpha = alpha;
        spec.a = parse_double_list(config["a_list"].get<std::string>(), "--a-list");
        spec.c = parse_double_list(config["c_list"].get<std::string>(), "--c-list");
        const SecantAssessment assessment = assess_cyclic(spec);
        report = io::to_json(assessment);
        out << "bound = " << (std::isinf(assessment.bound) ? "inf" : io::format_double(assessment.bound))
            << "\nregime = " << to_string(assessment.regime)
            << "\ngamma = " << io::format_double(assessment.gamma)
            << "\nsufficient_pass = " << (assessment.sufficient_pass ? "true" : "false")
            << "\nnecessary_applicable = " << (assessment.necessary_applicable ? "true" : "false")
            << '\n';
    } else {
        if (config.contains("c_list"))
            throw ValidationError("secant: --c-list requires --a-list");
        const double bound = secant_bound(n, alpha);
        report = json{{"n", n},
                      {"alpha", alpha},
                      {"bound", std::isinf(bound) ? json("inf") : json(bound)},
                      {"regime", to_string(alpha <= 2.0 / n ? SecantRegime::AlwaysStable
                                                            : SecantRegime::Conditional)}};
        out << "bound = " << (std::isinf(bound) ? "inf" : io::format_double(bound))
            << "\nregime = " << report["regime"].get<std::string>() << '\n';
    }
    const std::string out_path = config.value("out", "");
    if (!out_path.empty()) emit("secant", config, report, out_path, out);
}

void run_curve(json& config, std::ostream& out) {
    const auto sizes = config.at("n").get<std::vector<int>>();
    const auto grid = linspace(config.at("alpha_min").get<double>(),
                               config.at("alpha_max").get<double>(),
                               config.at("steps").get<int>());
    std::vector<std::pair<int, std::vector<BoundCurvePoint>>> curves;
    for (int n : sizes) curves.emplace_back(n, bound_curve(n, grid));

    const std::string out_path = config.value("out", "");
    std::vector<std::string> outputs;
    const std::string csv = io::curve_csv(curves);
    if (out_path.empty()) {
        out << csv;
    } else {
        io::atomic_write(out_path, csv);
        outputs.push_back(out_path);
    }
    if (const std::string svg = config.value("svg", ""); !svg.empty()) {
        io::atomic_write(svg, io::curve_svg(curves));
        outputs.push_back(svg);
    }
    if (!outputs.empty())
        write_manifest("curve", config, outputs, outputs.front() + ".manifest.json");
}

json h2_report_for(const ModelInput& model, double alpha, const std::string& method) {
    json out;
    const bool closed = method == "closed" || method == "both";
    const bool quad = method == "quadrature" || method == "both";
    if (model.system) {
        if (closed) out["closed"] = io::to_json(h2_normal(*model.system));
        if (quad) out["quadrature"] = io::to_json(h2_quadrature(*model.system));
    } else if (model.cyclic) {
        if (closed) out["closed"] = io::to_json(h2_cyclic(*model.cyclic));
        if (quad) out["quadrature"] = io::to_json(h2_quadrature(compile_cyclic(*model.cyclic)));
    } else if (model.graph) {
        const Laplacian lap = laplacian(*model.graph);
        if (closed) out["closed"] = io::to_json(h2_consensus(lap, alpha));
        if (quad) out["quadrature"] = io::to_json(h2_consensus_quadrature(lap, alpha));
    } else {
        throw ValidationError("h2: provide --system, --cyclic or --graph");
    }
    return out;
}

void run_h2(json& config, std::ostream& out) {
    const ModelInput model = resolve_model(config);
    const std::string method = config.value("method", "closed");
    if (method != "closed" && method != "quadrature" && method != "both")
        throw ValidationError("h2: --method must be closed, quadrature or both");
    double alpha = config.value("alpha", 0.0);
    if (model.graph && !(alpha > 0.0)) throw ValidationError("h2: --alpha required with --graph");
    json report = h2_report_for(model, alpha, method);
    for (const char* key : {"closed", "quadrature"}) {
        if (report.contains(key)) {
            const json& r = report[key];
            out << key << ": value=" << r["value"].dump()
                << " abs_error=" << r["abs_error_estimate"].dump() << '\n';
        }
    }
    const std::string out_path = config.value("out", "");
    if (!out_path.empty()) emit("h2", config, report, out_path, out);
}

void run_consensus(json& config, std::ostream& out) {
    const ModelInput model = resolve_model(config);
    if (!model.graph) throw ValidationError("consensus: provide --graph");
    const double alpha = config.at("alpha").get<double>();
    const Laplacian lap = laplacian(*model.graph);

    json report;
    report["h2"] = io::to_json(h2_consensus(lap, alpha));
    report["fiedler"] = lap.fiedler_value();
    if (config.contains("zeta")) {
        const double q = config["zeta"].get<double>();
        report["spectral_zeta"] = json{{"q", q}, {"value", spectral_zeta(lap, q)}};
    }
    if (config.contains("x0")) {
        const Vector x0 = parse_double_list(config["x0"].get<std::string>(), "--x0");
        const double T = config.value("T", 100.0);
        const double h = config.value("h", 0.0);
        const ConsensusLimit limit = consensus_limit(lap, x0, alpha, T, h);
        report["limit"] = json{{"estimate", std::vector<double>(limit.limit_estimate.data(),
                                                                limit.limit_estimate.data() +
                                                                    limit.limit_estimate.size())},
                               {"consensus_residual", limit.consensus_residual},
                               {"converged", limit.converged},
                               {"measured_prefactor", limit.measured_prefactor},
                               {"dev_vs_mean_x0", limit.dev_plain},
                               {"dev_vs_mean_x0_over_alpha", limit.dev_scaled}};
    }
    emit("consensus", config, report, config.value("out", ""), out);
}

void run_simulate(json& config, std::ostream& out) {
    const ModelInput model = resolve_model(config);
    FractionalSystem sys;
    if (model.system) {
        sys = *model.system;
    } else if (model.cyclic) {
        sys = compile_cyclic(*model.cyclic);
    } else if (model.graph) {
        const double alpha = config.at("alpha").get<double>();
        sys = FractionalSystem::pseudo_states(-laplacian(*model.graph).matrix, alpha);
    } else {
        throw ValidationError("simulate: provide --system, --cyclic or --graph");
    }
    const Vector x0 = parse_double_list(config.at("x0").get<std::string>(), "--x0");
    GlOptions opt;
    if (config.contains("window")) opt.memory_window = config["window"].get<int>();
    const Trajectory traj = gl_integrate(sys, x0, nullptr, config.at("h").get<double>(),
                                         config.at("T").get<double>(), opt);
    if (traj.diverged)
        out << "diverged at t=" << io::format_double(traj.first_exceedance_time) << '\n';
    const std::string out_path = config.at("out").get<std::string>();
    io::atomic_write(out_path, io::trajectory_csv(traj));
    write_manifest("simulate", config, {out_path}, out_path + ".manifest.json");
    out << "wrote " << out_path << " (" << traj.times.size() << " samples)\n";
}

void run_ensemble(json& config, std::ostream& out) {
    const EnsembleConfig cfg = io::ensemble_config_from_json(config);
    const auto specs = generate_ensemble(cfg);
    const PoleCloud cloud = pole_cloud(specs);
    std::vector<StabilityVerdict> verdicts(specs.size());
    for (size_t s = 0; s < specs.size(); ++s)
        verdicts[s] = matignon_verdict(compile_cyclic(specs[s]));

    std::vector<std::string> outputs;
    const std::string poles_path = config.at("out_poles").get<std::string>();
    io::atomic_write(poles_path, io::poles_csv(cloud));
    outputs.push_back(poles_path);
    if (const std::string verdicts_path = config.value("out_verdicts", ""); !verdicts_path.empty()) {
        io::atomic_write(verdicts_path, io::verdicts_csv(verdicts));
        outputs.push_back(verdicts_path);
    }
    if (const std::string svg = config.value("svg", ""); !svg.empty()) {
        io::atomic_write(svg, io::pole_cloud_svg(cloud, cfg.alpha));
        outputs.push_back(svg);
    }
    write_manifest("ensemble", config, outputs, poles_path + ".manifest.json");

    int stable = 0;
    for (const auto& v : verdicts) stable += v.kind == StabilityKind::AsymptoticallyStable;
    out << "generated " << specs.size() << " systems (" << stable << " asymptotically stable), "
        << cloud.poles.size() << " poles\n";
}

int run_verify(const json& config, std::ostream& out) {
    const auto results = verify::run_all();
    verify::print_table(out, results);
    if (const std::string out_path = config.value("out", ""); !out_path.empty()) {
        json report = json::array();
        for (const auto& r : results)
            report.push_back(json{{"id", r.id},
                                  {"name", r.name},
                                  {"pass", r.pass},
                                  {"detail", r.detail},
                                  {"seconds", r.seconds}});
        io::atomic_write(out_path, report.dump(2) + "\n");
    }
    return verify::all_passed(results) ? 0 : 1;
}

}  // namespace

void run_command(const std::string& command, const nlohmann::json& config_in, std::ostream& out) {
    json config = config_in.is_null() ? json::object() : config_in;
    if (command == "stability") return run_stability(config, out);
    if (command == "secant") return run_secant(config, out);
    if (command == "curve") return run_curve(config, out);
    if (command == "h2") return run_h2(config, out);
    if (command == "consensus") return run_consensus(config, out);
    if (command == "simulate") return run_simulate(config, out);
    if (command == "ensemble") return run_ensemble(config, out);
    if (command == "verify") {
        run_verify(config, out);
        return;
    }
    throw ValidationError("unknown command: " + command);
}

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"Stability and H2 robustness analysis of commensurate fractional-order networks"};
    app.set_version_flag("--version", FRACNET_VERSION);
    // long-form help only; several subcommands use an -h-like step option
    app.set_help_flag("--help", "Print help");
    std::string manifest_path;
    app.add_option("--manifest", manifest_path,
                   "Re-run a recorded analysis from its manifest file");
    app.require_subcommand(0, 1);

    // stability
    auto* stability_cmd = app.add_subcommand("stability", "Argument test on a system's spectrum");
    stability_cmd->set_help_flag("--help", "Print help");
    std::string system_file, cyclic_file, graph_file, out_path;
    stability_cmd->add_option("--system", system_file, "System JSON file");
    stability_cmd->add_option("--cyclic", cyclic_file, "Cyclic spec JSON file");
    stability_cmd->add_option("--out", out_path, "Write the verdict JSON here");

    // secant
    auto* secant_cmd = app.add_subcommand("secant", "Generalized secant stability bound");
    secant_cmd->set_help_flag("--help", "Print help");
    int secant_n = 0;
    double secant_alpha = 0.0;
    std::string a_list, c_list;
    secant_cmd->add_option("--n", secant_n, "Loop length")->required();
    secant_cmd->add_option("--alpha", secant_alpha, "Derivative order")->required();
    secant_cmd->add_option("--a-list", a_list, "Comma-separated self-decay rates");
    secant_cmd->add_option("--c-list", c_list, "Comma-separated coupling gains");
    secant_cmd->add_option("--out", out_path, "Write the assessment JSON here");

    // curve
    auto* curve_cmd = app.add_subcommand("curve", "Tabulate the stability bound over orders");
    curve_cmd->set_help_flag("--help", "Print help");
    std::vector<int> curve_n;
    double alpha_min = 0.05, alpha_max = 1.0;
    int steps = 40;
    std::string svg_path;
    curve_cmd->add_option("--n", curve_n, "Loop length (repeatable)")->required();
    curve_cmd->add_option("--alpha-min", alpha_min, "Grid start");
    curve_cmd->add_option("--alpha-max", alpha_max, "Grid end");
    curve_cmd->add_option("--steps", steps, "Grid size");
    curve_cmd->add_option("--out", out_path, "Write CSV here (default stdout)");
    curve_cmd->add_option("--svg", svg_path, "Also draw the curves as SVG");

    // h2
    auto* h2_cmd = app.add_subcommand("h2", "Squared H2 robustness of a stable network");
    h2_cmd->set_help_flag("--help", "Print help");
    double h2_alpha = 0.0;
    std::string method = "closed";
    h2_cmd->add_option("--system", system_file, "System JSON file");
    h2_cmd->add_option("--cyclic", cyclic_file, "Cyclic spec JSON file");
    h2_cmd->add_option("--graph", graph_file, "Edge-list file (consensus network)");
    h2_cmd->add_option("--alpha", h2_alpha, "Order (required with --graph)");
    h2_cmd->add_option("--method", method, "closed | quadrature | both");
    h2_cmd->add_option("--out", out_path, "Write the report JSON here");

    // consensus
    auto* consensus_cmd = app.add_subcommand("consensus", "Consensus-network analyses");
    consensus_cmd->set_help_flag("--help", "Print help");
    double consensus_alpha = 1.0, consensus_T = 100.0, consensus_h = 0.0, zeta_q = 0.0;
    std::string x0_list;
    consensus_cmd->add_option("--graph", graph_file, "Edge-list file")->required();
    consensus_cmd->add_option("--alpha", consensus_alpha, "Derivative order")->required();
    consensus_cmd->add_option("--zeta", zeta_q, "Also report the spectral zeta of this order");
    consensus_cmd->add_option("--x0", x0_list, "Initial state; runs the consensus-limit probe");
    consensus_cmd->add_option("--T", consensus_T, "Probe horizon");
    consensus_cmd->add_option("--h", consensus_h, "Probe step (0 = auto)");
    consensus_cmd->add_option("--out", out_path, "Write the report JSON here");

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "Time-domain fractional integration");
    simulate_cmd->set_help_flag("--help", "Print help");
    double sim_alpha = 0.0, sim_h = 1e-3, sim_T = 10.0;
    int window = 0;
    simulate_cmd->add_option("--system", system_file, "System JSON file");
    simulate_cmd->add_option("--cyclic", cyclic_file, "Cyclic spec JSON file");
    simulate_cmd->add_option("--graph", graph_file, "Edge-list file (simulates d^a x = -L x)");
    simulate_cmd->add_option("--alpha", sim_alpha, "Order (required with --graph)");
    simulate_cmd->add_option("--x0", x0_list, "Comma-separated initial state")->required();
    simulate_cmd->add_option("--h", sim_h, "Step size");
    simulate_cmd->add_option("--T", sim_T, "Horizon");
    simulate_cmd->add_option("--window", window, "Short-memory window (trades accuracy for speed)");
    simulate_cmd->add_option("--out", out_path, "Trajectory CSV path")->required();

    // ensemble
    auto* ensemble_cmd = app.add_subcommand("ensemble", "Constrained random cyclic networks");
    ensemble_cmd->set_help_flag("--help", "Print help");
    EnsembleConfig cfg;
    std::string out_poles, out_verdicts;
    ensemble_cmd->add_option("--count", cfg.count, "Number of systems");
    ensemble_cmd->add_option("--n", cfg.n, "Loop length");
    ensemble_cmd->add_option("--alpha", cfg.alpha, "Derivative order");
    ensemble_cmd->add_option("--gamma", cfg.gamma, "Target geometric-mean ratio");
    ensemble_cmd->add_option("--theta", cfg.theta, "Log-space bound");
    ensemble_cmd->add_option("--seed", cfg.seed, "RNG seed");
    ensemble_cmd->add_option("--out-poles", out_poles, "Pole CSV path")->required();
    ensemble_cmd->add_option("--out-verdicts", out_verdicts, "Verdict CSV path");
    ensemble_cmd->add_option("--svg", svg_path, "Pole-cloud figure path");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Run the full cross-validation battery");
    verify_cmd->set_help_flag("--help", "Print help");
    verify_cmd->add_option("--out", out_path, "Write the results JSON here");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!manifest_path.empty()) {
            const io::RunManifest manifest = io::manifest_from_json(io::load_json(manifest_path));
            run_command(manifest.command, manifest.config, std::cout);
            return 0;
        }
        if (stability_cmd->parsed()) {
            json config = json::object();
            if (!system_file.empty()) config["system_file"] = system_file;
            if (!cyclic_file.empty()) config["cyclic_file"] = cyclic_file;
            if (!out_path.empty()) config["out"] = out_path;
            run_command("stability", config, std::cout);
        } else if (secant_cmd->parsed()) {
            json config{{"n", secant_n}, {"alpha", secant_alpha}};
            if (!a_list.empty()) config["a_list"] = a_list;
            if (!c_list.empty()) config["c_list"] = c_list;
            if (!out_path.empty()) config["out"] = out_path;
            run_command("secant", config, std::cout);
        } else if (curve_cmd->parsed()) {
            json config{{"n", curve_n},
                        {"alpha_min", alpha_min},
                        {"alpha_max", alpha_max},
                        {"steps", steps}};
            if (!out_path.empty()) config["out"] = out_path;
            if (!svg_path.empty()) config["svg"] = svg_path;
            run_command("curve", config, std::cout);
        } else if (h2_cmd->parsed()) {
            json config{{"method", method}};
            if (!system_file.empty()) config["system_file"] = system_file;
            if (!cyclic_file.empty()) config["cyclic_file"] = cyclic_file;
            if (!graph_file.empty()) config["graph_file"] = graph_file;
            if (h2_alpha > 0.0) config["alpha"] = h2_alpha;
            if (!out_path.empty()) config["out"] = out_path;
            run_command("h2", config, std::cout);
        } else if (consensus_cmd->parsed()) {
            json config{{"alpha", consensus_alpha}, {"T", consensus_T}, {"h", consensus_h}};
            config["graph_file"] = graph_file;
            if (consensus_cmd->count("--zeta")) config["zeta"] = zeta_q;
            if (!x0_list.empty()) config["x0"] = x0_list;
            if (!out_path.empty()) config["out"] = out_path;
            run_command("consensus", config, std::cout);
        } else if (simulate_cmd->parsed()) {
            json config{{"x0", x0_list}, {"h", sim_h}, {"T", sim_T}, {"out", out_path}};
            if (!system_file.empty()) config["system_file"] = system_file;
            if (!cyclic_file.empty()) config["cyclic_file"] = cyclic_file;
            if (!graph_file.empty()) config["graph_file"] = graph_file;
            if (sim_alpha > 0.0) config["alpha"] = sim_alpha;
            if (window > 0) config["window"] = window;
            run_command("simulate", config, std::cout);
        } else if (ensemble_cmd->parsed()) {
            json config = io::to_json(cfg);
            config["out_poles"] = out_poles;
            if (!out_verdicts.empty()) config["out_verdicts"] = out_verdicts;
            if (!svg_path.empty()) config["svg"] = svg_path;
            run_command("ensemble", config, std::cout);
        } else if (verify_cmd->parsed()) {
            json config = json::object();
            if (!out_path.empty()) config["out"] = out_path;
            return run_verify(config, std::cout);
        } else {
            std::cout << app.help();
            return 2;
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int dispatch(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? argc - 1 : 0);
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args);
}

}  // namespace fracnet::cli
