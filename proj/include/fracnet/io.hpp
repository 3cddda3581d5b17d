#pragma once

#include "fracnet/ensemble.hpp"
#include "fracnet/simulation.hpp"
#include "fracnet/spectral.hpp"
#include "fracnet/stability.hpp"
#include "fracnet/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace fracnet::io {

using nlohmann::json;

// JSON schemas --------------------------------------------------------------

json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, const char* what);

json to_json(const FractionalSystem& sys);
/// Requires "A" and "alpha"; "B" and "C" default to the identity.
FractionalSystem system_from_json(const json& j);

json to_json(const CyclicSpec& spec);
CyclicSpec cyclic_from_json(const json& j);

json to_json(const StabilityVerdict& verdict, double alpha);
json to_json(const SecantAssessment& assessment);
json to_json(const H2Report& report);
json to_json(const EnsembleConfig& cfg);
EnsembleConfig ensemble_config_from_json(const json& j);

// Edge-list graphs: one "i j weight" triple per line, 0-based indices,
// '#' starts a comment. Node count is one past the largest index seen.
WeightedGraph parse_edge_list(std::istream& in);
WeightedGraph load_edge_list(const std::filesystem::path& path);

// Files ----------------------------------------------------------------------

std::string read_file(const std::filesystem::path& path);
json load_json(const std::filesystem::path& path);
/// Write-temp-then-rename so readers never observe a partial file.
void atomic_write(const std::filesystem::path& path, std::string_view content);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

// Tabular / figure emitters ---------------------------------------------------

std::string curve_csv(const std::vector<std::pair<int, std::vector<BoundCurvePoint>>>& curves);
std::string poles_csv(const PoleCloud& cloud);
std::string verdicts_csv(const std::vector<StabilityVerdict>& verdicts);
std::string trajectory_csv(const Trajectory& traj);

std::string pole_cloud_svg(const PoleCloud& cloud, double alpha);
std::string curve_svg(const std::vector<std::pair<int, std::vector<BoundCurvePoint>>>& curves);

// Run manifests ----------------------------------------------------------------

struct RunManifest {
    std::string command;
    json config;
    std::string tool_version;
    std::optional<std::uint64_t> seed;
    std::string timestamp;  // ISO-8601
    std::vector<std::string> outputs;
};

json to_json(const RunManifest& m);
RunManifest manifest_from_json(const json& j);
std::string iso8601_now();

}  // namespace fracnet::io
