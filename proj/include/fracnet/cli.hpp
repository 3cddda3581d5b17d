#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace fracnet::cli {

/// Runs a subcommand from a resolved configuration (the form stored in run
/// manifests). Outputs land in the paths named by the config.
void run_command(const std::string& command, const nlohmann::json& config, std::ostream& out);

/// Full command-line entry point. Returns 0 on success, 1 on analysis or
/// numerical errors, 2 on usage errors.
int dispatch(const std::vector<std::string>& args);
int dispatch(int argc, const char* const* argv);

}  // namespace fracnet::cli
