#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracnet::verify {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// Runs the full cross-validation battery: closed forms against quadrature,
/// time-domain, and eigenvalue-sum oracles, plus the ensemble reproductions.
std::vector<CheckResult> run_all();

bool all_passed(const std::vector<CheckResult>& results);
void print_table(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace fracnet::verify
