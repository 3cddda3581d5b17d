// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include "fracnet/verify.hpp"

#include <iostream>

int main() {
    const auto results = fracnet::verify::run_all();
    fracnet::verify::print_table(std::cout, results);
    return fracnet::verify::all_passed(results) ? 0 : 1;
}
