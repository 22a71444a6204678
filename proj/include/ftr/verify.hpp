#pragma once

#include <string>
#include <vector>

namespace ftr {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail; // first failure, or a short note
    double ms = 0;
};

// The verification checks behind `ftr verify` and the acceptance suite.
// `full` runs every acceptance criterion at its stated range; the core tier
// is a fast subset.
std::vector<CheckResult> run_suite(bool full);

} // namespace ftr
