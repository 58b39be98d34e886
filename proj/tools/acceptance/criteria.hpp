#ifndef SOLVDIFF_ACCEPTANCE_CRITERIA_HPP
#define SOLVDIFF_ACCEPTANCE_CRITERIA_HPP

#include <functional>
#include <string>
#include <vector>

namespace solvdiff {
namespace accept {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail; // worst observed error vs. tolerance, etc.
};

using Reporter = std::function<void(const CheckResult&)>;

// The seven acceptance suites. Each runs every check of its criterion at the
// pinned tolerance and reports one line per check.
void criterion1_special_functions(const Reporter& report);
void criterion2_spectral(const Reporter& report);
void criterion3_fundamental(const Reporter& report);
void criterion4_boundary(const Reporter& report);
void criterion5_transform(const Reporter& report);
void criterion6_invariants(const Reporter& report);
void criterion7_mass_conservation(const Reporter& report);

// Runs all criteria (or the one selected by `only`, 1-7), printing one
// PASS/FAIL line per check to stdout. Returns the number of failures.
int run_acceptance(int only = 0);

} // namespace accept
} // namespace solvdiff

#endif
