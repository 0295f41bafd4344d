#pragma once

#include <cstdint>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace lcrw::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    std::vector<std::uint64_t> seeds = {1, 2, 3};  // stochastic criteria need 2 of 3
    std::uint64_t run_seed = 2718281828ull;
    int threads = 0;
    std::set<int> only;  // empty: run everything
};

// Runs the acceptance criteria, one pass/fail line per criterion on `log`.
// Every tolerance is pinned here, in code.
std::vector<CriterionResult> run_all(const Options& opt, std::ostream& log);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace lcrw::acceptance
