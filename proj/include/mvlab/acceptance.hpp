// The acceptance battery: one function per criterion, each returning a
// pass/fail line.  The CLI `suite` command and the acceptance test binary both
// run through here.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mvlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    std::string one_line() const;
};

struct AcceptanceConfig {
    unsigned workers = 2;
    std::string cache_dir;   // empty: no table cache
    std::string out_dir;     // empty: no report artifacts
    double tau_D = 2.1;
    std::uint64_t seed = 20200617; // battery RNG seed
};

// Runs criterion `id` (1..12; 13 is the wall-time criterion evaluated by
// run_all from the accumulated timings).
CriterionResult run_criterion(int id, const AcceptanceConfig& cfg);

// All criteria in order, including the wall-time criterion 13.
std::vector<CriterionResult> run_all(const AcceptanceConfig& cfg);

constexpr int kCriterionCount = 13;

} // namespace mvlab
