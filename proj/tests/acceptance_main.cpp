// Acceptance runner: `mvlab_acceptance <criterion-id>` runs one criterion and
// prints its pass/fail line; no argument runs the full battery.
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "mvlab/acceptance.hpp"

int main(int argc, char** argv) {
    mvlab::AcceptanceConfig cfg;
    if (const char* w = std::getenv("MVLAB_WORKERS")) cfg.workers = unsigned(std::atoi(w));
    if (const char* c = std::getenv("MVLAB_CACHE_DIR")) cfg.cache_dir = c;
    if (argc > 1) {
        int id = std::atoi(argv[1]);
        if (id < 1 || id > mvlab::kCriterionCount) {
            std::cerr << "criterion id must be 1.." << mvlab::kCriterionCount << "\n";
            return 2;
        }
        if (id == 13) {
            // Wall-time criterion: timed full battery.
            auto all = mvlab::run_all(cfg);
            for (const auto& r : all) std::cout << r.one_line() << "\n";
            return all.back().pass ? 0 : 1;
        }
        auto r = mvlab::run_criterion(id, cfg);
        std::cout << r.one_line() << "\n";
        return r.pass ? 0 : 1;
    }
    auto all = mvlab::run_all(cfg);
    bool ok = true;
    for (const auto& r : all) {
        std::cout << r.one_line() << "\n";
        ok = ok && r.pass;
    }
    return ok ? 0 : 1;
}
