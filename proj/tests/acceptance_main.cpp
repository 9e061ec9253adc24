// Prints one PASS/FAIL line per acceptance criterion. Exit status is 0 only
// when every selected criterion passes.
//
//   stia_acceptance            all criteria
//   stia_acceptance 3 7        selected criteria

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "stia/acceptance.hpp"

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    if (ids.empty()) {
        for (int i = 1; i <= stia::kNumCriteria; ++i) ids.push_back(i);
    }
    const int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    int failed = 0;
    for (int id : ids) {
        if (id < 1 || id > stia::kNumCriteria) {
            std::cerr << "unknown criterion " << id << '\n';
            return 2;
        }
        const stia::CriterionResult r = stia::run_criterion(id, workers);
        std::cout << stia::format_result(r) << std::endl;
        failed += r.passed ? 0 : 1;
    }
    std::cout << (ids.size() - static_cast<std::size_t>(failed)) << "/" << ids.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
