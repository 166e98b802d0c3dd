// Runs the full acceptance suite and prints one pass/fail line per
// criterion; exits nonzero if any criterion fails.

#include <cstdio>

#include "airyspec/acceptance.hpp"

int main() {
    const auto results = airyspec::acceptance::run_all();
    std::size_t passed = 0;
    for (const auto& r : results) {
        std::printf("[%s] criterion %2d: %s (%.2f s) — %s\n",
                    r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.seconds, r.detail.c_str());
        std::fflush(stdout);
        if (r.passed) ++passed;
    }
    std::printf("%s: %zu/%zu criteria passed\n",
                passed == results.size() ? "ACCEPTANCE PASS"
                                         : "ACCEPTANCE FAIL",
                passed, results.size());
    return passed == results.size() ? 0 : 1;
}
