// Acceptance suite: one pass/fail line per criterion; exit nonzero on any
// failure.
#include <cstdio>

#include "cutflow/acceptance.hpp"

int main() {
    int failed = 0;
    auto report = cutflow::run_acceptance(0, [&](const cutflow::CriterionResult& r) {
        std::printf("[%s] %2d  %s\n        %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.detail.c_str());
        std::fflush(stdout);
    });
    for (const auto& r : report)
        if (!r.pass) ++failed;
    std::printf("%d/%zu criteria passed\n", static_cast<int>(report.size()) - failed, report.size());
    return failed == 0 ? 0 : 1;
}
