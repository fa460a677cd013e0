#ifndef CUTFLOW_ACCEPTANCE_HPP
#define CUTFLOW_ACCEPTANCE_HPP

#include <functional>
#include <string>
#include <vector>

namespace cutflow {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // measured values
};

using AcceptanceReport = std::vector<CriterionResult>;

// Runs the ten desk-scale acceptance checks, emitting each result as it
// completes.  fault_item != 0 deliberately perturbs the measured value of
// that item (a harness self-check: the corresponding item must then fail).
AcceptanceReport run_acceptance(int fault_item = 0,
                                const std::function<void(const CriterionResult&)>& emit = {});

}  // namespace cutflow

#endif
