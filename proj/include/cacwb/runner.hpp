#ifndef CACWB_RUNNER_HPP
#define CACWB_RUNNER_HPP

/// Executes a parsed ExperimentConfig and renders the complete output
/// document. Pure except for the optimizer cache file and an optional
/// simulation event trace; nothing is written until validation and
/// resolution succeed.

#include <string>

#include "cacwb/config.hpp"

namespace cacwb {

struct RunOutcome {
    int exit_code = 0;   // 0 ok, 4 when a fixed point failed to converge
    std::string output;  // rendered CSV or JSON document
};

/// Throws ValidationError (exit 2 at the CLI) or SolverError (exit 3).
RunOutcome run_experiment(const ExperimentConfig& config);

} // namespace cacwb

#endif
