#pragma once

#include <string>
#include <vector>

namespace pdecrl {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Deterministic property suite: sensing partition identity, closed-loop
/// translation equivariance, gradient checks, integrator oracles, replay
/// bookkeeping, target-network copy, checkpoint round-trip and full-run
/// seed determinism.
std::vector<CheckResult> run_selfcheck();

bool all_passed(const std::vector<CheckResult>& results);
std::string format_report(const std::vector<CheckResult>& results);

} // namespace pdecrl
