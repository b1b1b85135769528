#pragma once

#include <string>
#include <vector>

#include "exclusim/run_config.hpp"

namespace exclusim {

struct CheckResult {
    std::string name;
    bool pass = true;
    double margin = 0.0;  // worst-case slack; negative means violated
    std::string note;
};

struct RunReport {
    std::vector<CheckResult> checks;
    std::vector<std::string> artifacts;
    int exit_code = 0;
};

// Executes the configured command, writes CSV artifacts plus report.json
// into out_dir, and returns the exit status (0 ok, 2 invariant violation).
RunReport run(const RunConfig& config, const std::string& out_dir, int workers = 1);

}  // namespace exclusim
