#pragma once

// Experiment dispatch: takes a validated RunConfig, runs the simulation, writes the CSV
// outputs into the config's output directory, and reports which files were written.
// Config problems surface as std::invalid_argument from the loader; a declared fit that
// fails to converge sets exit_code 3 (files are still written).

#include <string>
#include <vector>

#include "qdsim/config.hpp"

namespace qdsim {

struct RunOutcome {
    int exit_code = 0;
    std::vector<std::string> files;
    std::string summary; // key fitted numbers, one "name = value" per line
};

RunOutcome run_config(const RunConfig& cfg);

} // namespace qdsim
