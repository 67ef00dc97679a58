#pragma once

#include "cli/config.hpp"

namespace cli {

// Each command writes its output file and returns the process exit code
// (0 success, 3 infeasible plan). Config problems throw ConfigError.
int cmd_outage_sweep(const RunConfig& cfg);
int cmd_fbl_sweep(const RunConfig& cfg);
int cmd_moment_check(const RunConfig& cfg);
int cmd_plan(const RunConfig& cfg);
int cmd_linklevel(const RunConfig& cfg);
int cmd_sic_sim(const RunConfig& cfg);

}  // namespace cli
