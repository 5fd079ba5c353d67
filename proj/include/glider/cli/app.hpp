#pragma once

#include <ostream>

namespace glider {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitDivergence = 2, kExitIo = 3 };

/**
 * Entry point of the `glider` tool. Subcommands: simulate, estimate, compare,
 * maneuver. Shared flags: --config, --seed, --out, --format csv|json, --quiet.
 * Console messages go to `out`/`err`; results go to files under --out.
 */
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace glider
