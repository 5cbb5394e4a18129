#pragma once

#include <ostream>

namespace hdboot::sim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;

/**
 * Entry point of the hdboot command-line tool.
 *
 * Subcommands: simulate, ci, stepdown, covcmp, rlasso, rates. Returns 0 on
 * success, 2 on usage or configuration errors and 3 on data errors.
 */
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace hdboot::sim
