#pragma once

namespace stepfit {

// Command-line entry point. Subcommands: fit, verify, gen, bench.
// Returns 0 on success, 1 on runtime failure or verify disagreement,
// 2 on usage errors.
int run_cli(int argc, const char* const* argv);

}  // namespace stepfit
