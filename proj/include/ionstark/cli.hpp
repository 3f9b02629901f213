#pragma once

// Command-line front end: chain, sweep, address, pair, zeeman and species
// subcommands over the library. Exit codes: 0 success, 1 bad input or data,
// 2 regime violation or infeasible plan, 3 numeric failure.

namespace ionstark {

int run_cli(int argc, const char* const* argv);

}  // namespace ionstark
