#pragma once

#include <iostream>
#include <vector>

#include "apcgl/run_config.hpp"

namespace apcgl {

// Batch workflows behind the `apcgl` subcommands.  Exit codes:
//   0  success
//   1  validation suite failure
//   2  invalid configuration (thrown as ConfigError before these run)
//   3  blowup detected by simulate
//   4  reference solve failure in converge
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitBlowup = 3;
inline constexpr int kExitReferenceFailed = 4;

// Writes trajectory.csv, summary.csv and final_state.json to output_dir.
int cmd_simulate(const RunConfig& config, std::ostream& out = std::cout);

// Runs evolve for each h against one pseudospectral reference; writes
// convergence.csv (h,err_l1,err_sup) and prints the log-log slope.
// h values must divide the schedule's total time.
int cmd_converge(const RunConfig& config, const std::vector<double>& h_list,
                 std::ostream& out = std::cout);

// Cross-module invariant suite; prints a pass/fail table.
int cmd_validate(const RunConfig& config, std::ostream& out = std::cout);

// Evolves from scale * u0 for each scale; writes blowup.csv
// (scale,t_star_estimate with "none" for runs that complete).
int cmd_blowup(const RunConfig& config, const std::vector<double>& scales,
               std::ostream& out = std::cout);

namespace detail {

// Worker count for sweep parallelism: APCGL_THREADS if set, else hardware
// concurrency, clamped to [1, members].
unsigned sweep_threads(std::size_t members);

} // namespace detail

} // namespace apcgl
