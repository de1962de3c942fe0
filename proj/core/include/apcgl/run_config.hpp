#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "apcgl/ap_series.hpp"
#include "apcgl/cgl_params.hpp"
#include "apcgl/reference.hpp"
#include "apcgl/splitting.hpp"

namespace apcgl {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OracleSettings {
    std::size_t grid_n = 256;
    double dt = 1e-4;
    int picard_iters = 8;
    int quad_nodes = 32;
    Scheme scheme = Scheme::exponential_euler;
};

struct InitialMode {
    std::size_t index = 1;
    Complex value{0.0, 0.0};
};

// One JSON document drives every subcommand.  The physical constants
// (lambda, alpha..b, degree, kappa) have no defaults: runs must state them
// explicitly.
struct RunConfig {
    CglParams params;
    double lambda = 1.0;
    std::vector<InitialMode> initial;
    SplitSchedule schedule;
    OracleSettings oracle;
    std::filesystem::path output_dir = ".";
    std::uint64_t seed = 0;
};

// Parse errors carry "line L, column C" positions; semantic errors carry
// the JSON path of the offending field.  Both throw ConfigError.
RunConfig parse_run_config(const std::string& text, const std::string& origin);
RunConfig load_run_config(const std::filesystem::path& path);

// Dense initial series at the schedule truncation.
ApSeries initial_series(const RunConfig& config);

} // namespace apcgl
