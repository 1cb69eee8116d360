#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace disclosure::cli {

/// Parsed command-line state shared by the subcommands.
struct RunConfig {
    std::string prior_spec = "uniform";
    std::string cost_spec = "quadratic";
    double kappa = 0.5;
    double gamma = 0.2;
    std::string mode = "covert";  // or "overt"
    std::string out_path;         // empty means stdout
    std::string kappa_grid;       // lo:hi:n
    std::string gamma_grid;       // lo:hi:n
    std::string kappa_list;       // comma-separated decreasing schedule
    int lp_resolution = 501;      // documented bounds: 51..10001
    std::uint64_t seed = 20250801;
    int n_random = 100;
};

/// Execute one subcommand; returns the process exit code:
///   0 success, 1 check-suite failures, 2 configuration errors,
///   3 solver errors.
int run(const std::vector<std::string>& args);

}  // namespace disclosure::cli
