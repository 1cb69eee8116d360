#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "disclosure/equilibrium.hpp"
#include "disclosure/welfare.hpp"

namespace disclosure::io {

/// Round to 9 significant digits (the precision of every emitted number).
double round_sig(double v);
std::string format_sig(double v);

nlohmann::json to_json(const Equilibrium& eq);
nlohmann::json to_json(const EquilibriumSet& set, nlohmann::json meta);
nlohmann::json to_json(const Kappa0Benchmark& b);

std::string region_csv(const std::vector<RegionCell>& cells);
std::string sweep_csv(const SweepTable& table);
std::string limit_csv(const KappaLimitReport& rep);

/// Write via a temp file + rename so readers never observe partial output.
void write_atomic(const std::string& path, const std::string& content);

/// Prior grammar: "uniform" | "beta:A,B" | "pwl:x0,F0;x1,F1;...".
Prior parse_prior(const std::string& text);

/// Cost grammar: "quadratic" | "blend:A,B" | "poly:c0,c1,c2,...", centered at
/// mu with multiplier kappa.
CostSpec parse_cost(const std::string& text, double mu, double kappa);

/// Inclusive grid "lo:hi:n"; n = 1 requires lo == hi.
std::vector<double> parse_grid(const std::string& text, int max_points = 10001);

/// Comma-separated list of reals.
std::vector<double> parse_list(const std::string& text);

}  // namespace disclosure::io
