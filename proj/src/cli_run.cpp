#include "disclosure/cli.hpp"

#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "disclosure/checks.hpp"
#include "disclosure/equilibrium.hpp"
#include "disclosure/errors.hpp"
#include "disclosure/io.hpp"
#include "disclosure/welfare.hpp"

namespace disclosure::cli {

namespace {

using nlohmann::json;

void emit(const RunConfig& cfg, const std::string& content) {
    if (cfg.out_path.empty())
        std::cout << content << std::flush;
    else
        io::write_atomic(cfg.out_path, content);
}

json base_meta(const RunConfig& cfg) {
    json meta;
    meta["prior"] = cfg.prior_spec;
    meta["cost"] = cfg.cost_spec;
    meta["kappa"] = io::round_sig(cfg.kappa);
    meta["gamma"] = io::round_sig(cfg.gamma);
    meta["mode"] = cfg.mode;
    return meta;
}

int cmd_solve(const RunConfig& cfg) {
    const Prior prior = io::parse_prior(cfg.prior_spec);
    const CostSpec cost =
        io::parse_cost(cfg.cost_spec, prior.mean(), cfg.kappa);
    EquilibriumSet set;
    if (cfg.mode == "covert") {
        set = covert_equilibria(prior, cost, cfg.gamma);
    } else if (cfg.mode == "overt") {
        set.equilibria.push_back(overt_equilibrium(prior, cost, cfg.gamma));
    } else {
        throw ConfigError("mode must be covert or overt");
    }
    for (Equilibrium& eq : set.equilibria) {
        const WelfareReport rep = sender_payoff(prior, cost, cfg.gamma, eq);
        eq.sender_payoff = rep.sender;
        eq.receiver_payoff = rep.receiver;
    }
    emit(cfg, io::to_json(set, base_meta(cfg)).dump(2) + "\n");
    return 0;
}

int cmd_benchmark(const RunConfig& cfg) {
    const Prior prior = io::parse_prior(cfg.prior_spec);
    const Kappa0Benchmark b = benchmark_kappa0(prior, cfg.gamma);
    json j = io::to_json(b);
    j["meta"] = {{"prior", cfg.prior_spec}, {"gamma", io::round_sig(cfg.gamma)}};
    emit(cfg, j.dump(2) + "\n");
    return 0;
}

int cmd_regions(const RunConfig& cfg) {
    const Prior prior = io::parse_prior(cfg.prior_spec);
    const CostSpec cost =
        io::parse_cost(cfg.cost_spec, prior.mean(), cfg.kappa);
    const std::vector<double> kappas = io::parse_grid(cfg.kappa_grid);
    const std::vector<double> gammas = io::parse_grid(cfg.gamma_grid);
    for (double k : kappas)
        if (!(k > 0.0)) throw ConfigError("regions needs a positive kappa grid");
    for (double g : gammas)
        if (!(g >= 0.0 && g < 1.0))
            throw ConfigError("regions needs a gamma grid inside [0, 1)");
    emit(cfg, io::region_csv(region_map(prior, cost, kappas, gammas)));
    return 0;
}

int cmd_limit(const RunConfig& cfg) {
    const Prior prior = io::parse_prior(cfg.prior_spec);
    const CostSpec cost =
        io::parse_cost(cfg.cost_spec, prior.mean(), cfg.kappa);
    const std::vector<double> kappas = io::parse_list(cfg.kappa_list);
    emit(cfg, io::limit_csv(kappa_limit(prior, cost, cfg.gamma, kappas)));
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    const Prior prior = io::parse_prior(cfg.prior_spec);
    const CostSpec cost =
        io::parse_cost(cfg.cost_spec, prior.mean(), cfg.kappa);
    const bool over_gamma = !cfg.gamma_grid.empty();
    const bool over_kappa = !cfg.kappa_grid.empty();
    if (over_gamma == over_kappa)
        throw ConfigError("sweep needs exactly one of --gamma-grid/--kappa-grid");
    const SweepTable table =
        over_gamma
            ? gamma_sweep(prior, cost, io::parse_grid(cfg.gamma_grid))
            : kappa_sweep(prior, cost, cfg.gamma,
                          io::parse_grid(cfg.kappa_grid));
    emit(cfg, io::sweep_csv(table));
    return 0;
}

int cmd_check(const RunConfig& cfg) {
    if (cfg.lp_resolution < 51 || cfg.lp_resolution > 10001)
        throw ConfigError("--resolution must lie in [51, 10001]");
    const auto results = checks::run_all(cfg.seed, cfg.n_random);
    int fails = 0;
    std::ostringstream os;
    for (const auto& r : results) {
        os << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail
           << "\n";
        if (!r.pass) ++fails;
    }
    os << (fails == 0 ? "all checks passed\n"
                      : std::to_string(fails) + " check(s) failed\n");
    emit(cfg, os.str());
    return fails == 0 ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    RunConfig cfg;
    CLI::App app{"Equilibrium solver for costly evidence disclosure games"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub, bool with_cost) {
        sub->add_option("--prior", cfg.prior_spec,
                        "uniform | beta:A,B | pwl:x,F;... | {json} | @file");
        if (with_cost)
            sub->add_option("--cost", cfg.cost_spec,
                            "quadratic | blend:A,B | poly:c0,c1,... | {json}");
        sub->add_option("--out", cfg.out_path, "output file (default stdout)");
    };

    CLI::App* solve = app.add_subcommand(
        "solve", "equilibria at one (kappa, gamma) point");
    add_common(solve, true);
    solve->add_option("--kappa", cfg.kappa, "information cost multiplier");
    solve->add_option("--gamma", cfg.gamma, "certification fee")
        ->check(CLI::NonNegativeNumber);
    solve->add_option("--mode", cfg.mode, "covert | overt");

    CLI::App* benchmark =
        app.add_subcommand("benchmark", "free-evidence analysis");
    add_common(benchmark, false);
    benchmark->add_option("--gamma", cfg.gamma, "certification fee")
        ->check(CLI::NonNegativeNumber);

    CLI::App* regions =
        app.add_subcommand("regions", "(kappa, gamma) label matrix as CSV");
    add_common(regions, true);
    regions->add_option("--kappa-grid", cfg.kappa_grid, "lo:hi:n inclusive")
        ->required();
    regions->add_option("--gamma-grid", cfg.gamma_grid, "lo:hi:n inclusive")
        ->required();

    CLI::App* limit = app.add_subcommand(
        "limit", "vanishing-cost convergence table as CSV");
    add_common(limit, true);
    limit->add_option("--gamma", cfg.gamma, "certification fee")
        ->check(CLI::NonNegativeNumber);
    limit->add_option("--kappas", cfg.kappa_list,
                      "comma-separated strictly decreasing schedule")
        ->required();

    CLI::App* sweep =
        app.add_subcommand("sweep", "welfare table over a gamma or kappa grid");
    add_common(sweep, true);
    sweep->add_option("--kappa", cfg.kappa, "fixed kappa for gamma sweeps");
    sweep->add_option("--gamma", cfg.gamma, "fixed gamma for kappa sweeps")
        ->check(CLI::NonNegativeNumber);
    sweep->add_option("--gamma-grid", cfg.gamma_grid, "lo:hi:n inclusive");
    sweep->add_option("--kappa-grid", cfg.kappa_grid, "lo:hi:n inclusive");

    CLI::App* check =
        app.add_subcommand("check", "seeded property suite; exit 1 on failure");
    add_common(check, true);
    check->add_option("--seed", cfg.seed, "rng seed");
    check->add_option("--n", cfg.n_random, "random problem count")
        ->check(CLI::PositiveNumber);
    check->add_option("--resolution", cfg.lp_resolution,
                      "LP oracle grid size, 51..10001");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("disclose");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(cfg);
        if (benchmark->parsed()) return cmd_benchmark(cfg);
        if (regions->parsed()) return cmd_regions(cfg);
        if (limit->parsed()) return cmd_limit(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (check->parsed()) return cmd_check(cfg);
        std::cerr << app.help() << std::endl;
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << std::endl;
        return 3;
    }
}

}  // namespace disclosure::cli
