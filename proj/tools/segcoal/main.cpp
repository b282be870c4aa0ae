#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_common(CLI::App& sub, segcoal::cli::ExperimentConfig& config, std::string& rates,
                std::string& output) {
    sub.add_option("-S,--alphabet-size", config.alphabet_size, "number of complexes per level")
        ->capture_default_str();
    sub.add_option("--rates", rates, "rate family, e.g. constant:1, geometric:1:0.125, table:1,2;sum=inf")
        ->capture_default_str();
    sub.add_option("--seed", config.seed, "64-bit seed (default from SEGCOAL_SEED or a fixed constant)");
    sub.add_option("--output", output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub.add_option("--threads", config.threads, "worker threads (0: all cores)");
}

void add_space(CLI::App& sub, segcoal::cli::ExperimentConfig& config, std::string& geometry) {
    sub.add_option("--depth", config.depth, "deepest complex level N")->capture_default_str();
    sub.add_option("--precision", config.precision, "point word length P (default: depth)");
    sub.add_option("--geometry", geometry, "cantor or interval")->check(CLI::IsMember({"cantor", "interval"}));
}

void add_time(CLI::App& sub, segcoal::cli::ExperimentConfig& config) {
    sub.add_option("--t", config.t, "time");
    sub.add_flag("--relative-to-t0", config.relative_to_t0, "read times as multiples of the critical time");
}

}  // namespace

int main(int argc, char** argv) {
    segcoal::cli::ExperimentConfig config;
    config.seed = segcoal::cli::default_seed();
    std::string rates = config.rates;
    std::string geometry = "cantor";
    std::string output;

    CLI::App app{"Simulation and analytics for segregated Lambda-coalescents"};
    app.require_subcommand(1);

    auto* classify = app.add_subcommand("classify", "phase of a rate family and its critical time");
    add_common(*classify, config, rates, output);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo block/dust decompositions at time t");
    add_common(*simulate, config, rates, output);
    add_space(*simulate, config, geometry);
    add_time(*simulate, config);
    simulate->add_option("--replicates", config.replicates, "independent realizations (default 1000)");
    simulate->add_flag("--emit-blocks", config.emit_blocks, "include full decompositions with atoms");

    auto* gwve = app.add_subcommand("gwve", "branching-process means, extinction and degeneracy");
    add_common(*gwve, config, rates, output);
    add_time(*gwve, config);
    gwve->add_option("--depth", config.depth, "last generation reported")->capture_default_str();
    gwve->add_flag("--limit", config.limit, "also compute lim_n P[B_n = 0]");
    gwve->add_flag("--mc", config.monte_carlo, "also simulate the process directly");
    gwve->add_option("--replicates", config.replicates, "trajectories for --mc (default 1000)");
    gwve->add_option("--tol", config.tol, "convergence tolerance")->capture_default_str();
    gwve->add_option("--horizon", config.horizon, "terms summed before the tail bound")->capture_default_str();

    auto* dimension = app.add_subcommand("dimension", "empirical vs analytic dust dimension");
    add_common(*dimension, config, rates, output);
    add_space(*dimension, config, geometry);
    add_time(*dimension, config);
    dimension->add_option("--t-grid", config.t_grid, "comma-separated times")->delimiter(',');
    dimension->add_option("--replicates", config.replicates, "realizations per time (default 1000)");
    dimension->add_option("--regression-csv", config.regression_csv, "write per-replicate log B_n rows here");

    auto* flowcheck = app.add_subcommand("flowcheck", "random checks of the flow composition property");
    add_common(*flowcheck, config, rates, output);
    add_space(*flowcheck, config, geometry);
    add_time(*flowcheck, config);
    flowcheck->add_option("--samples", config.samples, "checks per realization")->capture_default_str();
    flowcheck->add_option("--replicates", config.replicates, "independent realizations (default 1)");

    auto* events = app.add_subcommand("events", "dump one realization of the event process");
    add_common(*events, config, rates, output);
    add_space(*events, config, geometry);
    add_time(*events, config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    config.command = app.get_subcommands().front()->get_name();
    config.rates = rates;
    config.geometry = segcoal::parse_geometry(geometry);
    if (output == "json") config.output = segcoal::cli::OutputFormat::Json;
    if (output == "csv") config.output = segcoal::cli::OutputFormat::Csv;
    return segcoal::cli::run(config, std::cout, std::cerr);
}
