// hbmut: fit, simulate, and evaluate hierarchical mutation-rate models.

#include "hbmut/errors.hpp"
#include "hbmut/report.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_data_flags(CLI::App* cmd, hbmut::DataArgs& data, bool required = true) {
    auto* counts = cmd->add_option("--counts", data.counts, "mutation counts TSV (gene, type, sample, count)");
    auto* coverage = cmd->add_option("--coverage", data.coverage, "coverage TSV");
    if (required) {
        counts->required();
        coverage->required();
    }
    cmd->add_option("--types", data.types, "mutation type labels, one per line");
}

void add_fit_flags(CLI::App* cmd, hbmut::FitArgs& args) {
    add_data_flags(cmd, args.data);
    cmd->add_option("--config", args.config, "key=value sampler configuration");
    cmd->add_option("--out", args.out, "output directory")->required();
    cmd->add_option("--seed", args.seed, "overrides the config seed");
    cmd->add_option("--chains", args.chains, "independent chains run concurrently")->check(CLI::PositiveNumber);
    cmd->add_option("--lambda0", args.lambda0, "passenger per-base rate (overrides config)");
    cmd->add_option("--predictive-beta", args.predictive_beta, "sample effect of the hypothetical new sample");
    cmd->add_option("--predictive-coverage-scale", args.predictive_coverage_scale,
                    "multiplier on the new sample's mean coverage");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical Bayesian analysis of somatic mutation counts"};
    app.require_subcommand(1);

    hbmut::FitArgs rates, drivers;
    auto* fit_rates = app.add_subcommand("fit-rates", "posterior gene mutation rates");
    add_fit_flags(fit_rates, rates);
    auto* fit_drivers = app.add_subcommand("fit-drivers", "posterior driver probabilities given lambda0");
    add_fit_flags(fit_drivers, drivers);

    hbmut::SimulateArgs sim;
    hbmut::DataArgs sim_source;
    auto* simulate = app.add_subcommand("simulate", "synthetic study with planted drivers");
    simulate->add_option("--out", sim.out, "output directory")->required();
    simulate->add_option("--seed", sim.seed, "random seed");
    simulate->add_option("--genes", sim.genes, "gene count for synthetic coverage");
    simulate->add_option("--samples", sim.samples, "sample count for synthetic coverage");
    simulate->add_option("--target-g", sim.target_g, "shrink to this many genes, keeping tier fractions");
    simulate->add_option("--lambda0", sim.lambda0, "passenger per-base rate");
    auto* src_counts = simulate->add_option("--counts", sim_source.counts, "real dataset counts (sample labels)");
    auto* src_coverage = simulate->add_option("--coverage", sim_source.coverage, "real coverage to simulate on");
    simulate->add_option("--types", sim_source.types, "type labels of the real dataset");
    src_counts->needs(src_coverage);
    src_coverage->needs(src_counts);

    hbmut::EvaluateArgs eval;
    auto* evaluate = app.add_subcommand("evaluate", "FDR curves of a driver fit against planted truth");
    add_data_flags(evaluate, eval.data);
    evaluate->add_option("--fit", eval.fit, "fit-drivers output directory")->required();
    evaluate->add_option("--truth", eval.truth, "truth.tsv from simulate")->required();
    evaluate->add_option("--out", eval.out, "output directory")->required();
    evaluate->add_option("--effects", eval.effects, "plug-in effects for the likelihood-ratio test");
    evaluate->add_option("--lambda0", eval.lambda0, "null rate (default: the fit's lambda0)");
    evaluate->add_option("--max-k", eval.max_k, "longest list size")->check(CLI::PositiveNumber);

    hbmut::BaselineArgs base;
    auto* baseline = app.add_subcommand("baseline", "per-gene MLE, likelihood-ratio p-values, BH adjustment");
    add_data_flags(baseline, base.data);
    baseline->add_option("--out", base.out, "output directory")->required();
    baseline->add_option("--config", base.config, "config supplying lambda0");
    baseline->add_option("--effects", base.effects, "plug-in effects (default: all 1)");
    baseline->add_option("--lambda0", base.lambda0, "null per-base rate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*fit_rates) hbmut::cmd_fit_rates(rates);
        if (*fit_drivers) hbmut::cmd_fit_drivers(drivers);
        if (*simulate) {
            if (*src_counts) sim.coverage_source = sim_source;
            hbmut::cmd_simulate(sim);
        }
        if (*evaluate) hbmut::cmd_evaluate(eval);
        if (*baseline) hbmut::cmd_baseline(base);
    } catch (const std::exception& e) {
        std::cerr << "hbmut: " << e.what() << '\n';
        return hbmut::exit_code(e);
    }
    return 0;
}
