#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include <fdrclass/error.hpp>

#include "cli.hpp"

namespace {

using namespace fdrclass::cli;

void add_family(CLI::App* cmd, FamilyOptions& fam)
{
    cmd->add_option("--family", fam.family,
                    "gaussian-location, gaussian-scale, laplace-scale, or location/scale with --zeta")
        ->capture_default_str();
    cmd->add_option("--zeta", fam.zeta, "Subbotin shape parameter (> 1 for location)");
}

void add_model(CLI::App* cmd, ModelOptions& model)
{
    add_family(cmd, model.family);
    cmd->add_option("--beta", model.beta, "sparsity exponent, tau = m^beta");
    cmd->add_option("--tau", model.tau, "sparsity ratio pi0 / pi1");
    cmd->add_option("--power", model.power, "power C of the Bayes rule")->capture_default_str();
}

void add_level(CLI::App* cmd, LevelOptions& level, bool many)
{
    auto* alpha = cmd->add_option("--alpha", level.alpha, many ? "nominal levels" : "nominal level");
    if (many) {
        alpha->delimiter(',');
    } else {
        alpha->expected(1);
    }
    cmd->add_option("--alpha-opt", level.alpha_opt, "level tuned for beta0 and C0")
        ->expected(2)
        ->type_name("B0 C0");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"FDR thresholding as a classification procedure under sparsity"};
    app.set_config("--config", "", "read options from a TOML or INI file; flags on the command line win");
    app.require_subcommand(1);

    ClassifyOptions classify;
    auto* c_cmd = app.add_subcommand("classify", "label observations with the FDR threshold");
    c_cmd->add_option("--input", classify.input, "one value per line")->required();
    c_cmd->add_option("--out", classify.output, "labelled CSV output")->required();
    c_cmd->add_flag("--pvalues", classify.pvalues, "input holds p-values instead of test statistics");
    add_family(c_cmd, classify.family);
    add_level(c_cmd, classify.level, false);

    RiskOptions risk;
    auto* r_cmd = app.add_subcommand("risk", "thresholds, risks and bounds for one configuration");
    add_model(r_cmd, risk.model);
    r_cmd->add_option("--m", risk.m, "number of observations")->capture_default_str();
    add_level(r_cmd, risk.level, false);
    r_cmd->add_option("--epsilon", risk.epsilon, "bound parameter epsilon")->capture_default_str();
    r_cmd->add_option("--nu", risk.nu, "bound parameter nu")->capture_default_str();
    r_cmd->add_option("--case-a", risk.case_a, "FDR rate bound case (1 or 2)")->capture_default_str();
    r_cmd->add_option("--lambda", risk.lambda, "weighted-risk factor")->capture_default_str();
    r_cmd->add_flag("--exact-fdr", risk.exact_fdr, "require the exact FDR risk (fails above the m cap)");
    r_cmd->add_option("--out", risk.output, "CSV output");

    GridOptions grid;
    auto* g_cmd = app.add_subcommand("grid", "excess-risk sweep over (beta, C)");
    add_family(g_cmd, grid.family);
    g_cmd->add_option("--m", grid.m_list, "values of m")->delimiter(',')->capture_default_str();
    g_cmd->add_option("--betas", grid.betas, "beta grid")->delimiter(',');
    g_cmd->add_option("--powers", grid.powers, "C grid")->delimiter(',');
    g_cmd->add_option("--grid-size", grid.grid_size, "points of the default lattices")->capture_default_str();
    g_cmd->add_option("--procedures", grid.procedures, "bayes0, bfdr, fdr")->delimiter(',')->capture_default_str();
    add_level(g_cmd, grid.level, true);
    g_cmd->add_option("--bayes0", grid.bayes0, "oracle parameters of bayes0")->expected(2)->type_name("B0 C0");
    g_cmd->add_option("--excess-level", grid.excess_level, "level set reported in the summary")
        ->capture_default_str();
    g_cmd->add_option("--threads", grid.threads, "worker threads (0: all cores)")->capture_default_str();
    g_cmd->add_option("--out", grid.output, "CSV output")->required();

    SimulateOptions sim;
    auto* s_cmd = app.add_subcommand("simulate", "Monte Carlo risks, FDP and threshold concentration");
    add_model(s_cmd, sim.model);
    s_cmd->add_option("--m", sim.m, "number of observations")->capture_default_str();
    s_cmd->add_option("--replicates", sim.replicates, "Monte Carlo replicates")->capture_default_str();
    s_cmd->add_option("--seed", sim.seed, "random seed")->capture_default_str();
    s_cmd->add_option("--risk", sim.risk, "transductive or inductive")->capture_default_str();
    s_cmd->add_option("--rule", sim.rule, "fdr, bh, bayes or fixed")->capture_default_str();
    s_cmd->add_option("--threshold", sim.threshold, "p-value threshold for --rule fixed");
    add_level(s_cmd, sim.level, false);
    s_cmd->add_flag("--null", sim.null_only, "draw every label as 0 and report the FDP");
    s_cmd->add_flag("--profile", sim.profile, "quantiles of the FDR threshold");
    s_cmd->add_flag("--check-exact", sim.check_exact, "compare the exact FDR risk with a full-pipeline estimate");
    s_cmd->add_flag("--deterministic", sim.deterministic, "compare transductive and inductive Bayes risks");
    s_cmd->add_option("--threads", sim.threads, "worker threads (0: all cores)")->capture_default_str();
    s_cmd->add_option("--out", sim.output, "CSV output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (c_cmd->parsed()) {
            return run_classify(classify, std::cout);
        }
        if (r_cmd->parsed()) {
            return run_risk(risk, std::cout);
        }
        if (g_cmd->parsed()) {
            return run_grid(grid, std::cout);
        }
        return run_simulate(sim, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
