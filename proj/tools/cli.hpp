#ifndef FDRCLASS_TOOLS_CLI_HPP
#define FDRCLASS_TOOLS_CLI_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <fdrclass/model.hpp>
#include <fdrclass/risk.hpp>
#include <fdrclass/threshold.hpp>

namespace fdrclass::cli {

/// Family flag: a named family (gaussian-location, gaussian-scale,
/// laplace-scale) or a bare kind (location, scale) completed by --zeta.
struct FamilyOptions {
    std::string family = "gaussian-location";
    std::optional<double> zeta;
};

struct ResolvedFamily {
    std::string name;
    ModelKind kind;
    SubbotinShape shape;
};

ResolvedFamily resolve_family(const FamilyOptions& opts);

/// Sparsity and power flags. Exactly one of beta, tau.
struct ModelOptions {
    FamilyOptions family;
    std::optional<double> beta;
    std::optional<double> tau;
    double power = 0.5;
};

CanonicalParams resolve_params(const ModelOptions& opts);

/// --alpha A or --alpha-opt B0 C0; at most one.
struct LevelOptions {
    std::vector<double> alpha;
    std::vector<double> alpha_opt;
};

/// All requested level rules in declaration order (alpha values first).
/// Falls back to `fallback` when none is given.
std::vector<LevelChoice> resolve_levels(const LevelOptions& opts, std::optional<LevelChoice> fallback);

struct ClassifyOptions {
    std::string input;
    std::string output;
    bool pvalues = false;
    FamilyOptions family;
    LevelOptions level;
};

struct RiskOptions {
    ModelOptions model;
    std::size_t m = 100;
    LevelOptions level;
    double epsilon = 0.5;
    double nu = 0.25;
    int case_a = 1;
    double lambda = 1.0;
    bool exact_fdr = false;
    std::string output;
};

struct GridOptions {
    FamilyOptions family;
    std::vector<std::size_t> m_list{25, 100, 1000};
    std::vector<double> betas;
    std::vector<double> powers;
    std::size_t grid_size = 21;
    std::vector<std::string> procedures{"bayes0", "bfdr", "fdr"};
    LevelOptions level;
    std::vector<double> bayes0;
    double excess_level = 0.1;
    unsigned threads = 0;
    std::string output;
};

struct SimulateOptions {
    ModelOptions model;
    std::size_t m = 100;
    std::size_t replicates = 10000;
    std::uint64_t seed = 1;
    std::string risk = "inductive";
    std::string rule = "fdr";
    std::optional<double> threshold;
    LevelOptions level;
    bool null_only = false;
    bool profile = false;
    bool check_exact = false;
    bool deterministic = false;
    unsigned threads = 0;
    std::string output;
};

int run_classify(const ClassifyOptions& opts, std::ostream& out);
int run_risk(const RiskOptions& opts, std::ostream& out);
int run_grid(const GridOptions& opts, std::ostream& out);
int run_simulate(const SimulateOptions& opts, std::ostream& out);

// Shared CSV layout of risk rows.
inline constexpr const char* kRiskCsvHeader =
    "family,zeta,m,beta,C,procedure,alpha_rule,alpha,risk,bayes_risk,excess_rel";

struct RiskRow {
    std::string family;
    double zeta = 0.0;
    std::size_t m = 0;
    double beta = 0.0;
    double power = 0.0;
    std::string procedure;
    std::string alpha_rule;
    double alpha = 0.0;
    double risk = 0.0;
    double bayes_risk = 0.0;
    double excess_rel = 0.0;
};

/// A row with NaN fields prints them as NA.
void write_risk_row(std::ostream& out, const RiskRow& row);

} // namespace fdrclass::cli

#endif // FDRCLASS_TOOLS_CLI_HPP
