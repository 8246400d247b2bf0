#include <cmath>
#include <ostream>

#include <fdrclass/error.hpp>
#include <fdrclass/format.hpp>

#include "cli.hpp"

namespace fdrclass::cli {

ResolvedFamily resolve_family(const FamilyOptions& opts)
{
    if (opts.family == "location" || opts.family == "scale") {
        if (!opts.zeta) {
            throw DomainError("--family " + opts.family + " needs --zeta");
        }
        return {opts.family, parse_model_kind(opts.family), SubbotinShape(*opts.zeta)};
    }
    const Family named = parse_family(opts.family);
    const SubbotinShape shape = shape_of(named);
    if (opts.zeta && *opts.zeta != shape.zeta()) {
        throw DomainError("--zeta " + format_double(*opts.zeta) + " contradicts --family " + opts.family);
    }
    return {opts.family, kind_of(named), shape};
}

CanonicalParams resolve_params(const ModelOptions& opts)
{
    if (opts.beta.has_value() == opts.tau.has_value()) {
        throw DomainError("give exactly one of --beta and --tau");
    }
    return opts.beta ? CanonicalParams::from_beta(*opts.beta, opts.power)
                     : CanonicalParams::from_tau(*opts.tau, opts.power);
}

std::vector<LevelChoice> resolve_levels(const LevelOptions& opts, std::optional<LevelChoice> fallback)
{
    std::vector<LevelChoice> levels;
    for (double a : opts.alpha) {
        levels.push_back(LevelChoice::fixed(a));
    }
    if (!opts.alpha_opt.empty()) {
        if (opts.alpha_opt.size() != 2) {
            throw DomainError("--alpha-opt takes two values: B0 C0");
        }
        levels.push_back(LevelChoice::opt_at(opts.alpha_opt[0], opts.alpha_opt[1]));
    }
    if (levels.empty()) {
        if (!fallback) {
            throw DomainError("give --alpha or --alpha-opt");
        }
        levels.push_back(*fallback);
    }
    return levels;
}

void write_risk_row(std::ostream& out, const RiskRow& row)
{
    out << row.family << ',' << format_double(row.zeta) << ',' << row.m << ',' << format_double(row.beta) << ','
        << format_double(row.power) << ',' << row.procedure << ',' << row.alpha_rule << ','
        << format_double(row.alpha) << ',' << format_double(row.risk) << ',' << format_double(row.bayes_risk) << ','
        << format_double(row.excess_rel) << '\n';
}

} // namespace fdrclass::cli
