#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include <fdrclass/error.hpp>
#include <fdrclass/format.hpp>
#include <fdrclass/risk.hpp>
#include <fdrclass/simulate.hpp>

#include "cli.hpp"

namespace fdrclass::cli {

namespace {

constexpr double kNa = std::numeric_limits<double>::quiet_NaN();

struct Line {
    std::string quantity;
    double estimate;
    double se;
};

const char* verdict(bool ok)
{
    return ok ? "PASS" : "FAIL";
}

} // namespace

int run_simulate(const SimulateOptions& opts, std::ostream& out)
{
    const ResolvedFamily fam = resolve_family(opts.model.family);
    const CanonicalParams params = resolve_params(opts.model);
    const ModelSpec model = calibrate(fam.kind, fam.shape, params, opts.m);

    SimConfig config{model, opts.m, opts.replicates, opts.seed, parse_risk_kind(opts.risk)};
    config.null_only = opts.null_only;
    config.threads = opts.threads;
    config.validate();

    const bool needs_level = opts.rule == "fdr" || opts.rule == "bh" || opts.profile || opts.check_exact;
    double alpha = kNa;
    std::string alpha_rule = "NA";
    if (needs_level) {
        const std::vector<LevelChoice> levels = resolve_levels(opts.level, std::nullopt);
        if (levels.size() != 1) {
            throw DomainError("simulate takes a single level: --alpha or --alpha-opt");
        }
        alpha = levels[0].resolve(fam.kind, fam.shape, opts.m);
        alpha_rule = levels[0].label();
    }

    ThresholdRule rule = ThresholdRule::fixed(0.0);
    if (opts.rule == "fdr") {
        rule = ThresholdRule::fdr(alpha);
    } else if (opts.rule == "bh") {
        rule = ThresholdRule::bh(alpha);
    } else if (opts.rule == "bayes") {
        rule = ThresholdRule::fixed(model.bayes_threshold());
    } else if (opts.rule == "fixed") {
        if (!opts.threshold) {
            throw DomainError("--rule fixed needs --threshold");
        }
        rule = ThresholdRule::fixed(*opts.threshold);
    } else {
        throw DomainError("unknown rule '" + opts.rule + "' (expected fdr, bh, bayes or fixed)");
    }

    const double beta = opts.m > 1 ? std::log(model.tau()) / std::log(static_cast<double>(opts.m)) : kNa;
    out << "seed: " << opts.seed << '\n';
    out << "family: " << fam.name << '\n';
    out << "m: " << opts.m << '\n';
    out << "replicates: " << opts.replicates << '\n';
    out << "rule: " << opts.rule << '\n';
    out << "alpha_rule: " << alpha_rule << '\n';
    out << "alpha: " << format_double(alpha) << '\n';

    std::vector<Line> lines;
    bool all_pass = true;
    if (opts.null_only) {
        const McEstimate fdp = mc_fdp(config, rule);
        lines.push_back({"fdp", fdp.mean, fdp.se});
        if (needs_level) {
            const bool ok = fdp.mean <= alpha + 3.0 * fdp.se;
            all_pass = all_pass && ok;
            out << "fdr_control: " << verdict(ok) << " fdp=" << format_double(fdp.mean)
                << " se=" << format_double(fdp.se) << " alpha=" << format_double(alpha) << '\n';
        }
    } else {
        const McEstimate r = mc_risk(config, rule);
        lines.push_back({"risk_" + std::string(to_string(config.risk_kind)), r.mean, r.se});
        out << "risk_" << to_string(config.risk_kind) << ": " << format_double(r.mean) << " se=" << format_double(r.se)
            << '\n';
    }

    if (opts.deterministic) {
        SimConfig tc = config;
        tc.risk_kind = RiskKind::Transductive;
        tc.null_only = false;
        const double t_b = model.bayes_threshold();
        const McEstimate rt = mc_risk(tc, ThresholdRule::fixed(t_b));
        const double ri = risk_det(model, t_b);
        const bool ok = std::fabs(rt.mean - ri) <= 3.0 * rt.se;
        all_pass = all_pass && ok;
        lines.push_back({"risk_transductive_bayes", rt.mean, rt.se});
        lines.push_back({"risk_inductive_bayes", ri, 0.0});
        out << "transductive_vs_inductive: " << verdict(ok) << " rt=" << format_double(rt.mean)
            << " ri=" << format_double(ri) << " se=" << format_double(rt.se) << '\n';
    }

    if (opts.check_exact) {
        if (opts.m > kExactFdrMaxM) {
            throw CapacityError("exact FDR risk is limited to m <= " + std::to_string(kExactFdrMaxM));
        }
        SimConfig hc = config;
        hc.null_only = false;
        const McEstimate mc = mc_risk_holdout(hc, ThresholdRule::fdr(alpha));
        const double exact = exact_fdr_risk(model, opts.m, alpha).risk;
        const bool ok = std::fabs(mc.mean - exact) <= 3.0 * mc.se;
        all_pass = all_pass && ok;
        lines.push_back({"risk_fdr_exact", exact, 0.0});
        lines.push_back({"risk_fdr_holdout", mc.mean, mc.se});
        out << "exact_vs_mc: " << verdict(ok) << " exact=" << format_double(exact) << " mc=" << format_double(mc.mean)
            << " se=" << format_double(mc.se) << '\n';
    }

    if (opts.profile) {
        const ConcentrationProfile p = concentration_profile(config, alpha);
        lines.push_back({"fdr_threshold_q05", p.q05, kNa});
        lines.push_back({"fdr_threshold_q50", p.q50, kNa});
        lines.push_back({"fdr_threshold_q95", p.q95, kNa});
        lines.push_back({"bfdr_threshold_alpha_pi0", p.bfdr_reference, kNa});
        lines.push_back({"bonferroni_floor", p.floor_reference, kNa});
        lines.push_back({"mean_k_hat", p.mean_k_hat, kNa});
        out << "profile: q05=" << format_double(p.q05) << " q50=" << format_double(p.q50)
            << " q95=" << format_double(p.q95) << " bfdr_ref=" << format_double(p.bfdr_reference)
            << " floor=" << format_double(p.floor_reference) << " mean_k_hat=" << format_double(p.mean_k_hat)
            << '\n';
    }

    if (!opts.output.empty()) {
        std::ofstream file(opts.output, std::ios::binary);
        if (!file) {
            throw Error("cannot write " + opts.output);
        }
        file << "# seed=" << opts.seed << '\n';
        file << "family,zeta,m,beta,C,rule,alpha_rule,alpha,risk_kind,replicates,quantity,estimate,se\n";
        for (const Line& l : lines) {
            file << fam.name << ',' << format_double(fam.shape.zeta()) << ',' << opts.m << ',' << format_double(beta)
                 << ',' << format_double(model.power()) << ',' << opts.rule << ',' << alpha_rule << ','
                 << format_double(alpha) << ',' << to_string(config.risk_kind) << ',' << opts.replicates << ','
                 << l.quantity << ',' << format_double(l.estimate) << ',' << format_double(l.se) << '\n';
        }
        if (!file) {
            throw Error("cannot write " + opts.output);
        }
    }
    return all_pass ? 0 : 3;
}

} // namespace fdrclass::cli
