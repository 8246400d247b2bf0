#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <string_view>

#include <fdrclass/error.hpp>
#include <fdrclass/format.hpp>
#include <fdrclass/model.hpp>
#include <fdrclass/risk.hpp>
#include <fdrclass/threshold.hpp>

#include "cli.hpp"

namespace fdrclass::cli {

namespace {

constexpr double kNa = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<double> read_values(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read " + path);
    }
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty()) {
            continue;
        }
        double x = 0.0;
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
        if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(x)) {
            throw Error(path + ":" + std::to_string(line_no) + ": not a number: '" + std::string(text) + "'");
        }
        values.push_back(x);
    }
    if (values.empty()) {
        throw Error("no observations in " + path);
    }
    return values;
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path);
    }
    return out;
}

void print(std::ostream& out, std::string_view key, double value)
{
    out << key << ": " << format_double(value) << '\n';
}

template <class F>
double or_na(F&& f)
{
    try {
        return f();
    } catch (const Error&) {
        return kNa;
    }
}

} // namespace

int run_classify(const ClassifyOptions& opts, std::ostream& out)
{
    const std::vector<LevelChoice> levels = resolve_levels(opts.level, std::nullopt);
    if (levels.size() != 1) {
        throw DomainError("classify takes a single level: --alpha or --alpha-opt");
    }
    const std::vector<double> values = read_values(opts.input);
    const std::size_t m = values.size();

    ResolvedFamily fam{"", ModelKind::Location, SubbotinShape(2.0)};
    const bool need_family = !opts.pvalues || !levels[0].is_fixed();
    if (need_family) {
        fam = resolve_family(opts.family);
    }
    if (!levels[0].is_fixed() && m < 2) {
        throw DomainError("--alpha-opt needs at least two observations");
    }
    const double alpha = levels[0].resolve(fam.kind, fam.shape, m);

    std::vector<double> pvalues(m);
    std::vector<int> labels(m);
    ThresholdResult result;
    if (opts.pvalues) {
        for (std::size_t i = 0; i < m; ++i) {
            if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
                throw DomainError("p-value on observation " + std::to_string(i + 1) + " is outside [0, 1]");
            }
        }
        pvalues = values;
        result = fdr_threshold(pvalues, alpha);
        for (std::size_t i = 0; i < m; ++i) {
            labels[i] = pvalues[i] <= result.value ? 1 : 0;
        }
    } else {
        result = fdr_threshold_stats(values, fam.kind, fam.shape, alpha);
        for (std::size_t i = 0; i < m; ++i) {
            pvalues[i] = standardize(fam.kind, fam.shape, values[i]);
            const double x = fam.kind == ModelKind::Scale ? std::fabs(values[i]) : values[i];
            labels[i] = x >= *result.statistic ? 1 : 0;
        }
    }

    std::ofstream file = open_output(opts.output);
    file << "index,value,pvalue,label\n";
    std::size_t ones = 0;
    for (std::size_t i = 0; i < m; ++i) {
        file << i + 1 << ',' << format_double(values[i]) << ',' << format_double(pvalues[i]) << ',' << labels[i]
             << '\n';
        ones += static_cast<std::size_t>(labels[i]);
    }
    if (!file) {
        throw Error("cannot write " + opts.output);
    }

    out << "observations: " << m << '\n';
    out << "alpha_rule: " << levels[0].label() << '\n';
    print(out, "alpha", alpha);
    out << "k_hat: " << result.k_hat.value_or(0) << '\n';
    print(out, "threshold_pvalue", result.value);
    print(out, "threshold_statistic", result.statistic.value_or(kNa));
    out << "labelled_1: " << ones << '\n';
    return 0;
}

int run_risk(const RiskOptions& opts, std::ostream& out)
{
    const ResolvedFamily fam = resolve_family(opts.model.family);
    const CanonicalParams params = resolve_params(opts.model);
    const std::vector<LevelChoice> levels = resolve_levels(opts.level, std::nullopt);
    if (levels.size() != 1) {
        throw DomainError("risk takes a single level: --alpha or --alpha-opt");
    }
    if (opts.m < 1) {
        throw DomainError("--m must be >= 1");
    }
    if (opts.exact_fdr && opts.m > kExactFdrMaxM) {
        throw CapacityError("exact FDR risk is limited to m <= " + std::to_string(kExactFdrMaxM) + ", got m = " +
                            std::to_string(opts.m));
    }
    BoundParams bp;
    bp.epsilon = opts.epsilon;
    bp.nu = opts.nu;
    bp.case_a = opts.case_a == 2 ? FdrBoundCase::A2 : FdrBoundCase::A1;
    bp.lambda = opts.lambda;
    if (opts.case_a != 1 && opts.case_a != 2) {
        throw DomainError("--case-a must be 1 or 2");
    }
    bp.validate();

    const ModelSpec model = calibrate(fam.kind, fam.shape, params, opts.m);
    const LevelChoice& level = levels[0];
    const double alpha = level.resolve(fam.kind, fam.shape, opts.m);
    const double tau = model.tau();
    const double beta = opts.m > 1 ? std::log(tau) / std::log(static_cast<double>(opts.m)) : kNa;
    const double bayes_risk = risk_det(model, model.bayes_threshold());

    out << "family: " << fam.name << '\n';
    print(out, "zeta", fam.shape.zeta());
    out << "kind: " << to_string(fam.kind) << '\n';
    out << "m: " << opts.m << '\n';
    print(out, "tau", tau);
    print(out, "beta", beta);
    print(out, "C", model.power());
    print(out, fam.kind == ModelKind::Location ? "mu" : "sigma", model.effect());
    print(out, "pi0", model.pi0());
    print(out, "pi1", model.pi1());
    print(out, "bayes_threshold", model.bayes_threshold());
    print(out, "bayes_risk", bayes_risk);
    print(out, "q_opt", q_opt(model));
    print(out, "alpha_opt_true", 1.0 / (1.0 + q_opt(model)));
    out << "alpha_rule: " << level.label() << '\n';
    print(out, "alpha", alpha);
    print(out, "q", 1.0 / alpha - 1.0);

    const double t_star = or_na([&] { return bfdr_threshold(model, alpha).value; });
    const double bfdr_risk = std::isnan(t_star) ? kNa : risk_det(model, t_star);
    const double bfdr_excess = std::isnan(bfdr_risk) ? kNa : excess(bfdr_risk, bayes_risk);
    print(out, "bfdr_threshold", t_star);
    print(out, "bfdr_risk", bfdr_risk);
    print(out, "bfdr_excess_rel", bfdr_excess);

    double fdr_risk = kNa;
    if (opts.m <= kExactFdrMaxM) {
        fdr_risk = exact_fdr_risk(model, opts.m, alpha).risk;
    }
    const double fdr_excess = std::isnan(fdr_risk) ? kNa : excess(fdr_risk, bayes_risk);
    print(out, "fdr_risk", fdr_risk);
    print(out, "fdr_excess_rel", fdr_excess);

    if (opts.lambda > 1.0) {
        const double tw = weighted_bayes_threshold(model, opts.lambda);
        print(out, "weighted_bayes_threshold", tw);
        print(out, "weighted_bayes_risk", risk_weighted(model, tw, opts.lambda));
    }

    const Rates rt = rates(model);
    print(out, "rate_r", rt.r);
    print(out, "rate_K", rt.k);
    print(out, "bound_thm31_upper", or_na([&] { return bound_thm31_upper(model, alpha); }));
    print(out, "bound_thm31_lower_ratio", or_na([&] { return bound_thm31_lower(model, alpha); }));
    print(out, "bound_thm32_upper", or_na([&] { return bound_thm32_upper(model, opts.m, alpha, bp); }));
    print(out, "bound_cor41_bfdr",
          or_na([&] { return bound_cor41(model, opts.m, alpha, bp, BoundTarget::Bfdr).value_or(kNa); }));
    print(out, "bound_cor41_fdr",
          or_na([&] { return bound_cor41(model, opts.m, alpha, bp, BoundTarget::Fdr).value_or(kNa); }));
    if (opts.m >= 3) {
        print(out, "rho_rate", rho_rate(opts.m, alpha, rate_exponent(fam.kind, fam.shape)));
    }

    if (!opts.output.empty()) {
        std::ofstream file = open_output(opts.output);
        file << kRiskCsvHeader << '\n';
        RiskRow row{fam.name, fam.shape.zeta(), opts.m, beta, model.power(), "bayes", "NA",
                    kNa,      bayes_risk,       bayes_risk, 0.0};
        write_risk_row(file, row);
        row.procedure = "bfdr";
        row.alpha_rule = level.label();
        row.alpha = alpha;
        row.risk = bfdr_risk;
        row.excess_rel = bfdr_excess;
        write_risk_row(file, row);
        row.procedure = "fdr";
        row.risk = fdr_risk;
        row.excess_rel = fdr_excess;
        write_risk_row(file, row);
        if (!file) {
            throw Error("cannot write " + opts.output);
        }
    }
    return 0;
}

} // namespace fdrclass::cli
