#include "fdrclass/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fdrclass/error.hpp"
#include "fdrclass/format.hpp"
#include "roots.hpp"

namespace fdrclass {

namespace {

void require_level(double alpha, const char* what)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError(std::string(what) + ": alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
}

void require_opt_args(std::size_t m, double beta0, double power0)
{
    if (m < 2) {
        throw DomainError("alpha_opt: m must be >= 2");
    }
    if (!(beta0 > 0.0 && beta0 <= 1.0)) {
        throw DomainError("alpha_opt: beta0 must lie in (0, 1]");
    }
    if (!(power0 > 0.0 && power0 < 1.0)) {
        throw DomainError("alpha_opt: C0 must lie in (0, 1)");
    }
}

// alpha k / m, the BH critical value shared by the p-value and statistic paths.
double critical_value(double alpha, std::size_t k, std::size_t m)
{
    return alpha * static_cast<double>(k) / static_cast<double>(m);
}

// Root above 1 of a convex function that is negative at 1.
template <class F>
double root_above_one(F&& h, const char* what)
{
    const double lo = 1.0;
    const double flo = h(lo);
    double hi = 2.0;
    double fhi = h(hi);
    for (int i = 0; fhi < 0.0; ++i) {
        if (i == 1000) {
            throw SolverError(std::string(what) + ": root not bracketed");
        }
        hi *= 2.0;
        fhi = h(hi);
    }
    return detail::solve_bracketed(h, lo, hi, flo, fhi, what);
}

} // namespace

std::string_view to_string(Provenance p) noexcept
{
    switch (p) {
    case Provenance::Bayes:
        return "Bayes";
    case Provenance::Bfdr:
        return "BFDR";
    case Provenance::Bh:
        return "BH";
    case Provenance::Fdr:
        return "FDR";
    case Provenance::Bonferroni:
        return "Bonferroni";
    }
    return "?";
}

std::string_view to_string(Family f) noexcept
{
    switch (f) {
    case Family::GaussianLocation:
        return "gaussian-location";
    case Family::GaussianScale:
        return "gaussian-scale";
    case Family::LaplaceScale:
        return "laplace-scale";
    }
    return "?";
}

Family parse_family(std::string_view text)
{
    for (Family f : {Family::GaussianLocation, Family::GaussianScale, Family::LaplaceScale}) {
        if (text == to_string(f)) {
            return f;
        }
    }
    throw DomainError("unknown family '" + std::string(text) + "'");
}

ModelKind kind_of(Family f) noexcept
{
    return f == Family::GaussianLocation ? ModelKind::Location : ModelKind::Scale;
}

SubbotinShape shape_of(Family f)
{
    return SubbotinShape(f == Family::LaplaceScale ? 1.0 : 2.0);
}

// LevelChoice ----------------------------------------------------------------

LevelChoice::LevelChoice(double alpha, std::optional<double> beta0, double power0)
    : alpha_(alpha)
    , beta0_(beta0)
    , power0_(power0)
{
}

LevelChoice LevelChoice::fixed(double alpha)
{
    require_level(alpha, "LevelChoice");
    return LevelChoice(alpha, std::nullopt, 0.0);
}

LevelChoice LevelChoice::opt_at(double beta0, double power0)
{
    require_opt_args(2, beta0, power0);
    return LevelChoice(0.0, beta0, power0);
}

double LevelChoice::resolve(ModelKind kind, const SubbotinShape& shape, std::size_t m) const
{
    if (is_fixed()) {
        return alpha_;
    }
    if (kind == ModelKind::Location && shape.is_gaussian()) {
        return alpha_opt(Family::GaussianLocation, m, *beta0_, power0_);
    }
    if (kind == ModelKind::Scale && shape.is_gaussian()) {
        return alpha_opt(Family::GaussianScale, m, *beta0_, power0_);
    }
    if (kind == ModelKind::Scale && shape.is_laplace()) {
        return alpha_opt(Family::LaplaceScale, m, *beta0_, power0_);
    }
    return alpha_opt(kind, shape, m, *beta0_, power0_);
}

std::string LevelChoice::label() const
{
    if (is_fixed()) {
        return format_double(alpha_);
    }
    return "opt(" + format_double(*beta0_) + ";" + format_double(power0_) + ")";
}

// Deterministic thresholds ---------------------------------------------------

ThresholdResult bayes_threshold(const ModelSpec& model)
{
    return {model.bayes_threshold(), Provenance::Bayes, std::nullopt, std::nullopt};
}

ThresholdResult bfdr_threshold(const ModelSpec& model, double alpha)
{
    if (!(alpha > 0.0 && alpha < model.pi0())) {
        throw LevelError("bfdr_threshold: alpha must lie in (0, pi0 = " + std::to_string(model.pi0()) +
                         "), got " + std::to_string(alpha));
    }
    const double q = 1.0 / alpha - 1.0;
    return {model.inverse_psi(q * model.tau()), Provenance::Bfdr, std::nullopt, std::nullopt};
}

double bfdr_of(const ModelSpec& model, double t)
{
    return 1.0 / (1.0 + model.psi_ratio(t) / model.tau());
}

double q_opt(const ModelSpec& model)
{
    return model.power() / (model.tau() * model.bayes_threshold());
}

double alpha_opt(Family family, std::size_t m, double beta0, double power0)
{
    require_opt_args(m, beta0, power0);
    const double log_m = std::log(static_cast<double>(m));
    const SubbotinShape gauss(2.0);
    double q = 0.0;
    switch (family) {
    case Family::GaussianLocation: {
        const double zc = quantile(gauss, power0);
        const double inv = upper_tail(gauss, std::sqrt(zc * zc + 2.0 * beta0 * log_m));
        q = std::exp(-beta0 * log_m) * power0 / inv;
        break;
    }
    case Family::GaussianScale: {
        const double zc = quantile(gauss, 0.5 * power0);
        auto h = [&](double x) { return zc * zc * (x * x - 1.0) - 2.0 * std::log(x) - 2.0 * beta0 * log_m; };
        const double x = root_above_one(h, "alpha_opt(gaussian-scale)");
        const double inv = 2.0 * upper_tail(gauss, zc * x);
        q = std::exp(-beta0 * log_m) * power0 / inv;
        break;
    }
    case Family::LaplaceScale: {
        const double rate = -std::log(power0);
        auto h = [&](double y) { return (y - 1.0) * rate - std::log(y) - beta0 * log_m; };
        q = root_above_one(h, "alpha_opt(laplace-scale)");
        break;
    }
    }
    return 1.0 / (1.0 + q);
}

double alpha_opt(ModelKind kind, const SubbotinShape& shape, std::size_t m, double beta0, double power0)
{
    require_opt_args(m, beta0, power0);
    const ModelSpec model = calibrate(kind, shape, CanonicalParams::from_beta(beta0, power0), m);
    return 1.0 / (1.0 + q_opt(model));
}

// Empirical thresholds -------------------------------------------------------

ThresholdResult bh_threshold(std::span<const double> pvalues, double alpha)
{
    require_level(alpha, "bh_threshold");
    if (pvalues.empty()) {
        throw DomainError("bh_threshold: no observations");
    }
    std::vector<double> sorted(pvalues.begin(), pvalues.end());
    for (double p : sorted) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw DomainError("bh_threshold: p-values must lie in [0, 1], got " + std::to_string(p));
        }
    }
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    std::size_t k_hat = 0;
    for (std::size_t k = m; k >= 1; --k) {
        if (sorted[k - 1] <= critical_value(alpha, k, m)) {
            k_hat = k;
            break;
        }
    }
    return {critical_value(alpha, k_hat, m), Provenance::Bh, k_hat, std::nullopt};
}

ThresholdResult fdr_threshold(std::span<const double> pvalues, double alpha)
{
    ThresholdResult bh = bh_threshold(pvalues, alpha);
    const double floor = critical_value(alpha, 1, pvalues.size());
    return {std::max(bh.value, floor), Provenance::Fdr, bh.k_hat, std::nullopt};
}

ThresholdResult fdr_threshold_stats(std::span<const double> stats, ModelKind kind, const SubbotinShape& shape,
                                    double alpha)
{
    require_level(alpha, "fdr_threshold_stats");
    if (stats.empty()) {
        throw DomainError("fdr_threshold_stats: no observations");
    }
    std::vector<double> sorted;
    sorted.reserve(stats.size());
    for (double x : stats) {
        if (!std::isfinite(x)) {
            throw DomainError("fdr_threshold_stats: statistics must be finite");
        }
        sorted.push_back(kind == ModelKind::Scale ? std::fabs(x) : x);
    }
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    const std::size_t m = sorted.size();
    auto cutoff = [&](std::size_t k) {
        const double level = critical_value(alpha, k, m);
        return quantile(shape, kind == ModelKind::Scale ? 0.5 * level : level);
    };
    std::size_t k_hat = 0;
    for (std::size_t k = m; k >= 1; --k) {
        if (sorted[k - 1] >= cutoff(k)) {
            k_hat = k;
            break;
        }
    }
    // An empty crossing set falls back to k = 1, the Bonferroni cutoff.
    const std::size_t k_used = std::max<std::size_t>(k_hat, 1);
    return {critical_value(alpha, k_used, m), Provenance::Fdr, k_hat, cutoff(k_used)};
}

} // namespace fdrclass
