#include "fdrclass/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fdrclass/error.hpp"

namespace fdrclass {

namespace {

using Real = long double;

void require_level(double alpha, const char* what)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError(std::string(what) + ": alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
}

double positive_part(double x)
{
    return x > 0.0 ? x : 0.0;
}

// log(n!) for n = 0..size-1.
std::vector<Real> log_factorials(std::size_t size)
{
    std::vector<Real> out(size);
    for (std::size_t n = 0; n < size; ++n) {
        out[n] = std::lgamma(static_cast<Real>(n) + 1.0L);
    }
    return out;
}

// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(Real x)
    {
        const Real t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    Real value() const { return sum_ + comp_; }

private:
    Real sum_ = 0.0L;
    Real comp_ = 0.0L;
};

// Steck's recursion written on the complements a_{k+1} = 1 - s_{k+1}, so
// that bounds close to 1 keep their relative accuracy. Subtractive: the
// absolute error grows like the largest C(j,k) a^{j-k}, which is
// astronomically large for long sequences of bounds well below 1.
std::vector<Real> steck_complementary(std::span<const Real> complements)
{
    const std::size_t n = complements.size();
    const std::vector<Real> lf = log_factorials(n + 1);
    std::vector<Real> log_a(n);
    for (std::size_t i = 0; i < n; ++i) {
        log_a[i] = std::log(complements[i]);
    }
    std::vector<Real> psi(n + 1, 0.0L);
    psi[0] = 1.0L;
    for (std::size_t j = 1; j <= n; ++j) {
        CompensatedSum crossed;
        for (std::size_t k = 0; k < j; ++k) {
            if (psi[k] == 0.0L || complements[k] == 0.0L) {
                continue;
            }
            const Real log_w = lf[j] - lf[k] - lf[j - k] + static_cast<Real>(j - k) * log_a[k];
            crossed.add(psi[k] * std::exp(log_w));
        }
        psi[j] = std::clamp(1.0L - crossed.value(), 0.0L, 1.0L);
    }
    return psi;
}

// Binomial weights below this are dropped; P_j(c) keeps absolute accuracy
// near 1e-28, which bounds the error of each rejection-count probability.
constexpr Real kNegligible = 1e-30L;

// log Psi_j, j = 0..n, from the complements a_j = 1 - s_j.
//
// P_j(c) is the probability that c i.i.d. uniforms on [0, s_j] satisfy
// N(s_i) >= i for every i <= j, where N counts points. Of c points in
// [0, s_j], the number falling in [0, s_{j-1}] is Binomial(c, s_{j-1}/s_j),
// so P_j(c) is a binomial mixture of P_{j-1}: every term is nonnegative and
// every weight is at most 1. Then Psi_j = s_j^j P_j(j).
std::vector<Real> log_steck_positive(std::span<const Real> complements)
{
    const std::size_t n = complements.size();
    const Real neg_inf = -std::numeric_limits<Real>::infinity();
    std::vector<Real> log_psi(n + 1, neg_inf);
    log_psi[0] = 0.0L;
    if (n == 0) {
        return log_psi;
    }
    const std::vector<Real> lf = log_factorials(n + 1);

    std::vector<Real> prev(n + 1, 0.0L);
    std::vector<Real> next(n + 1, 0.0L);
    // j = 1: any c >= 1 points in [0, s_1] have N(s_1) = c >= 1.
    for (std::size_t c = 1; c <= n; ++c) {
        prev[c] = 1.0L;
    }
    auto record = [&](std::size_t j, const std::vector<Real>& p) {
        const Real s = 1.0L - complements[j - 1];
        if (s <= 0.0L || p[j] <= 0.0L) {
            return;
        }
        log_psi[j] = std::log(p[j]) + static_cast<Real>(j) * std::log1p(-complements[j - 1]);
    };
    record(1, prev);

    for (std::size_t j = 2; j <= n; ++j) {
        const Real s_prev = 1.0L - complements[j - 2];
        const Real s_cur = 1.0L - complements[j - 1];
        std::fill(next.begin(), next.end(), 0.0L);
        if (s_cur <= 0.0L) {
            // Every later bound is 0 too; all remaining Psi vanish.
            break;
        }
        const Real moved = (complements[j - 2] - complements[j - 1]) / s_cur; // 1 - s_prev/s_cur
        if (moved <= 0.0L) {
            for (std::size_t c = j; c <= n; ++c) {
                next[c] = prev[c];
            }
        } else if (s_prev <= 0.0L) {
            // Nothing can sit in [0, s_{j-1}] = {0}: N(s_{j-1}) >= j-1 fails.
            break;
        } else {
            const Real log_moved = std::log(moved);
            const Real log_kept = std::log1p(-moved);
            const Real odds = moved / (1.0L - moved);
            for (std::size_t c = j; c <= n; ++c) {
                // d = points landing in (s_{j-1}, s_j]; need c - d >= j - 1.
                const std::size_t d_max = c - (j - 1);
                std::size_t d0 = static_cast<std::size_t>(std::floor(static_cast<Real>(c + 1) * moved));
                d0 = std::min(d0, d_max);
                const Real log_mode = lf[c] - lf[d0] - lf[c - d0] + static_cast<Real>(d0) * log_moved +
                                      static_cast<Real>(c - d0) * log_kept;
                const Real w0 = std::exp(log_mode);
                Real acc = w0 * prev[c - d0];
                Real w = w0;
                for (std::size_t d = d0; d < d_max; ++d) {
                    w *= static_cast<Real>(c - d) / static_cast<Real>(d + 1) * odds;
                    if (w < kNegligible) {
                        break;
                    }
                    acc += w * prev[c - d - 1];
                }
                w = w0;
                for (std::size_t d = d0; d > 0; --d) {
                    w *= static_cast<Real>(d) / static_cast<Real>(c - d + 1) / odds;
                    if (w < kNegligible) {
                        break;
                    }
                    acc += w * prev[c - d + 1];
                }
                next[c] = std::min(acc, 1.0L);
            }
        }
        std::swap(prev, next);
        record(j, prev);
    }
    return log_psi;
}

std::vector<Real> checked_complements(std::span<const double> bounds)
{
    std::vector<Real> complements;
    complements.reserve(bounds.size());
    double previous = 0.0;
    for (double s : bounds) {
        if (!(s >= 0.0 && s <= 1.0)) {
            throw DomainError("steck_prefix: bounds must lie in [0, 1]");
        }
        if (s < previous) {
            throw DomainError("steck_prefix: bounds must be nondecreasing");
        }
        previous = s;
        complements.push_back(1.0L - static_cast<Real>(s));
    }
    return complements;
}

} // namespace

void BoundParams::validate() const
{
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw HypothesisError("bound parameters: epsilon must lie in (0, 1)");
    }
    if (!(nu > 0.0 && nu < 1.0)) {
        throw HypothesisError("bound parameters: nu must lie in (0, 1)");
    }
    if (!(lambda >= 1.0) || !std::isfinite(lambda)) {
        throw HypothesisError("bound parameters: lambda must be >= 1");
    }
}

double risk_det(const ModelSpec& model, double t)
{
    return model.pi0() * t + model.pi1() * (1.0 - model.alt_cdf(t));
}

double risk_weighted(const ModelSpec& model, double t, double lambda)
{
    if (!(lambda >= 1.0 && lambda < model.tau())) {
        throw DomainError("risk_weighted: lambda must lie in [1, tau), got " + std::to_string(lambda));
    }
    return model.pi0() * t + lambda * model.pi1() * (1.0 - model.alt_cdf(t));
}

double weighted_bayes_threshold(const ModelSpec& model, double lambda)
{
    if (!(lambda >= 1.0 && lambda < model.tau())) {
        throw DomainError("weighted_bayes_threshold: lambda must lie in [1, tau)");
    }
    return model.inverse_alt_pdf(model.tau() / lambda);
}

double excess(double risk, double bayes_risk)
{
    if (!(bayes_risk > 0.0)) {
        throw DomainError("excess: Bayes risk must be positive");
    }
    return (risk - bayes_risk) / bayes_risk;
}

RiskReport make_report(const ModelSpec& model, double risk, Provenance procedure)
{
    RiskReport report;
    report.risk = risk;
    report.bayes_risk = risk_det(model, model.bayes_threshold());
    report.excess_rel = excess(risk, report.bayes_risk);
    report.procedure = procedure;
    return report;
}

std::vector<double> steck_prefix(std::span<const double> bounds)
{
    const std::vector<Real> log_psi = log_steck_positive(checked_complements(bounds));
    std::vector<double> out(log_psi.size());
    for (std::size_t j = 0; j < log_psi.size(); ++j) {
        out[j] = static_cast<double>(std::clamp(std::exp(log_psi[j]), 0.0L, 1.0L));
    }
    return out;
}

std::vector<double> steck_prefix_complementary(std::span<const double> bounds)
{
    const std::vector<Real> psi = steck_complementary(checked_complements(bounds));
    return {psi.begin(), psi.end()};
}

std::vector<double> fdr_rejection_distribution(const ModelSpec& model, std::size_t m, double alpha)
{
    require_level(alpha, "fdr_rejection_distribution");
    if (m == 0) {
        throw DomainError("fdr_rejection_distribution: m must be >= 1");
    }
    if (m > kExactFdrMaxM) {
        throw CapacityError("exact FDR risk is capped at m = " + std::to_string(kExactFdrMaxM) + ", got m = " +
                            std::to_string(m));
    }
    // u[i] = G(alpha i / m), i = 0..m.
    std::vector<Real> u(m + 1, 0.0L);
    for (std::size_t i = 1; i <= m; ++i) {
        u[i] = model.mixture_cdf(alpha * static_cast<double>(i) / static_cast<double>(m));
    }
    // Shared bounds s_j = 1 - u[m - j + 1]; their complements are u reversed.
    std::vector<Real> complements(m);
    for (std::size_t j = 1; j <= m; ++j) {
        complements[j - 1] = u[m - j + 1];
    }
    const std::vector<Real> log_psi = log_steck_positive(complements);
    const std::vector<Real> lf = log_factorials(m + 1);

    std::vector<double> dist(m + 1, 0.0);
    for (std::size_t k = 0; k <= m; ++k) {
        if (!std::isfinite(log_psi[m - k])) {
            continue;
        }
        Real log_w = lf[m] - lf[k] - lf[m - k] + log_psi[m - k];
        if (k > 0) {
            log_w += static_cast<Real>(k) * std::log(u[k]);
        }
        dist[k] = static_cast<double>(std::exp(log_w));
    }
    return dist;
}

RiskReport exact_fdr_risk(const ModelSpec& model, std::size_t m, double alpha)
{
    const std::vector<double> dist = fdr_rejection_distribution(model, m, alpha);
    CompensatedSum total;
    for (std::size_t k = 0; k <= m; ++k) {
        if (dist[k] == 0.0) {
            continue;
        }
        const double t = alpha * static_cast<double>(std::max<std::size_t>(k, 1)) / static_cast<double>(m);
        total.add(static_cast<Real>(dist[k]) * static_cast<Real>(risk_det(model, t)));
    }
    const double risk = std::clamp(static_cast<double>(total.value()), 0.0, 1.0);
    return make_report(model, risk, Provenance::Fdr);
}

Rates rates(const ModelSpec& model)
{
    const SubbotinShape& shape = model.shape();
    const double z = shape.zeta();
    const double log_tau = std::log(model.tau());
    if (model.kind() == ModelKind::Location) {
        const double zc = quantile(shape, model.power());
        const double r = std::pow(z * log_tau + std::pow(std::fabs(zc), z), 1.0 - 1.0 / z);
        return {r, density(shape, 0.0)};
    }
    const double zc = quantile(shape, 0.5 * model.power());
    return {z * log_tau + std::pow(zc, z), 2.0 * zc * density(shape, zc)};
}

double bfdr_excess_identity(const ModelSpec& model, double alpha)
{
    const double q = 1.0 / alpha - 1.0;
    const double t_star = bfdr_threshold(model, alpha).value;
    const double c = model.power();
    return model.pi1() * c / q - model.pi0() * model.bayes_threshold() +
           model.pi1() * (1.0 - 1.0 / q) * (c - model.alt_cdf(t_star));
}

double bound_thm31_upper(const ModelSpec& model, double alpha)
{
    if (!(alpha > 0.0 && alpha <= 0.5)) {
        throw HypothesisError("bound_thm31_upper: requires alpha in (0, 1/2], got " + std::to_string(alpha));
    }
    const double q = 1.0 / alpha - 1.0;
    const double c = model.power();
    const double t_star = bfdr_threshold(model, alpha).value;
    const double gamma = positive_part(c - model.alt_cdf(t_star));
    return model.pi1() * std::max(c / q - c / q_opt(model), gamma);
}

double bound_thm31_lower(const ModelSpec& model, double alpha)
{
    if (!(alpha > 0.0 && alpha < model.pi0())) {
        throw HypothesisError("bound_thm31_lower: requires alpha in (0, pi0)");
    }
    const double q = 1.0 / alpha - 1.0;
    const double bayes_risk = risk_det(model, model.bayes_threshold());
    const double t = std::min(1.0, 1.0 / (q * model.tau()));
    return model.pi1() / bayes_risk * (1.0 - positive_part(1.0 - 1.0 / q) * model.alt_cdf(t));
}

double bound_thm32_upper(const ModelSpec& model, std::size_t m, double alpha, const BoundParams& params)
{
    params.validate();
    if (m < 2) {
        throw HypothesisError("bound_thm32_upper: requires m >= 2");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw HypothesisError("bound_thm32_upper: requires alpha in (0, 1)");
    }
    const double eps = params.epsilon;
    const double c = model.power();
    const double pi1 = model.pi1();
    const double md = static_cast<double>(m);
    const double q_eps = 1.0 / (alpha * model.pi0() * (1.0 - eps)) - 1.0;
    const double gamma_eps = positive_part(c - model.alt_cdf(model.inverse_psi(q_eps * model.tau())));
    const double gamma_bonf = positive_part(c - model.alt_cdf(alpha / md));
    const double concentration =
        gamma_eps + std::exp(-md * eps * eps / (model.tau() + 1.0) * (c - gamma_eps) / 4.0);
    return pi1 * alpha / (1.0 - alpha) + alpha / (md * (1.0 - alpha) * (1.0 - alpha)) +
           pi1 * std::min(gamma_bonf, concentration);
}

std::optional<double> bound_cor41(const ModelSpec& model, std::size_t m, double alpha, const BoundParams& params,
                                  BoundTarget which)
{
    params.validate();
    if (m < 2 || !(alpha > 0.0 && alpha < 0.5)) {
        return std::nullopt;
    }
    const auto [r, k_const] = rates(model);
    const double c = model.power();
    const double pi1 = model.pi1();
    const double qo = q_opt(model);
    const double nu = params.nu;
    const double gate = k_const / (c * (1.0 - nu));

    if (which == BoundTarget::Bfdr) {
        const double q = 1.0 / alpha - 1.0;
        const double log_term = std::log(q / qo) - std::log(nu);
        if (r < gate * log_term) {
            return std::nullopt;
        }
        return pi1 * std::max(c / q - c / qo, k_const * log_term / r);
    }

    const double md = static_cast<double>(m);
    const double d_a = params.case_a == FdrBoundCase::A1
                           ? -std::log(nu * model.pi0() * (1.0 - params.epsilon))
                           : std::log(c * md / (nu * model.tau()));
    const double log_term = std::log(1.0 / (alpha * qo)) + d_a;
    if (r < gate * log_term) {
        return std::nullopt;
    }
    double value = pi1 * (alpha / (1.0 - alpha) + k_const * positive_part(log_term) / r) +
                   (alpha / md) / ((1.0 - alpha) * (1.0 - alpha));
    if (params.case_a == FdrBoundCase::A1) {
        value += pi1 * std::exp(-md / (model.tau() + 1.0) * nu * params.epsilon * params.epsilon * c / 4.0);
    }
    return value;
}

double rho_rate(std::size_t m, double alpha, double gamma_exponent)
{
    if (m < 3) {
        throw DomainError("rho_rate: m must be >= 3");
    }
    require_level(alpha, "rho_rate");
    if (!(gamma_exponent > 0.0)) {
        throw DomainError("rho_rate: gamma must be positive");
    }
    const double scale = std::pow(std::log(static_cast<double>(m)), gamma_exponent);
    return alpha + positive_part(std::log(1.0 / (alpha * scale))) / scale;
}

double rate_exponent(ModelKind kind, const SubbotinShape& shape)
{
    return kind == ModelKind::Location ? 1.0 - 1.0 / shape.zeta() : 1.0;
}

} // namespace fdrclass
