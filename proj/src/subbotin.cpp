#include "fdrclass/subbotin.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "fdrclass/error.hpp"

namespace fdrclass {

namespace {

constexpr double kLogHalf = -std::numbers::ln2;

// Beyond this incomplete-gamma argument Q(a, x) is evaluated in log space.
constexpr double kLogSpaceArgument = 600.0;

void require_finite(double x, const char* what)
{
    if (!std::isfinite(x)) {
        throw DomainError(std::string(what) + ": argument must be finite");
    }
}

// log Q(a, x) by the Legendre continued fraction (modified Lentz).
// Valid and fast for x > a + 1, which is the only place it is used.
double log_gamma_q_cf(double a, double x)
{
    constexpr double tiny = 1e-300;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::fabs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) {
            break;
        }
    }
    return -x + a * std::log(x) - std::lgamma(a) + std::log(h);
}

// Tail for u >= 0.
double positive_tail(const SubbotinShape& shape, double u)
{
    if (shape.is_laplace()) {
        return 0.5 * std::exp(-u);
    }
    if (shape.is_gaussian()) {
        return 0.5 * std::erfc(u / std::numbers::sqrt2);
    }
    const double z = shape.zeta();
    return 0.5 * boost::math::gamma_q(1.0 / z, std::pow(u, z) / z);
}

double positive_log_tail(const SubbotinShape& shape, double u)
{
    if (shape.is_laplace()) {
        return kLogHalf - u;
    }
    const double z = shape.zeta();
    const double x = std::pow(u, z) / z;
    if (x < kLogSpaceArgument) {
        return std::log(positive_tail(shape, u));
    }
    return kLogHalf + log_gamma_q_cf(1.0 / z, x);
}

// Newton polish of u against log D(u) = log_p; log D is concave, so the
// iterates settle monotonically once they pass the root.
double polish_quantile(const SubbotinShape& shape, double u, double log_p)
{
    for (int i = 0; i < 60; ++i) {
        const double lt = positive_log_tail(shape, u);
        const double slope = -std::exp(log_density(shape, u) - lt);
        const double step = (lt - log_p) / slope;
        u -= step;
        if (u < 0.0) {
            u = 0.0;
        }
        if (std::fabs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::fmax(u, 1.0)) {
            break;
        }
    }
    return u;
}

// D^{-1}(p) for p in (0, 1/2).
double lower_half_quantile(const SubbotinShape& shape, double p)
{
    if (shape.is_laplace()) {
        return -std::log(2.0 * p);
    }
    if (shape.is_gaussian()) {
        return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
    }
    const double z = shape.zeta();
    const double x = boost::math::gamma_q_inv(1.0 / z, 2.0 * p);
    return polish_quantile(shape, std::pow(z * x, 1.0 / z), std::log(p));
}

} // namespace

SubbotinShape::SubbotinShape(double zeta)
    : zeta_(zeta)
{
    if (!std::isfinite(zeta) || zeta < 1.0) {
        throw DomainError("SubbotinShape: zeta must be >= 1, got " + std::to_string(zeta));
    }
    log_normalizer_ = std::numbers::ln2 + std::lgamma(1.0 / zeta) + (1.0 / zeta - 1.0) * std::log(zeta);
}

double SubbotinShape::normalizer() const noexcept
{
    return std::exp(log_normalizer_);
}

double log_density(const SubbotinShape& shape, double x)
{
    require_finite(x, "density");
    const double z = shape.zeta();
    return -std::pow(std::fabs(x), z) / z - shape.log_normalizer();
}

double density(const SubbotinShape& shape, double x)
{
    return std::exp(log_density(shape, x));
}

double upper_tail(const SubbotinShape& shape, double u)
{
    require_finite(u, "upper_tail");
    if (u < 0.0) {
        return 1.0 - positive_tail(shape, -u);
    }
    return positive_tail(shape, u);
}

double log_upper_tail(const SubbotinShape& shape, double u)
{
    require_finite(u, "log_upper_tail");
    if (u < 0.0) {
        return std::log1p(-positive_tail(shape, -u));
    }
    return positive_log_tail(shape, u);
}

double upper_tail_general(const SubbotinShape& shape, double u)
{
    require_finite(u, "upper_tail_general");
    const double z = shape.zeta();
    const double half_q = 0.5 * boost::math::gamma_q(1.0 / z, std::pow(std::fabs(u), z) / z);
    return u < 0.0 ? 1.0 - half_q : half_q;
}

double quantile(const SubbotinShape& shape, double p)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("quantile: p must lie in (0, 1), got " + std::to_string(p));
    }
    if (p == 0.5) {
        return 0.0;
    }
    if (p < 0.5) {
        return lower_half_quantile(shape, p);
    }
    return -lower_half_quantile(shape, 1.0 - p);
}

double quantile_log(const SubbotinShape& shape, double log_p)
{
    if (std::isnan(log_p) || log_p > kLogHalf) {
        throw DomainError("quantile_log: log p must be <= log(1/2)");
    }
    if (log_p == kLogHalf) {
        return 0.0;
    }
    if (log_p > std::log(1e-300)) {
        return lower_half_quantile(shape, std::exp(log_p));
    }
    if (shape.is_laplace()) {
        return kLogHalf - log_p;
    }
    const double z = shape.zeta();
    return polish_quantile(shape, std::pow(-z * log_p, 1.0 / z), log_p);
}

double quantile_general(const SubbotinShape& shape, double p)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("quantile_general: p must lie in (0, 1)");
    }
    if (p == 0.5) {
        return 0.0;
    }
    const double z = shape.zeta();
    const double tail = p < 0.5 ? p : 1.0 - p;
    const double x = boost::math::gamma_q_inv(1.0 / z, 2.0 * tail);
    const double u = std::pow(z * x, 1.0 / z);
    return p < 0.5 ? u : -u;
}

} // namespace fdrclass
