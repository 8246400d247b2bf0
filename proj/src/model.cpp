#include "fdrclass/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fdrclass/error.hpp"
#include "roots.hpp"

namespace fdrclass {

namespace {

void require_unit_closed(double t, const char* what)
{
    if (!(t >= 0.0 && t <= 1.0)) {
        throw DomainError(std::string(what) + ": t must lie in [0, 1], got " + std::to_string(t));
    }
}

void require_unit_open(double t, const char* what)
{
    if (!(t > 0.0 && t < 1.0)) {
        throw DomainError(std::string(what) + ": t must lie in (0, 1), got " + std::to_string(t));
    }
}

double abs_pow(double x, double z)
{
    return std::pow(std::fabs(x), z);
}

} // namespace

std::string_view to_string(ModelKind kind) noexcept
{
    return kind == ModelKind::Location ? "location" : "scale";
}

ModelKind parse_model_kind(std::string_view text)
{
    if (text == "location") {
        return ModelKind::Location;
    }
    if (text == "scale") {
        return ModelKind::Scale;
    }
    throw DomainError("unknown model kind '" + std::string(text) + "'");
}

// CanonicalParams ------------------------------------------------------------

CanonicalParams::CanonicalParams(std::optional<double> beta, std::optional<double> tau, double power)
    : beta_(beta)
    , tau_(tau)
    , power_(power)
{
    if (!(power > 0.0 && power < 1.0)) {
        throw DomainError("power target C must lie in (0, 1), got " + std::to_string(power));
    }
}

CanonicalParams CanonicalParams::from_beta(double beta, double power)
{
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw DomainError("beta must lie in (0, 1], got " + std::to_string(beta));
    }
    return CanonicalParams(beta, std::nullopt, power);
}

CanonicalParams CanonicalParams::from_tau(double tau, double power)
{
    if (!(tau > 1.0) || !std::isfinite(tau)) {
        throw DomainError("tau must be a finite value > 1, got " + std::to_string(tau));
    }
    return CanonicalParams(std::nullopt, tau, power);
}

double CanonicalParams::tau(std::size_t m) const
{
    if (tau_) {
        return *tau_;
    }
    if (m < 2) {
        throw DomainError("tau = m^beta needs m >= 2");
    }
    return std::pow(static_cast<double>(m), *beta_);
}

// ModelSpec ------------------------------------------------------------------

ModelSpec::ModelSpec(ModelKind kind, SubbotinShape shape, double tau, double effect)
    : kind_(kind)
    , shape_(shape)
    , tau_(tau)
    , effect_(effect)
    , pi0_(tau / (1.0 + tau))
    , pi1_(1.0 / (1.0 + tau))
{
    if (!(tau > 1.0) || !std::isfinite(tau)) {
        throw DomainError("ModelSpec: tau must be a finite value > 1");
    }
    bayes_threshold_ = inverse_alt_pdf(tau_);
    if (!(bayes_threshold_ > 0.0 && bayes_threshold_ < 1.0)) {
        throw RangeError("ModelSpec: Bayes threshold is not representable in (0, 1)");
    }
    power_ = alt_cdf(bayes_threshold_);
}

ModelSpec ModelSpec::location(SubbotinShape shape, double tau, double mu)
{
    if (shape.zeta() <= 1.0) {
        throw DomainError("location model requires zeta > 1 (Laplace location is not supported)");
    }
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw DomainError("location model requires a finite mu > 0");
    }
    return ModelSpec(ModelKind::Location, shape, tau, mu);
}

ModelSpec ModelSpec::scale(SubbotinShape shape, double tau, double sigma)
{
    if (!(sigma > 1.0) || !std::isfinite(sigma)) {
        throw DomainError("scale model requires a finite sigma > 1");
    }
    return ModelSpec(ModelKind::Scale, shape, tau, sigma);
}

double ModelSpec::alt_cdf(double t) const
{
    require_unit_closed(t, "alt_cdf");
    if (t == 0.0) {
        return 0.0;
    }
    if (t == 1.0) {
        return 1.0;
    }
    if (kind_ == ModelKind::Location) {
        return upper_tail(shape_, quantile(shape_, t) - effect_);
    }
    return 2.0 * upper_tail(shape_, quantile(shape_, 0.5 * t) / effect_);
}

double ModelSpec::alt_pdf(double t) const
{
    require_unit_open(t, "alt_pdf");
    const double z = shape_.zeta();
    if (kind_ == ModelKind::Location) {
        const double x = quantile(shape_, t);
        return std::exp((abs_pow(x, z) - abs_pow(x - effect_, z)) / z);
    }
    const double x = quantile(shape_, 0.5 * t);
    return std::exp(abs_pow(x, z) * -std::expm1(-z * std::log(effect_)) / z) / effect_;
}

double ModelSpec::psi_ratio(double t) const
{
    require_unit_open(t, "psi_ratio");
    return alt_cdf(t) / t;
}

double ModelSpec::mixture_cdf(double t) const
{
    require_unit_closed(t, "mixture_cdf");
    return pi0_ * t + pi1_ * alt_cdf(t);
}

double ModelSpec::alt_pdf_at_one() const noexcept
{
    return kind_ == ModelKind::Location ? 0.0 : 1.0 / effect_;
}

double ModelSpec::inverse_alt_pdf(double y) const
{
    if (std::isnan(y) || y <= alt_pdf_at_one()) {
        throw RangeError("inverse_alt_pdf: y = " + std::to_string(y) + " is not above f(1-) = " +
                         std::to_string(alt_pdf_at_one()));
    }
    if (!std::isfinite(y)) {
        throw RangeError("inverse_alt_pdf: y must be below f(0+) = +inf");
    }
    const double z = shape_.zeta();
    const double log_y = std::log(y);
    double t = 0.0;
    if (kind_ == ModelKind::Location) {
        // log f at statistic x is (|x|^z - |x - mu|^z)/z, increasing in x.
        auto h = [&](double x) { return (abs_pow(x, z) - abs_pow(x - effect_, z)) / z - log_y; };
        const double x = detail::solve_increasing(h, -1.0, effect_ + 1.0, "inverse_alt_pdf");
        t = upper_tail(shape_, x);
    } else {
        const double x = std::pow(z * std::log(effect_ * y) / -std::expm1(-z * std::log(effect_)), 1.0 / z);
        t = 2.0 * upper_tail(shape_, x);
    }
    if (!(t > 0.0)) {
        throw RangeError("inverse_alt_pdf: solution underflows for y = " + std::to_string(y));
    }
    return t;
}

double ModelSpec::log_psi_at_statistic(double x) const
{
    if (kind_ == ModelKind::Location) {
        return log_upper_tail(shape_, x - effect_) - log_upper_tail(shape_, x);
    }
    return log_upper_tail(shape_, x / effect_) - log_upper_tail(shape_, x);
}

double ModelSpec::inverse_psi(double y) const
{
    if (std::isnan(y) || y <= 1.0) {
        throw RangeError("inverse_psi: y = " + std::to_string(y) + " is not above Psi(1-) = 1");
    }
    if (!std::isfinite(y)) {
        throw RangeError("inverse_psi: y must be below Psi(0+) = +inf");
    }
    const double log_y = std::log(y);
    auto h = [&](double x) { return log_psi_at_statistic(x) - log_y; };
    double t = 0.0;
    if (kind_ == ModelKind::Location) {
        const double x = detail::solve_increasing(h, -1.0, effect_ + 1.0, "inverse_psi");
        t = upper_tail(shape_, x);
    } else {
        double hi = 1.0;
        double fhi = h(hi);
        for (int i = 0; fhi < 0.0; ++i) {
            if (i == 200) {
                throw SolverError("inverse_psi: upper bracket not found");
            }
            hi *= 2.0;
            fhi = h(hi);
        }
        const double x = detail::solve_bracketed(h, 0.0, hi, -log_y, fhi, "inverse_psi");
        t = 2.0 * upper_tail(shape_, x);
    }
    if (!(t > 0.0)) {
        throw RangeError("inverse_psi: solution underflows for y = " + std::to_string(y));
    }
    return t;
}

double standardize(ModelKind kind, const SubbotinShape& shape, double statistic)
{
    if (kind == ModelKind::Location) {
        return upper_tail(shape, statistic);
    }
    return 2.0 * upper_tail(shape, std::fabs(statistic));
}

double ModelSpec::pvalue(double statistic) const
{
    return standardize(kind_, shape_, statistic);
}

double ModelSpec::statistic_cutoff(double t) const
{
    if (!(t > 0.0 && t <= 1.0)) {
        throw DomainError("statistic_cutoff: t must lie in (0, 1]");
    }
    if (kind_ == ModelKind::Location) {
        return t == 1.0 ? -std::numeric_limits<double>::infinity() : quantile(shape_, t);
    }
    return t == 1.0 ? 0.0 : quantile(shape_, 0.5 * t);
}

// Calibration ----------------------------------------------------------------

namespace {

ModelSpec calibrate_location(const SubbotinShape& shape, double tau, double power)
{
    if (shape.zeta() <= 1.0) {
        throw DomainError("calibrate: location model requires zeta > 1");
    }
    const double z = shape.zeta();
    const double zc = quantile(shape, power);
    const double x_bayes = std::pow(z * std::log(tau) + abs_pow(zc, z), 1.0 / z);
    return ModelSpec::location(shape, tau, x_bayes - zc);
}

ModelSpec calibrate_scale(const SubbotinShape& shape, double tau, double power)
{
    const double z = shape.zeta();
    const double zc_pow = std::pow(quantile(shape, 0.5 * power), z);
    const double log_tau = std::log(tau);
    // Convex in sigma, negative at sigma = 1: exactly one root above 1.
    auto h = [&](double sigma) {
        const double ls = std::log(sigma);
        return zc_pow * std::expm1(z * ls) / z - ls - log_tau;
    };
    const double lo = 1.0 + 1e-9;
    double hi = 2.0;
    const double flo = h(lo);
    double fhi = h(hi);
    while (fhi < 0.0) {
        hi *= 2.0;
        if (hi > 1e15) {
            throw CalibrationError("calibrate: no scale parameter below 1e15 reaches the requested power");
        }
        fhi = h(hi);
    }
    if (!(flo < 0.0)) {
        throw CalibrationError("calibrate: tau too close to 1 for the requested power");
    }
    const double sigma = detail::solve_bracketed(h, lo, hi, flo, fhi, "calibrate");
    return ModelSpec::scale(shape, tau, sigma);
}

} // namespace

ModelSpec calibrate(ModelKind kind, const SubbotinShape& shape, const CanonicalParams& params, std::size_t m)
{
    const double tau = params.tau(m);
    if (!(tau > 1.0) || !std::isfinite(tau)) {
        throw CalibrationError("calibrate: tau must be finite and > 1");
    }
    const double power = params.power();
    try {
        ModelSpec model = kind == ModelKind::Location ? calibrate_location(shape, tau, power)
                                                      : calibrate_scale(shape, tau, power);
        if (!(std::fabs(model.power() - power) <= 1e-8)) {
            throw CalibrationError("calibrate: recovered power " + std::to_string(model.power()) +
                                   " misses target " + std::to_string(power));
        }
        return model;
    } catch (const RangeError& e) {
        throw CalibrationError(std::string("calibrate: ") + e.what());
    } catch (const SolverError& e) {
        throw CalibrationError(std::string("calibrate: ") + e.what());
    }
}

} // namespace fdrclass
