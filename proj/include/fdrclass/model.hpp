#ifndef FDRCLASS_MODEL_HPP
#define FDRCLASS_MODEL_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "fdrclass/subbotin.hpp"

namespace fdrclass {

enum class ModelKind { Location, Scale };

std::string_view to_string(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view text);

/// Sparsity and power targets (tau, C). Sparsity is either explicit or
/// given through tau = m^beta.
class CanonicalParams {
public:
    static CanonicalParams from_beta(double beta, double power);
    static CanonicalParams from_tau(double tau, double power);

    double power() const noexcept { return power_; }
    std::optional<double> beta() const noexcept { return beta_; }

    /// Resolves tau for a given number of observations m.
    double tau(std::size_t m) const;

private:
    CanonicalParams(std::optional<double> beta, std::optional<double> tau, double power);

    std::optional<double> beta_;
    std::optional<double> tau_;
    double power_;
};

/// A calibrated two-group p-value model: nulls are uniform, alternatives
/// have the c.d.f. F obtained by standardizing a shifted (location) or
/// dilated (scale) Subbotin law. The Bayes threshold f^{-1}(tau) and its
/// power C = F(t_B) are computed once at construction.
class ModelSpec {
public:
    /// Location model with shift mu > 0; requires zeta > 1.
    static ModelSpec location(SubbotinShape shape, double tau, double mu);
    /// Scale model with dilation sigma > 1.
    static ModelSpec scale(SubbotinShape shape, double tau, double sigma);

    ModelKind kind() const noexcept { return kind_; }
    const SubbotinShape& shape() const noexcept { return shape_; }
    double tau() const noexcept { return tau_; }
    /// mu for Location, sigma for Scale.
    double effect() const noexcept { return effect_; }
    double pi0() const noexcept { return pi0_; }
    double pi1() const noexcept { return pi1_; }
    double bayes_threshold() const noexcept { return bayes_threshold_; }
    double power() const noexcept { return power_; }

    /// F(t), alternative c.d.f. of the p-values, t in [0, 1].
    double alt_cdf(double t) const;
    /// f(t) = F'(t), t in (0, 1).
    double alt_pdf(double t) const;
    /// Psi(t) = F(t) / t, t in (0, 1).
    double psi_ratio(double t) const;
    /// G(t) = pi0 t + pi1 F(t), t in [0, 1].
    double mixture_cdf(double t) const;

    /// f^{-1}(y) for y in (f(1-), +inf).
    double inverse_alt_pdf(double y) const;
    /// Psi^{-1}(y) for y in (1, +inf).
    double inverse_psi(double y) const;

    /// f(1-): 0 in the location model, 1/sigma in the scale model.
    double alt_pdf_at_one() const noexcept;

    /// p-value of a test statistic: D(x) (location) or 2 D(|x|) (scale).
    double pvalue(double statistic) const;
    /// Statistic-scale cutoff matching a p-value threshold t in (0, 1].
    double statistic_cutoff(double t) const;

private:
    ModelSpec(ModelKind kind, SubbotinShape shape, double tau, double effect);

    double log_psi_at_statistic(double x) const;

    ModelKind kind_;
    SubbotinShape shape_;
    double tau_;
    double effect_;
    double pi0_;
    double pi1_;
    double bayes_threshold_ = 0.0;
    double power_ = 0.0;
};

/// Builds the model whose Bayes rule has power C at sparsity tau, i.e. the
/// member of the family with f(F^{-1}(C)) = tau.
/// Location: closed form for mu. Scale: sigma by bracketed root finding.
/// Throws CalibrationError when no admissible model exists numerically.
ModelSpec calibrate(ModelKind kind, const SubbotinShape& shape, const CanonicalParams& params, std::size_t m);

/// p-value standardization for an arbitrary kind and shape.
double standardize(ModelKind kind, const SubbotinShape& shape, double statistic);

} // namespace fdrclass

#endif // FDRCLASS_MODEL_HPP
