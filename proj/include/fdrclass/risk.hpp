#ifndef FDRCLASS_RISK_HPP
#define FDRCLASS_RISK_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdrclass/model.hpp"
#include "fdrclass/threshold.hpp"

namespace fdrclass {

/// Largest m accepted by exact_fdr_risk (the computation is quadratic in m).
inline constexpr std::size_t kExactFdrMaxM = 10000;

struct RiskReport {
    double risk = 0.0;
    double bayes_risk = 0.0;
    double excess_rel = 0.0;
    Provenance procedure = Provenance::Bayes;
    std::map<std::string, double> bounds;
};

enum class FdrBoundCase { A1 = 1, A2 = 2 };

struct BoundParams {
    double epsilon = 0.5;
    double nu = 0.25;
    FdrBoundCase case_a = FdrBoundCase::A1;
    double lambda = 1.0;

    void validate() const;
};

/// R(t) = pi0 t + pi1 (1 - F(t)), the risk of a deterministic threshold.
double risk_det(const ModelSpec& model, double t);

/// pi0 t + lambda pi1 (1 - F(t)) for lambda in [1, tau).
double risk_weighted(const ModelSpec& model, double t, double lambda);

/// Minimizer of risk_weighted: f^{-1}(tau / lambda).
double weighted_bayes_threshold(const ModelSpec& model, double lambda);

/// Relative excess (risk - bayes) / bayes.
double excess(double risk, double bayes_risk);

RiskReport make_report(const ModelSpec& model, double risk, Provenance procedure);

/// Probabilities Psi_j = P(U_(1) <= s_1, ..., U_(j) <= s_j), j = 0..n, for
/// j i.i.d. uniforms. Bounds must be nondecreasing in [0, 1].
///
/// Evaluated by a positive-term recursion over the number of points below
/// each bound, so tiny probabilities keep their relative accuracy.
std::vector<double> steck_prefix(std::span<const double> bounds);

/// Same probabilities through Steck's complementary recursion
///     Psi_j = 1 - sum_{k<j} C(j,k) Psi_k (1 - s_{k+1})^{j-k}.
/// Quadratic and exact in exact arithmetic, but the subtraction loses all
/// accuracy once the binomial weights outgrow 1 / epsilon; meant for short
/// sequences and cross-checks.
std::vector<double> steck_prefix_complementary(std::span<const double> bounds);

/// Distribution of the number of BH rejections k_hat = 0..m at level alpha
/// for m i.i.d. p-values with c.d.f. G.
std::vector<double> fdr_rejection_distribution(const ModelSpec& model, std::size_t m, double alpha);

/// Inductive risk of the FDR threshold,
///     sum_k P(k_hat = k) R(alpha (k v 1) / m),
/// exact up to floating point. Throws CapacityError when m > kExactFdrMaxM.
RiskReport exact_fdr_risk(const ModelSpec& model, std::size_t m, double alpha);

struct Rates {
    double r;
    double k;
};

/// Bayes-risk rate r_m and constant K_m of the location/scale model.
Rates rates(const ModelSpec& model);

/// Excess risk of the BFDR threshold written through the closed identity
///     pi1 C / q - pi0 t_B + pi1 (1 - 1/q) (C - F(t*)).
double bfdr_excess_identity(const ModelSpec& model, double alpha);

/// Upper bound on R(t*) - R(t_B) for the BFDR threshold; needs alpha <= 1/2.
double bound_thm31_upper(const ModelSpec& model, double alpha);

/// Lower bound on the ratio R(t*) / R(t_B).
double bound_thm31_lower(const ModelSpec& model, double alpha);

/// Upper bound on R(t_FDR) - R(t_B) for the FDR threshold at m observations.
double bound_thm32_upper(const ModelSpec& model, std::size_t m, double alpha, const BoundParams& params);

enum class BoundTarget { Bfdr, Fdr };

/// Explicit rate-form bound for BFDR or FDR thresholding. Empty when the
/// applicability condition on r_m fails for this m.
std::optional<double> bound_cor41(const ModelSpec& model, std::size_t m, double alpha, const BoundParams& params,
                                  BoundTarget which);

/// alpha + (log(alpha^{-1} / (log m)^gamma))_+ / (log m)^gamma.
double rho_rate(std::size_t m, double alpha, double gamma_exponent);

/// gamma = 1 - 1/zeta for location models and 1 for scale models.
double rate_exponent(ModelKind kind, const SubbotinShape& shape);

} // namespace fdrclass

#endif // FDRCLASS_RISK_HPP
