#ifndef FDRCLASS_THRESHOLD_HPP
#define FDRCLASS_THRESHOLD_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "fdrclass/model.hpp"

namespace fdrclass {

enum class Provenance { Bayes, Bfdr, Bh, Fdr, Bonferroni };

std::string_view to_string(Provenance p) noexcept;

/// A threshold on the p-value scale. Empirical rules also report the
/// number of rejections k_hat and, when computed from statistics, the
/// matching cutoff on the statistic scale.
struct ThresholdResult {
    double value = 0.0;
    Provenance provenance = Provenance::Bayes;
    std::optional<std::size_t> k_hat;
    std::optional<double> statistic;
};

/// Model families with explicit optimal-level equations.
enum class Family { GaussianLocation, GaussianScale, LaplaceScale };

std::string_view to_string(Family f) noexcept;
Family parse_family(std::string_view text);
ModelKind kind_of(Family f) noexcept;
SubbotinShape shape_of(Family f);

/// Nominal level rule: either a fixed alpha or the level that would be
/// optimal if the model parameters were (beta0, C0).
class LevelChoice {
public:
    static LevelChoice fixed(double alpha);
    static LevelChoice opt_at(double beta0, double power0);

    bool is_fixed() const noexcept { return !beta0_.has_value(); }
    double beta0() const { return beta0_.value(); }
    double power0() const { return power0_; }

    /// Resolved alpha for m observations under the given family.
    double resolve(ModelKind kind, const SubbotinShape& shape, std::size_t m) const;

    /// "0.1" or "opt(0.5;0.5)".
    std::string label() const;

private:
    LevelChoice(double alpha, std::optional<double> beta0, double power0);

    double alpha_;
    std::optional<double> beta0_;
    double power0_;
};

ThresholdResult bayes_threshold(const ModelSpec& model);

/// Unique solution of BFDR(t) = alpha, t = Psi^{-1}(q tau), q = 1/alpha - 1.
/// Throws LevelError unless alpha lies in (0, pi0).
ThresholdResult bfdr_threshold(const ModelSpec& model, double alpha);

/// BFDR(t) = P(H = 0 | p <= t) = (1 + F(t) / (tau t))^{-1}.
double bfdr_of(const ModelSpec& model, double t);

/// Optimal recovery parameter C / (tau t_B); always >= 1.
double q_opt(const ModelSpec& model);

/// Level (1 + q)^{-1} matching the optimal recovery parameter of the
/// family member with parameters (beta0, C0), solved from the explicit
/// per-family equations.
double alpha_opt(Family family, std::size_t m, double beta0, double power0);

/// Same quantity for any kind and shape, through calibrate() and q_opt().
double alpha_opt(ModelKind kind, const SubbotinShape& shape, std::size_t m, double beta0, double power0);

/// Benjamini-Hochberg step-up threshold alpha k_hat / m (0 when k_hat = 0).
ThresholdResult bh_threshold(std::span<const double> pvalues, double alpha);

/// BH threshold floored at the Bonferroni level alpha / m.
ThresholdResult fdr_threshold(std::span<const double> pvalues, double alpha);

/// FDR thresholding run on the test statistics themselves: X_(k) compared
/// with D^{-1}(alpha k / m) (location) or |X|_(k) with D^{-1}(alpha k / 2m)
/// (scale). The returned value is on the p-value scale.
ThresholdResult fdr_threshold_stats(std::span<const double> stats, ModelKind kind, const SubbotinShape& shape,
                                    double alpha);

} // namespace fdrclass

#endif // FDRCLASS_THRESHOLD_HPP
