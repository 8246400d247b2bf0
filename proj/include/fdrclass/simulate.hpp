#ifndef FDRCLASS_SIMULATE_HPP
#define FDRCLASS_SIMULATE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fdrclass/model.hpp"
#include "fdrclass/threshold.hpp"

namespace fdrclass {

enum class RiskKind { Transductive, Inductive };

std::string_view to_string(RiskKind kind) noexcept;
RiskKind parse_risk_kind(std::string_view text);

struct SimConfig {
    ModelSpec model;
    std::size_t m = 1;
    std::size_t replicates = 1;
    std::uint64_t seed = 0;
    RiskKind risk_kind = RiskKind::Inductive;
    /// Draw every label as 0 (pure null), regardless of pi1.
    bool null_only = false;
    /// Worker threads; 0 means hardware concurrency. Results do not depend
    /// on this value.
    unsigned threads = 0;

    void validate() const;
};

/// SplitMix64: one 64-bit counter per stream, advanced by a Weyl step and
/// scrambled on output. Streams for different (seed, replicate) pairs start
/// at hashed, well-separated states.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}
    SplitMix64(std::uint64_t seed, std::uint64_t stream) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }
    result_type operator()() noexcept;

    /// Uniform double in the open interval (0, 1).
    double uniform_open() noexcept;

private:
    std::uint64_t state_;
};

/// One draw from the Subbotin law with the given shape.
double sample_subbotin(const SubbotinShape& shape, SplitMix64& rng);

struct Dataset {
    std::vector<std::uint8_t> labels;
    std::vector<double> statistics;
    std::vector<double> pvalues;
};

/// Replicate number `replicate` of the configured experiment.
Dataset sample_dataset(const SimConfig& config, std::size_t replicate = 0);

/// A threshold applied to the p-values of one dataset.
class ThresholdRule {
public:
    enum class Kind { Fixed, Bh, Fdr };

    static ThresholdRule fixed(double t);
    static ThresholdRule bh(double alpha);
    static ThresholdRule fdr(double alpha);

    Kind kind() const noexcept { return kind_; }
    double parameter() const noexcept { return parameter_; }
    bool deterministic() const noexcept { return kind_ == Kind::Fixed; }

    ThresholdResult apply(std::span<const double> pvalues) const;

private:
    ThresholdRule(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {}
    Kind kind_;
    double parameter_;
};

struct McEstimate {
    double mean = 0.0;
    double se = 0.0;
    std::size_t replicates = 0;
};

/// Monte Carlo misclassification risk. Transductive: mean error rate on the
/// sample itself. Inductive: pi0 t + pi1 (1 - F(t)) at the data-driven t.
McEstimate mc_risk(const SimConfig& config, const ThresholdRule& rule);

/// Inductive risk estimated from the full pipeline: each replicate draws
/// m + 1 observations, thresholds the first m and scores the last one.
McEstimate mc_risk_holdout(const SimConfig& config, const ThresholdRule& rule);

/// Monte Carlo false discovery proportion V / max(R, 1).
McEstimate mc_fdp(const SimConfig& config, const ThresholdRule& rule);

struct ConcentrationProfile {
    double q05 = 0.0;
    double q50 = 0.0;
    double q95 = 0.0;
    /// BFDR threshold at level alpha * pi0.
    double bfdr_reference = 0.0;
    /// Bonferroni floor alpha / m.
    double floor_reference = 0.0;
    double mean_k_hat = 0.0;
};

/// Spread of the FDR threshold across replicates, next to its limits.
ConcentrationProfile concentration_profile(const SimConfig& config, double alpha);

} // namespace fdrclass

#endif // FDRCLASS_SIMULATE_HPP
