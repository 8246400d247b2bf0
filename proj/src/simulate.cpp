#include "fdrclass/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include "fdrclass/error.hpp"
#include "fdrclass/risk.hpp"

namespace fdrclass {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Running mean and sum of squared deviations; blocks are merged in index
// order so the result is independent of scheduling.
struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) noexcept
    {
        n += 1.0;
        const double delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
    }

    void merge(const Moments& other) noexcept
    {
        if (other.n == 0.0) {
            return;
        }
        const double total = n + other.n;
        const double delta = other.mean - mean;
        mean += delta * other.n / total;
        m2 += other.m2 + delta * delta * n * other.n / total;
        n = total;
    }
};

constexpr std::size_t kBlock = 1024;

unsigned worker_count(unsigned requested, std::size_t blocks)
{
    unsigned n = requested == 0 ? std::max(1U, std::thread::hardware_concurrency()) : requested;
    return static_cast<unsigned>(std::min<std::size_t>(n, blocks));
}

// Runs body(block_index) for every block on a small pool; the first
// exception thrown by any worker is rethrown on the caller's thread.
template <class Body>
void for_each_block(std::size_t blocks, unsigned threads, Body&& body)
{
    const unsigned workers = worker_count(threads, blocks);
    if (workers <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) {
            body(b);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
            try {
                body(b);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(blocks);
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(run);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

template <class PerReplicate>
McEstimate estimate(const SimConfig& config, PerReplicate&& value)
{
    config.validate();
    const std::size_t blocks = (config.replicates + kBlock - 1) / kBlock;
    std::vector<Moments> partial(blocks);
    for_each_block(blocks, config.threads, [&](std::size_t b) {
        const std::size_t end = std::min(config.replicates, (b + 1) * kBlock);
        for (std::size_t r = b * kBlock; r < end; ++r) {
            partial[b].add(value(sample_dataset(config, r)));
        }
    });
    Moments total;
    for (const Moments& part : partial) {
        total.merge(part);
    }
    McEstimate out;
    out.mean = total.mean;
    out.replicates = config.replicates;
    if (config.replicates > 1) {
        const double var = total.m2 / (total.n - 1.0);
        out.se = std::sqrt(var / total.n);
    }
    return out;
}

// Type 7 sample quantile of sorted data.
double sorted_quantile(const std::vector<double>& sorted, double prob)
{
    const double h = prob * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

} // namespace

std::string_view to_string(RiskKind kind) noexcept
{
    return kind == RiskKind::Transductive ? "transductive" : "inductive";
}

RiskKind parse_risk_kind(std::string_view text)
{
    if (text == "transductive") {
        return RiskKind::Transductive;
    }
    if (text == "inductive") {
        return RiskKind::Inductive;
    }
    throw DomainError("unknown risk kind '" + std::string(text) + "' (expected transductive or inductive)");
}

void SimConfig::validate() const
{
    if (m < 1) {
        throw DomainError("simulation: m must be >= 1");
    }
    if (replicates < 1) {
        throw DomainError("simulation: replicates must be >= 1");
    }
}

SplitMix64::SplitMix64(std::uint64_t seed, std::uint64_t stream) noexcept
    : state_(mix64(seed ^ mix64(stream * kGolden + 0xD1B54A32D192ED03ULL)))
{
}

SplitMix64::result_type SplitMix64::operator()() noexcept
{
    state_ += kGolden;
    return mix64(state_);
}

double SplitMix64::uniform_open() noexcept
{
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double sample_subbotin(const SubbotinShape& shape, SplitMix64& rng)
{
    if (shape.is_gaussian()) {
        std::normal_distribution<double> normal;
        return normal(rng);
    }
    if (shape.is_laplace()) {
        const std::uint64_t bits = rng();
        const double e = -std::log((static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53);
        return (bits & 1U) != 0 ? e : -e;
    }
    return quantile(shape, rng.uniform_open());
}

Dataset sample_dataset(const SimConfig& config, std::size_t replicate)
{
    const ModelSpec& model = config.model;
    SplitMix64 rng(config.seed, replicate);
    Dataset data;
    data.labels.resize(config.m);
    data.statistics.resize(config.m);
    data.pvalues.resize(config.m);
    const double pi1 = config.null_only ? 0.0 : model.pi1();
    for (std::size_t i = 0; i < config.m; ++i) {
        const bool signal = rng.uniform_open() < pi1;
        double x = sample_subbotin(model.shape(), rng);
        if (signal) {
            x = model.kind() == ModelKind::Location ? x + model.effect() : x * model.effect();
        }
        data.labels[i] = signal ? 1 : 0;
        data.statistics[i] = x;
        data.pvalues[i] = model.pvalue(x);
    }
    return data;
}

ThresholdRule ThresholdRule::fixed(double t)
{
    if (!(t >= 0.0 && t <= 1.0)) {
        throw DomainError("threshold rule: fixed threshold must lie in [0, 1]");
    }
    return {Kind::Fixed, t};
}

ThresholdRule ThresholdRule::bh(double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("threshold rule: alpha must lie in (0, 1)");
    }
    return {Kind::Bh, alpha};
}

ThresholdRule ThresholdRule::fdr(double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("threshold rule: alpha must lie in (0, 1)");
    }
    return {Kind::Fdr, alpha};
}

ThresholdResult ThresholdRule::apply(std::span<const double> pvalues) const
{
    switch (kind_) {
    case Kind::Fixed:
        return {parameter_, Provenance::Bayes, std::nullopt, std::nullopt};
    case Kind::Bh:
        return bh_threshold(pvalues, parameter_);
    case Kind::Fdr:
        return fdr_threshold(pvalues, parameter_);
    }
    return {};
}

McEstimate mc_risk(const SimConfig& config, const ThresholdRule& rule)
{
    return estimate(config, [&](const Dataset& data) {
        const double t = rule.apply(data.pvalues).value;
        if (config.risk_kind == RiskKind::Inductive) {
            return risk_det(config.model, t);
        }
        std::size_t errors = 0;
        for (std::size_t i = 0; i < data.pvalues.size(); ++i) {
            const bool rejected = data.pvalues[i] <= t;
            errors += rejected != (data.labels[i] == 1) ? 1 : 0;
        }
        return static_cast<double>(errors) / static_cast<double>(data.pvalues.size());
    });
}

McEstimate mc_risk_holdout(const SimConfig& config, const ThresholdRule& rule)
{
    SimConfig extended = config;
    extended.m = config.m + 1;
    return estimate(extended, [&](const Dataset& data) {
        const std::span<const double> train(data.pvalues.data(), config.m);
        const double t = rule.apply(train).value;
        const bool rejected = data.pvalues.back() <= t;
        return rejected != (data.labels.back() == 1) ? 1.0 : 0.0;
    });
}

McEstimate mc_fdp(const SimConfig& config, const ThresholdRule& rule)
{
    return estimate(config, [&](const Dataset& data) {
        const double t = rule.apply(data.pvalues).value;
        std::size_t rejections = 0;
        std::size_t false_rejections = 0;
        for (std::size_t i = 0; i < data.pvalues.size(); ++i) {
            if (data.pvalues[i] <= t) {
                ++rejections;
                false_rejections += data.labels[i] == 0 ? 1 : 0;
            }
        }
        return static_cast<double>(false_rejections) / static_cast<double>(std::max<std::size_t>(rejections, 1));
    });
}

ConcentrationProfile concentration_profile(const SimConfig& config, double alpha)
{
    config.validate();
    const ThresholdRule rule = ThresholdRule::fdr(alpha);
    std::vector<double> thresholds(config.replicates);
    std::vector<double> k_hats(config.replicates);
    const std::size_t blocks = (config.replicates + kBlock - 1) / kBlock;
    for_each_block(blocks, config.threads, [&](std::size_t b) {
        const std::size_t end = std::min(config.replicates, (b + 1) * kBlock);
        for (std::size_t r = b * kBlock; r < end; ++r) {
            const ThresholdResult res = rule.apply(sample_dataset(config, r).pvalues);
            thresholds[r] = res.value;
            k_hats[r] = static_cast<double>(res.k_hat.value_or(0));
        }
    });

    ConcentrationProfile profile;
    double k_sum = 0.0;
    for (double k : k_hats) {
        k_sum += k;
    }
    profile.mean_k_hat = k_sum / static_cast<double>(config.replicates);
    std::sort(thresholds.begin(), thresholds.end());
    profile.q05 = sorted_quantile(thresholds, 0.05);
    profile.q50 = sorted_quantile(thresholds, 0.50);
    profile.q95 = sorted_quantile(thresholds, 0.95);
    profile.bfdr_reference = bfdr_threshold(config.model, alpha * config.model.pi0()).value;
    profile.floor_reference = alpha / static_cast<double>(config.m);
    return profile;
}

} // namespace fdrclass
