#include <doctest.h>

#include <cmath>
#include <vector>

#include <fdrclass/error.hpp>
#include <fdrclass/model.hpp>
#include <fdrclass/risk.hpp>
#include <fdrclass/simulate.hpp>

#include "support.hpp"

using namespace fdrclass;
using fdrclass::testing::chi_square_pvalue;
using fdrclass::testing::ks_pvalue;

namespace {

SimConfig make_config(const ModelSpec& model, std::size_t m, std::size_t replicates, std::uint64_t seed)
{
    SimConfig c{model};
    c.m = m;
    c.replicates = replicates;
    c.seed = seed;
    return c;
}

ModelSpec gaussian_location(double tau, double c)
{
    return calibrate(ModelKind::Location, SubbotinShape(2.0), CanonicalParams::from_tau(tau, c), 10);
}

} // namespace

TEST_CASE("datasets are reproducible per seed and replicate")
{
    const SimConfig c = make_config(gaussian_location(5.0, 0.5), 200, 1, 42);
    const Dataset a = sample_dataset(c, 7);
    const Dataset b = sample_dataset(c, 7);
    CHECK(a.statistics == b.statistics);
    CHECK(a.labels == b.labels);
    CHECK(sample_dataset(c, 8).statistics != a.statistics);
    SimConfig other = c;
    other.seed = 43;
    CHECK(sample_dataset(other, 7).statistics != a.statistics);
    for (std::size_t i = 0; i < a.statistics.size(); ++i) {
        CHECK(a.pvalues[i] == c.model.pvalue(a.statistics[i]));
    }
}

TEST_CASE("estimates do not depend on the thread count")
{
    SimConfig c = make_config(gaussian_location(5.0, 0.5), 50, 5000, 9);
    c.threads = 1;
    const McEstimate one = mc_risk(c, ThresholdRule::fdr(0.2));
    c.threads = 4;
    const McEstimate four = mc_risk(c, ThresholdRule::fdr(0.2));
    CHECK(one.mean == four.mean);
    CHECK(one.se == four.se);
    CHECK(one.replicates == 5000U);
}

TEST_CASE("Subbotin sampler passes a chi-square test")
{
    for (double z : {1.0, 1.5, 2.0, 3.0}) {
        const SubbotinShape s(z);
        SplitMix64 rng(17, static_cast<std::uint64_t>(z * 10));
        std::vector<std::size_t> counts(20, 0);
        for (int i = 0; i < 200000; ++i) {
            const double u = upper_tail(s, sample_subbotin(s, rng));
            counts[std::min<std::size_t>(19, static_cast<std::size_t>(u * 20.0))] += 1;
        }
        CHECK(chi_square_pvalue(counts) > 1e-3);
    }
}

TEST_CASE("null p-values are uniform and alternative p-values follow F")
{
    const ModelSpec models[] = {
        gaussian_location(5.0, 0.5),
        calibrate(ModelKind::Location, SubbotinShape(1.5), CanonicalParams::from_tau(3.0, 0.4), 10),
        calibrate(ModelKind::Location, SubbotinShape(3.0), CanonicalParams::from_tau(3.0, 0.6), 10),
        calibrate(ModelKind::Scale, SubbotinShape(1.0), CanonicalParams::from_tau(2.0, 0.5), 10),
        calibrate(ModelKind::Scale, SubbotinShape(2.0), CanonicalParams::from_tau(4.0, 0.3), 10),
    };
    std::uint64_t seed = 100;
    for (const ModelSpec& model : models) {
        SimConfig c = make_config(model, 20000, 1, seed++);
        const Dataset data = sample_dataset(c);
        std::vector<double> null_p;
        std::vector<double> alt_p;
        for (std::size_t i = 0; i < c.m; ++i) {
            (data.labels[i] == 1 ? alt_p : null_p).push_back(data.pvalues[i]);
        }
        CHECK(ks_pvalue(null_p, [](double t) { return t; }) > 1e-3);
        CHECK(ks_pvalue(alt_p, [&](double t) { return model.alt_cdf(std::clamp(t, 0.0, 1.0)); }) > 1e-3);
        const double frac = static_cast<double>(alt_p.size()) / static_cast<double>(c.m);
        CHECK(std::fabs(frac - model.pi1()) <= 4.0 * std::sqrt(model.pi1() * model.pi0() / static_cast<double>(c.m)));

        c.null_only = true;
        const Dataset null_data = sample_dataset(c);
        for (std::uint8_t l : null_data.labels) {
            CHECK(l == 0);
        }
        CHECK(ks_pvalue(null_data.pvalues, [](double t) { return t; }) > 1e-3);
    }
}

TEST_CASE("fixed thresholds: Monte Carlo risk matches the closed form")
{
    const ModelSpec model = calibrate(ModelKind::Scale, SubbotinShape(1.0), CanonicalParams::from_tau(2.0, 0.5), 10);
    for (double t : {0.0, 0.0625, 0.3}) {
        SimConfig c = make_config(model, 100, 20000, 5);
        c.risk_kind = RiskKind::Transductive;
        const McEstimate tr = mc_risk(c, ThresholdRule::fixed(t));
        CHECK(std::fabs(tr.mean - risk_det(model, t)) <= 4.0 * tr.se);
        c.risk_kind = RiskKind::Inductive;
        const McEstimate in = mc_risk(c, ThresholdRule::fixed(t));
        CHECK(in.mean == doctest::Approx(risk_det(model, t)).epsilon(1e-12));
        CHECK(in.se == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
    SimConfig c = make_config(model, 10, 10, 1);
    CHECK(mc_risk(c, ThresholdRule::fixed(0.0)).mean == doctest::Approx(model.pi1()));
}

TEST_CASE("holdout risk of the FDR rule matches the exact computation")
{
    const ModelSpec model = gaussian_location(3.0, 0.5);
    for (std::size_t m : {1UL, 3UL, 20UL}) {
        const SimConfig c = make_config(model, m, 200000, 77 + m);
        const McEstimate mc = mc_risk_holdout(c, ThresholdRule::fdr(0.25));
        const double exact = exact_fdr_risk(model, m, 0.25).risk;
        CHECK(std::fabs(mc.mean - exact) <= 4.0 * mc.se);
        const McEstimate plug_in = mc_risk(c, ThresholdRule::fdr(0.25));
        CHECK(std::fabs(plug_in.mean - exact) <= 4.0 * plug_in.se);
    }
}

TEST_CASE("FDP is controlled at pi0 alpha")
{
    const ModelSpec model = gaussian_location(4.0, 0.6);
    for (double alpha : {0.05, 0.2}) {
        SimConfig c = make_config(model, 200, 20000, 3);
        const McEstimate fdp = mc_fdp(c, ThresholdRule::bh(alpha));
        CHECK(std::fabs(fdp.mean - model.pi0() * alpha) <= 4.0 * fdp.se);
        c.null_only = true;
        const McEstimate null_fdp = mc_fdp(c, ThresholdRule::bh(alpha));
        CHECK(std::fabs(null_fdp.mean - alpha) <= 4.0 * null_fdp.se);
    }
}

TEST_CASE("FDR threshold concentrates near the BFDR threshold when signals are frequent")
{
    const std::size_t m = 10000;
    const ModelSpec model =
        calibrate(ModelKind::Location, SubbotinShape(2.0), CanonicalParams::from_beta(0.2, 0.5), m);
    const ConcentrationProfile p = concentration_profile(make_config(model, m, 400, 11), 0.2);
    CHECK(p.q05 <= p.q50);
    CHECK(p.q50 <= p.q95);
    CHECK(p.q50 == doctest::Approx(p.bfdr_reference).epsilon(0.05));
    CHECK(p.q05 > 10.0 * p.floor_reference);
    CHECK(p.mean_k_hat > 100.0);
}

TEST_CASE("FDR threshold sits on the Bonferroni floor when signals are rare")
{
    for (std::size_t m : {100UL, 1000UL}) {
        const ModelSpec model =
            calibrate(ModelKind::Location, SubbotinShape(2.0), CanonicalParams::from_beta(1.0, 0.5), m);
        const ConcentrationProfile p = concentration_profile(make_config(model, m, 2000, 12), 0.2);
        CHECK(p.q50 == doctest::Approx(p.floor_reference));
        CHECK(p.floor_reference == doctest::Approx(0.2 / static_cast<double>(m)));
    }
}

TEST_CASE("extreme sparsity yields almost no signals")
{
    const ModelSpec model = gaussian_location(1e9, 0.5);
    const SimConfig c = make_config(model, 1000, 100, 8);
    std::size_t ones = 0;
    for (std::size_t r = 0; r < c.replicates; ++r) {
        for (std::uint8_t l : sample_dataset(c, r).labels) {
            ones += l;
        }
    }
    CHECK(ones <= 1U);
}

TEST_CASE("invalid simulation settings")
{
    const ModelSpec model = gaussian_location(5.0, 0.5);
    CHECK_THROWS_AS(mc_risk(make_config(model, 0, 10, 1), ThresholdRule::fdr(0.1)), DomainError);
    CHECK_THROWS_AS(mc_risk(make_config(model, 10, 0, 1), ThresholdRule::fdr(0.1)), DomainError);
    CHECK_THROWS_AS(ThresholdRule::fixed(1.5), DomainError);
    CHECK_THROWS_AS(ThresholdRule::bh(0.0), DomainError);
    CHECK(parse_risk_kind("transductive") == RiskKind::Transductive);
    CHECK(to_string(RiskKind::Inductive) == "inductive");
    CHECK_THROWS_AS(parse_risk_kind("both"), DomainError);
}
