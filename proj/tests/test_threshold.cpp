#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <fdrclass/error.hpp>
#include <fdrclass/model.hpp>
#include <fdrclass/risk.hpp>
#include <fdrclass/threshold.hpp>

using namespace fdrclass;

namespace {

// k_hat written through the counting form: the largest k with at least k
// p-values at or below alpha k / m.
std::size_t k_hat_by_counting(const std::vector<double>& p, double alpha)
{
    const std::size_t m = p.size();
    for (std::size_t k = m; k >= 1; --k) {
        std::size_t below = 0;
        for (double x : p) {
            below += x <= alpha * static_cast<double>(k) / static_cast<double>(m) ? 1 : 0;
        }
        if (below >= k) {
            return k;
        }
    }
    return 0;
}

} // namespace

TEST_CASE("Benjamini-Hochberg on a small example")
{
    const std::vector<double> p{0.01, 0.04, 0.5};
    const ThresholdResult r = bh_threshold(p, 0.15);
    CHECK(r.k_hat == 2U);
    CHECK(r.value == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(r.provenance == Provenance::Bh);
}

TEST_CASE("no rejection and the Bonferroni floor")
{
    const std::vector<double> p(4, 1.0);
    const ThresholdResult bh = bh_threshold(p, 0.1);
    CHECK(bh.k_hat == 0U);
    CHECK(bh.value == 0.0);
    const ThresholdResult fdr = fdr_threshold(p, 0.1);
    CHECK(fdr.value == doctest::Approx(0.025));
    CHECK(fdr.k_hat == 0U);
    for (double x : p) {
        CHECK_FALSE(x <= fdr.value);
    }
}

TEST_CASE("step-up matches the counting definition on random inputs")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t m = 1 + rng() % 40;
        std::vector<double> p(m);
        for (double& x : p) {
            x = std::pow(unif(rng), 1.0 + 4.0 * unif(rng));
        }
        const double alpha = 0.05 + 0.5 * unif(rng);
        const ThresholdResult r = bh_threshold(p, alpha);
        CHECK(r.k_hat == k_hat_by_counting(p, alpha));
        CHECK(fdr_threshold(p, alpha).value >= alpha / static_cast<double>(m));
    }
}

TEST_CASE("statistic path agrees with the p-value path")
{
    std::mt19937_64 rng(5);
    for (ModelKind kind : {ModelKind::Location, ModelKind::Scale}) {
        for (double z : {1.5, 2.0}) {
            const SubbotinShape s(z);
            std::normal_distribution<double> normal(0.0, 1.5);
            for (int rep = 0; rep < 200; ++rep) {
                std::vector<double> x(25);
                std::vector<double> p(25);
                for (std::size_t i = 0; i < x.size(); ++i) {
                    x[i] = normal(rng) + (i < 5 ? 2.5 : 0.0);
                    p[i] = standardize(kind, s, x[i]);
                }
                const ThresholdResult a = fdr_threshold_stats(x, kind, s, 0.2);
                const ThresholdResult b = fdr_threshold(p, 0.2);
                CHECK(a.k_hat == b.k_hat);
                CHECK(a.value == doctest::Approx(b.value));
                REQUIRE(a.statistic.has_value());
                CHECK(standardize(kind, s, *a.statistic) == doctest::Approx(a.value).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("BFDR threshold is the level-alpha fixed point")
{
    const ModelSpec m = calibrate(ModelKind::Location, SubbotinShape(2.0), CanonicalParams::from_tau(20.0, 0.6), 10);
    for (double alpha : {0.01, 0.1, 0.3, 0.9}) {
        const ThresholdResult r = bfdr_threshold(m, alpha);
        CHECK(bfdr_of(m, r.value) == doctest::Approx(alpha).epsilon(1e-10));
    }
    CHECK_THROWS_AS(bfdr_threshold(m, m.pi0()), LevelError);
    CHECK_THROWS_AS(bfdr_threshold(m, 0.0), LevelError);
}

TEST_CASE("BFDR at the optimal level is the Bayes threshold")
{
    for (ModelKind kind : {ModelKind::Location, ModelKind::Scale}) {
        for (double z : {1.5, 2.0, 3.0}) {
            for (double tau : {3.0, 50.0, 1e5}) {
                const ModelSpec m = calibrate(kind, SubbotinShape(z), CanonicalParams::from_tau(tau, 0.4), 10);
                const double q = q_opt(m);
                CHECK(q >= 1.0);
                const double t = bfdr_threshold(m, 1.0 / (1.0 + q)).value;
                CHECK(t == doctest::Approx(m.bayes_threshold()).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("Laplace scale: q_opt equals sigma")
{
    for (double tau : {2.0, 5.0, 10.0, 1000.0}) {
        const ModelSpec m = calibrate(ModelKind::Scale, SubbotinShape(1.0), CanonicalParams::from_tau(tau, 0.3), 10);
        CHECK(q_opt(m) == doctest::Approx(m.effect()).epsilon(1e-10));
    }
}

TEST_CASE("optimal level for the Gaussian location family at m = 1e6")
{
    const double a = alpha_opt(Family::GaussianLocation, 1000000, 0.5, 0.5);
    CHECK(a >= 0.165);
    CHECK(a <= 0.175);
}

TEST_CASE("explicit optimal-level equations agree with the generic route")
{
    for (Family f : {Family::GaussianLocation, Family::GaussianScale, Family::LaplaceScale}) {
        for (std::size_t m : {10UL, 1000UL, 1000000UL}) {
            for (double b0 : {0.2, 0.5, 0.9}) {
                for (double c0 : {0.1, 0.5, 0.85}) {
                    const double explicit_form = alpha_opt(f, m, b0, c0);
                    const double generic = alpha_opt(kind_of(f), shape_of(f), m, b0, c0);
                    CHECK(explicit_form == doctest::Approx(generic).epsilon(1e-8));
                }
            }
        }
    }
}

TEST_CASE("level choices")
{
    const LevelChoice fixed = LevelChoice::fixed(0.1);
    CHECK(fixed.is_fixed());
    CHECK(fixed.label() == "0.1");
    CHECK(fixed.resolve(ModelKind::Location, SubbotinShape(2.0), 100) == 0.1);
    const LevelChoice opt = LevelChoice::opt_at(0.5, 0.5);
    CHECK(opt.label() == "opt(0.5;0.5)");
    CHECK(opt.resolve(ModelKind::Location, SubbotinShape(2.0), 1000000) ==
          doctest::Approx(alpha_opt(Family::GaussianLocation, 1000000, 0.5, 0.5)));
    // tau = m^beta0 = 2 and C0 = 0.5 is the sigma = 4 Laplace model.
    CHECK(LevelChoice::opt_at(0.5, 0.5).resolve(ModelKind::Scale, SubbotinShape(1.0), 4) ==
          doctest::Approx(0.2).epsilon(1e-10));
    CHECK_THROWS_AS(LevelChoice::fixed(1.0), DomainError);
    CHECK_THROWS_AS(LevelChoice::opt_at(0.0, 0.5), DomainError);
}

TEST_CASE("family names")
{
    CHECK(parse_family("laplace-scale") == Family::LaplaceScale);
    CHECK(to_string(Family::GaussianScale) == "gaussian-scale");
    CHECK(kind_of(Family::GaussianLocation) == ModelKind::Location);
    CHECK(shape_of(Family::LaplaceScale).is_laplace());
    CHECK_THROWS_AS(parse_family("cauchy"), DomainError);
}

TEST_CASE("invalid inputs")
{
    const std::vector<double> empty;
    CHECK_THROWS_AS(bh_threshold(empty, 0.1), DomainError);
    const std::vector<double> bad{0.2, 1.5};
    CHECK_THROWS_AS(bh_threshold(bad, 0.1), DomainError);
    const std::vector<double> ok{0.2, 0.5};
    CHECK_THROWS_AS(bh_threshold(ok, 0.0), DomainError);
    CHECK_THROWS_AS(bh_threshold(ok, 1.0), DomainError);
}
