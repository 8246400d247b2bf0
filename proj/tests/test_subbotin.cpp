#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include <fdrclass/error.hpp>
#include <fdrclass/subbotin.hpp>

#include "support.hpp"

using namespace fdrclass;
using fdrclass::testing::integrate;

namespace {

const double kShapes[] = {1.0, 1.3, 1.5, 2.0, 3.0, 5.0};

double rel_err(double a, double b)
{
    return std::fabs(a - b) / std::max(std::fabs(b), std::numeric_limits<double>::min());
}

} // namespace

TEST_CASE("density integrates to one")
{
    for (double z : kShapes) {
        const SubbotinShape s(z);
        const double mass = 2.0 * integrate([&](double x) { return density(s, x); }, 0.0, 60.0);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("normalizer matches its closed form")
{
    const SubbotinShape gauss(2.0);
    CHECK(gauss.normalizer() == doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
    const SubbotinShape laplace(1.0);
    CHECK(laplace.normalizer() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(density(gauss, 0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
}

TEST_CASE("upper tail agrees with quadrature of the density")
{
    for (double z : kShapes) {
        const SubbotinShape s(z);
        for (double u : {0.0, 0.3, 1.0, 2.5, 4.0}) {
            const double q = integrate([&](double x) { return density(s, x); }, u, u + 60.0);
            CHECK(rel_err(upper_tail(s, u), q) < 1e-10);
        }
    }
}

TEST_CASE("upper tail closed forms")
{
    const SubbotinShape gauss(2.0);
    const SubbotinShape laplace(1.0);
    for (double u = -6.0; u <= 30.0; u += 0.37) {
        CHECK(rel_err(upper_tail(gauss, u), 0.5 * std::erfc(u / std::numbers::sqrt2)) < 1e-14);
        const double lap = u >= 0.0 ? 0.5 * std::exp(-u) : 1.0 - 0.5 * std::exp(u);
        CHECK(rel_err(upper_tail(laplace, u), lap) < 1e-14);
        if (u >= 0.0) {
            CHECK(rel_err(upper_tail_general(gauss, u), upper_tail(gauss, u)) < 1e-12);
            CHECK(rel_err(upper_tail_general(laplace, u), upper_tail(laplace, u)) < 1e-12);
        }
    }
    CHECK(upper_tail(gauss, 0.0) == 0.5);
}

TEST_CASE("tail derivative is minus the density")
{
    for (double z : kShapes) {
        const SubbotinShape s(z);
        for (double u : {-1.5, -0.2, 0.4, 1.7, 3.0}) {
            const double h = 1e-5;
            const double fd = -(upper_tail(s, u + h) - upper_tail(s, u - h)) / (2.0 * h);
            CHECK(fd == doctest::Approx(density(s, u)).epsilon(1e-7));
        }
    }
}

TEST_CASE("symmetry of the tail")
{
    for (double z : kShapes) {
        const SubbotinShape s(z);
        for (double u : {0.1, 0.8, 2.0}) {
            CHECK(upper_tail(s, -u) == doctest::Approx(1.0 - upper_tail(s, u)).epsilon(1e-14));
        }
    }
}

TEST_CASE("quantile inverts the upper tail")
{
    for (double z : {1.0, 1.5, 2.0, 3.0}) {
        const SubbotinShape s(z);
        for (double lp = -12.0; lp < 0.0; lp += 0.25) {
            for (double p : {std::pow(10.0, lp), 1.0 - std::pow(10.0, lp)}) {
                const double x = quantile(s, p);
                CHECK(rel_err(upper_tail(s, x), p) < 1e-10);
            }
        }
        CHECK(quantile(s, 0.5) == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("quantile closed forms")
{
    const SubbotinShape gauss(2.0);
    const SubbotinShape laplace(1.0);
    for (double p : {1e-12, 1e-6, 0.01, 0.2, 0.5, 0.7, 0.99}) {
        CHECK(rel_err(quantile_general(gauss, std::min(p, 0.5)), quantile(gauss, std::min(p, 0.5))) < 1e-12);
        if (p < 0.5) {
            CHECK(rel_err(quantile(laplace, p), -std::log(2.0 * p)) < 1e-12);
            CHECK(rel_err(quantile_general(laplace, p), -std::log(2.0 * p)) < 1e-12);
        }
    }
    CHECK(quantile(gauss, 0.025) == doctest::Approx(1.959963984540054).epsilon(1e-13));
}

TEST_CASE("log tail and log quantile reach far beyond underflow")
{
    for (double z : {1.0, 1.5, 2.0, 3.0}) {
        const SubbotinShape s(z);
        for (double lp : {-5.0, -50.0, -700.0, -800.0, -5000.0}) {
            const double x = quantile_log(s, lp);
            CHECK(log_upper_tail(s, x) == doctest::Approx(lp).epsilon(1e-10));
        }
        for (double u : {0.5, 3.0, 10.0}) {
            CHECK(log_upper_tail(s, u) == doctest::Approx(std::log(upper_tail(s, u))).epsilon(1e-12));
        }
    }
}

TEST_CASE("invalid shapes and probabilities are rejected")
{
    CHECK_THROWS_AS(SubbotinShape(0.5), DomainError);
    CHECK_THROWS_AS(SubbotinShape(std::numeric_limits<double>::infinity()), DomainError);
    const SubbotinShape s(2.0);
    CHECK_THROWS_AS(quantile(s, 0.0), DomainError);
    CHECK_THROWS_AS(quantile(s, 1.0), DomainError);
    CHECK_THROWS_AS(quantile(s, std::numeric_limits<double>::quiet_NaN()), DomainError);
}
