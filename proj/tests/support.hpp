// Independent oracles shared by the test suites.
#ifndef FDRCLASS_TESTS_SUPPORT_HPP
#define FDRCLASS_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace fdrclass::testing {

using Rational = boost::multiprecision::cpp_rational;

// Steck's determinant for P(U_(1) <= s_1, ..., U_(n) <= s_n):
//     n! det[ s_i^(j-i+1) / (j-i+1)! ],  entries with j < i - 1 are 0,
// evaluated exactly over the rationals (doubles are dyadic rationals).
inline double steck_determinant(const std::vector<double>& s)
{
    const std::size_t n = s.size();
    if (n == 0) {
        return 1.0;
    }
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        const Rational si(s[i]);
        for (std::size_t j = 0; j < n; ++j) {
            if (j + 1 < i) {
                continue;
            }
            const std::size_t e = j + 1 - i;
            Rational term(1);
            for (std::size_t k = 1; k <= e; ++k) {
                term *= si;
                term /= k;
            }
            a[i][j] = term;
        }
    }
    Rational det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) {
            ++pivot;
        }
        if (pivot == n) {
            return 0.0;
        }
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a[r][col] == 0) {
                continue;
            }
            const Rational f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    for (std::size_t k = 2; k <= n; ++k) {
        det *= k;
    }
    return static_cast<double>(det);
}

// Asymptotic Kolmogorov tail with Stephens' small-sample correction.
inline double ks_pvalue(std::vector<double> sample, const std::function<double(double)>& cdf)
{
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    const double x = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        p += (k % 2 == 1 ? 2.0 : -2.0) * std::exp(-2.0 * k * k * x * x);
    }
    return std::clamp(p, 0.0, 1.0);
}

// Pearson goodness of fit against equiprobable bins.
inline double chi_square_pvalue(const std::vector<std::size_t>& counts)
{
    double total = 0.0;
    for (std::size_t c : counts) {
        total += static_cast<double>(c);
    }
    const double expected = total / static_cast<double>(counts.size());
    double stat = 0.0;
    for (std::size_t c : counts) {
        const double diff = static_cast<double>(c) - expected;
        stat += diff * diff / expected;
    }
    const boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

template <class F>
double integrate(F f, double a, double b)
{
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

} // namespace fdrclass::testing

#endif // FDRCLASS_TESTS_SUPPORT_HPP
