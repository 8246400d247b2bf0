#ifndef FDRCLASS_SRC_ROOTS_HPP
#define FDRCLASS_SRC_ROOTS_HPP

// Internal bracketing helpers shared by the model and threshold code.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "fdrclass/error.hpp"

namespace fdrclass::detail {

/// Root of an increasing function on [lo, hi] with f(lo) <= 0 <= f(hi).
template <class F>
double solve_bracketed(F&& f, double lo, double hi, double flo, double fhi, const char* what)
{
    if (flo == 0.0) {
        return lo;
    }
    if (fhi == 0.0) {
        return hi;
    }
    if (!(flo < 0.0 && fhi > 0.0)) {
        throw SolverError(std::string(what) + ": root not bracketed");
    }
    std::uintmax_t iters = 300;
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
    auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    if (iters >= 300) {
        throw SolverError(std::string(what) + ": no convergence");
    }
    return 0.5 * (a + b);
}

/// Root of an increasing function, expanding [lo, hi] geometrically away
/// from `pivot` until the sign changes.
template <class F>
double solve_increasing(F&& f, double lo, double hi, const char* what, int max_expansions = 200)
{
    double flo = f(lo);
    double fhi = f(hi);
    for (int i = 0; flo > 0.0; ++i) {
        if (i == max_expansions || !std::isfinite(lo)) {
            throw SolverError(std::string(what) + ": lower bracket not found");
        }
        double width = hi - lo;
        hi = lo;
        fhi = flo;
        lo -= 2.0 * width;
        flo = f(lo);
    }
    for (int i = 0; fhi < 0.0; ++i) {
        if (i == max_expansions || !std::isfinite(hi)) {
            throw SolverError(std::string(what) + ": upper bracket not found");
        }
        double width = hi - lo;
        lo = hi;
        flo = fhi;
        hi += 2.0 * width;
        fhi = f(hi);
    }
    return solve_bracketed(f, lo, hi, flo, fhi, what);
}

} // namespace fdrclass::detail

#endif // FDRCLASS_SRC_ROOTS_HPP
