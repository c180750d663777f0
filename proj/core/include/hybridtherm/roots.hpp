#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "hybridtherm/error.hpp"

namespace hybridtherm {

/// Bisects a sign change of `f` on [lo, hi] until the bracket width is below
/// rel_tol * max(|lo|, |hi|) (or rel_tol when the bracket straddles zero).
/// Throws NumericalError(NoCrossing) when f has the same sign at both ends.
inline std::pair<double, double> bisect_sign_change(const std::function<double(double)>& f, double lo,
                                                    double hi, double rel_tol = 1e-10) {
    const double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return {lo, lo};
    if (fhi == 0.0) return {hi, hi};
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw NumericalError(NumericalFailure::NoCrossing, "no sign change on the bracket");
    }
    auto done = [rel_tol](double a, double b) {
        const double scale = std::max({std::abs(a), std::abs(b), 1.0});
        return std::abs(b - a) <= rel_tol * scale;
    };
    return boost::math::tools::bisect(f, lo, hi, done);
}

}  // namespace hybridtherm
