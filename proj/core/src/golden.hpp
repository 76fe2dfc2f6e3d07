#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <type_traits>

namespace bernmm::detail {

template <class Value>
struct LineMinimum {
    double x = 0.0;
    Value fx{};
};

/// Golden-section minimisation of f on [lo, hi] until the bracket is narrower
/// than `width`. The returned point is the best of every evaluated point,
/// including both ends of the original interval. f may return any totally
/// ordered value, e.g. a pair compared lexicographically.
template <class F>
auto golden_minimize(F&& f, double lo, double hi, double width, std::size_t max_iter = 400) {
    constexpr double inv_phi = 0.6180339887498948482;
    const double end_lo = lo;
    const double end_hi = hi;
    // Below a few ulps the bracket can no longer shrink.
    const double floor_width = 8.0 * std::numeric_limits<double>::epsilon() *
                               std::max({1.0, std::abs(lo), std::abs(hi)});
    width = std::max(width, floor_width);

    using Value = std::decay_t<decltype(f(lo))>;
    using Result = LineMinimum<Value>;
    if (hi - lo <= width) {
        const double mid = 0.5 * (lo + hi);
        return Result{mid, f(mid)};
    }

    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    Value f1 = f(x1);
    Value f2 = f(x2);
    for (std::size_t iter = 0; iter < max_iter && hi - lo > width; ++iter) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }

    Result best = f1 <= f2 ? Result{x1, f1} : Result{x2, f2};
    for (const double end : {end_lo, end_hi}) {
        const Value fe = f(end);
        if (fe < best.fx) best = {end, fe};
    }
    return best;
}

}  // namespace bernmm::detail
