#pragma once

// Reference computations for the test suites. Nothing here calls into the
// library's risk arithmetic.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;

/// E_theta (theta - delta(X))^2 by enumerating X in {0, 1}, in exact rationals.
inline Rational expected_loss(const Rational& a, const Rational& b, const Rational& theta) {
    const Rational p0 = 1 - theta;  // P(X = 0)
    const Rational p1 = theta;      // P(X = 1)
    return (theta - a) * (theta - a) * p0 + (theta - b) * (theta - b) * p1;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Same expectation in long double, for irrational inputs.
inline long double expected_loss_ld(long double a, long double b, long double theta) {
    return (theta - a) * (theta - a) * (1.0L - theta) + (theta - b) * (theta - b) * theta;
}

/// Brute-force sup over a dense theta grid on [0, eta] followed by local
/// ternary refinement around the best sample.
struct DenseSup {
    long double value;
    long double theta;
};

inline DenseSup dense_sup(long double a, long double b, long double eta, std::size_t samples = 20000) {
    DenseSup best{expected_loss_ld(a, b, 0.0L), 0.0L};
    std::size_t best_i = 0;
    for (std::size_t i = 1; i <= samples; ++i) {
        const long double t = eta * static_cast<long double>(i) / static_cast<long double>(samples);
        const long double v = expected_loss_ld(a, b, t);
        if (v > best.value) {
            best = {v, t};
            best_i = i;
        }
    }
    long double lo = eta * static_cast<long double>(best_i == 0 ? 0 : best_i - 1) / samples;
    long double hi = eta * static_cast<long double>(std::min(best_i + 1, samples)) / samples;
    for (int iter = 0; iter < 200; ++iter) {
        const long double m1 = lo + (hi - lo) / 3.0L;
        const long double m2 = hi - (hi - lo) / 3.0L;
        if (expected_loss_ld(a, b, m1) < expected_loss_ld(a, b, m2)) lo = m1;
        else hi = m2;
    }
    const long double mid = 0.5L * (lo + hi);
    const long double v = expected_loss_ld(a, b, mid);
    if (v > best.value) best = {v, mid};
    return best;
}

/// Units in the last place between x and y, measured at the larger magnitude.
inline double ulp_distance(double x, double y) {
    if (x == y) return 0.0;
    const double scale = std::max(std::abs(x), std::abs(y));
    return std::abs(x - y) / (std::nextafter(scale, std::numeric_limits<double>::infinity()) - scale);
}

/// Seeded uniform generator for hand-rolled property tests.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo = 0.0, double hi = 1.0) {
        return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace oracle
