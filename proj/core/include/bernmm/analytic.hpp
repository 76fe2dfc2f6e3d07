#pragma once

#include "bernmm/risk.hpp"

namespace bernmm {

/// Which closed-form branch produced a minimax solution. Restricted covers
/// eta <= 3/4 (inclusive), Unrestricted covers eta > 3/4.
enum class Branch { Restricted, Unrestricted };

const char* to_string(Branch branch) noexcept;

inline constexpr double kBranchBoundary = 0.75;
inline constexpr double kUnrestrictedValue = 1.0 / 16.0;

struct MinimaxSolution {
    double a_star = 0.0;
    double b_star = 0.0;
    double value = 0.0;
    Branch branch = Branch::Restricted;

    BinaryEstimator estimator() const noexcept { return {a_star, b_star}; }
};

/// The geometry of a level set {f(a, b, eta) = gamma}: an axis-aligned
/// ellipse centred on (eta, eta).
struct EllipseLevel {
    double gamma = 0.0;
    double center_a = 0.0;
    double center_b = 0.0;
    double semi_axis_a = 0.0;  // sqrt(gamma / (1 - eta))
    double semi_axis_b = 0.0;  // sqrt(gamma / eta)
};

/// Closed-form minimax estimator for one Bernoulli observation with
/// theta restricted to [0, eta]:
///
///   eta <= 3/4:  a* = sqrt(1 - eta) - (1 - eta),  b* = eta
///   eta >  3/4:  a* = 1/4,                        b* = 3/4
///
/// The two branches meet at eta = 3/4.
MinimaxSolution minimax_n1(const ParamSpace& space);

/// Minimax risk: (sqrt(1 - eta) - (1 - eta))^2 for eta <= 3/4. Above 3/4 it is
/// the constant risk of (1/4, 3/4), evaluated from the risk formula.
double minimax_value(const ParamSpace& space);

/// (sqrt(n) xbar + 1/2) / (sqrt(n) + 1), minimax over the full [0, 1].
/// Throws std::invalid_argument for n < 1, std::domain_error for xbar outside [0, 1].
double classic_minimax(long long n, double xbar);

/// (a + 1 - eta)^2 - (b - eta)^2 - (1 - eta).
///
/// f(a,b,0) - f(a,b,eta) == eta * gap, so for eta > 0 the gap is nonnegative
/// exactly when the risk at theta = 0 dominates the risk at theta = eta.
double hyperbola_gap(const BinaryEstimator& est, const ParamSpace& space);

/// Throws std::domain_error unless 0 < eta < 1 and gamma > 0.
EllipseLevel ellipse_level(const ParamSpace& space, double gamma);

/// (1 - eta)(a - eta)^2 / gamma + eta (b - eta)^2 / gamma - 1; zero iff
/// f(a, b, eta) == gamma. Same domain rules as ellipse_level.
double ellipse_residual(const BinaryEstimator& est, const ParamSpace& space, double gamma);

/// (1/2) [(a - 1/2)^2 + (b - 1/2)^2], which equals risk_at(est, 1/2).
double case_b_risk_at_half(const BinaryEstimator& est) noexcept;

}  // namespace bernmm
