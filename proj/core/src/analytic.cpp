#include "bernmm/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bernmm {

namespace {

void require_open_interior(const ParamSpace& space) {
    const double eta = space.eta();
    if (!(eta > 0.0 && eta < 1.0)) {
        throw std::domain_error("level-set ellipse is degenerate for eta = " + std::to_string(eta));
    }
}

void require_positive_gamma(double gamma) {
    if (!(gamma > 0.0)) {
        throw std::domain_error("ellipse level gamma must be positive, got " + std::to_string(gamma));
    }
}

double restricted_a_star(double eta) {
    const double slack = 1.0 - eta;
    return std::sqrt(slack) - slack;
}

}  // namespace

const char* to_string(Branch branch) noexcept {
    return branch == Branch::Restricted ? "Restricted" : "Unrestricted";
}

MinimaxSolution minimax_n1(const ParamSpace& space) {
    const double eta = space.eta();
    if (eta <= kBranchBoundary) {
        return {restricted_a_star(eta), eta, minimax_value(space), Branch::Restricted};
    }
    return {0.25, 0.75, minimax_value(space), Branch::Unrestricted};
}

double minimax_value(const ParamSpace& space) {
    const double eta = space.eta();
    if (eta <= kBranchBoundary) {
        const double a = restricted_a_star(eta);
        return a * a;
    }
    // Constant risk: every theta gives the same value.
    return risk_at({0.25, 0.75}, 0.0);
}

double classic_minimax(long long n, double xbar) {
    if (n < 1) {
        throw std::invalid_argument("sample size must be at least 1, got " + std::to_string(n));
    }
    if (!(xbar >= 0.0 && xbar <= 1.0)) {
        throw std::domain_error("sample mean must lie in [0, 1], got " + std::to_string(xbar));
    }
    const double root_n = std::sqrt(static_cast<double>(n));
    return (root_n * xbar + 0.5) / (root_n + 1.0);
}

double hyperbola_gap(const BinaryEstimator& est, const ParamSpace& space) {
    const double slack = 1.0 - space.eta();
    const double shifted_a = est.a + slack;
    const double shifted_b = est.b - space.eta();
    return shifted_a * shifted_a - shifted_b * shifted_b - slack;
}

EllipseLevel ellipse_level(const ParamSpace& space, double gamma) {
    require_open_interior(space);
    require_positive_gamma(gamma);
    const double eta = space.eta();
    return {gamma, eta, eta, std::sqrt(gamma / (1.0 - eta)), std::sqrt(gamma / eta)};
}

double ellipse_residual(const BinaryEstimator& est, const ParamSpace& space, double gamma) {
    require_open_interior(space);
    require_positive_gamma(gamma);
    const double eta = space.eta();
    const double da = est.a - eta;
    const double db = est.b - eta;
    return (1.0 - eta) * da * da / gamma + eta * db * db / gamma - 1.0;
}

double case_b_risk_at_half(const BinaryEstimator& est) noexcept {
    const double da = est.a - 0.5;
    const double db = est.b - 0.5;
    return 0.5 * (da * da + db * db);
}

}  // namespace bernmm
