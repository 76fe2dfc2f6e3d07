#include "bernmm/risk.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bernmm {

ParamSpace::ParamSpace(double eta) : eta_(eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::domain_error("eta must lie in [0, 1], got " + std::to_string(eta));
    }
}

const char* to_string(SupKind kind) noexcept {
    switch (kind) {
        case SupKind::LeftEndpoint: return "LeftEndpoint";
        case SupKind::RightEndpoint: return "RightEndpoint";
        case SupKind::InteriorVertex: return "InteriorVertex";
        case SupKind::Constant: return "Constant";
    }
    return "Unknown";
}

RiskPolynomial risk_polynomial(const BinaryEstimator& est) noexcept {
    const double a = est.a;
    const double b = est.b;
    return {2.0 * a - 2.0 * b + 1.0, b * b - a * a - 2.0 * a, a * a};
}

double risk_at(const BinaryEstimator& est, double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw std::domain_error("theta must lie in [0, 1], got " + std::to_string(theta));
    }
    const double miss0 = theta - est.a;
    const double miss1 = theta - est.b;
    return miss0 * miss0 * (1.0 - theta) + miss1 * miss1 * theta;
}

SupRiskResult sup_risk(const BinaryEstimator& est, const ParamSpace& space) {
    const RiskPolynomial poly = risk_polynomial(est);
    const double eta = space.eta();

    if (poly.is_constant()) {
        return {risk_at(est, 0.0), 0.0, SupKind::Constant};
    }

    const double left = risk_at(est, 0.0);
    const double right = risk_at(est, eta);
    const SupRiskResult at_left{left, 0.0, SupKind::LeftEndpoint};
    const SupRiskResult at_right{right, eta, SupKind::RightEndpoint};

    if (poly.c2 >= 0.0) {
        return left >= right ? at_left : at_right;
    }

    const double vertex = -poly.c1 / (2.0 * poly.c2);
    if (vertex < 0.0) return at_left;
    if (vertex > eta) return at_right;
    return {risk_at(est, vertex), vertex, SupKind::InteriorVertex};
}

std::vector<CurvePoint> risk_curve(const BinaryEstimator& est, const ParamSpace& space,
                                   std::size_t points) {
    if (points < 2) {
        throw std::invalid_argument("risk_curve needs at least 2 points");
    }
    std::vector<CurvePoint> curve;
    curve.reserve(points);
    const double eta = space.eta();
    const auto last = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        const double theta = (i + 1 == points) ? eta : eta * (static_cast<double>(i) / last);
        curve.push_back({theta, risk_at(est, theta)});
    }
    return curve;
}

}  // namespace bernmm
