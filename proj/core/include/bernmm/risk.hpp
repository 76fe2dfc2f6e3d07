#pragma once

#include <cstddef>
#include <vector>

namespace bernmm {

/// Restricted parameter space [0, eta] for a Bernoulli proportion.
class ParamSpace {
public:
    /// Throws std::domain_error unless 0 <= eta <= 1.
    explicit ParamSpace(double eta);

    double eta() const noexcept { return eta_; }
    bool contains(double theta) const noexcept { return theta >= 0.0 && theta <= eta_; }

private:
    double eta_;
};

/// Single-observation estimator: a = delta(X = 0), b = delta(X = 1).
struct BinaryEstimator {
    double a = 0.0;
    double b = 0.0;
};

/// Risk of a BinaryEstimator as c2*theta^2 + c1*theta + c0.
struct RiskPolynomial {
    double c2 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;

    double operator()(double theta) const noexcept { return (c2 * theta + c1) * theta + c0; }
    bool is_constant() const noexcept { return c2 == 0.0 && c1 == 0.0; }
};

enum class SupKind { LeftEndpoint, RightEndpoint, InteriorVertex, Constant };

const char* to_string(SupKind kind) noexcept;

struct SupRiskResult {
    double value = 0.0;
    double theta_star = 0.0;
    SupKind kind = SupKind::LeftEndpoint;
};

struct CurvePoint {
    double theta = 0.0;
    double risk = 0.0;
};

RiskPolynomial risk_polynomial(const BinaryEstimator& est) noexcept;

/// Expected squared error at theta, evaluated as the two-term expectation
/// (theta - a)^2 (1 - theta) + (theta - b)^2 theta. Both terms are
/// nonnegative on [0, 1], so the result keeps full relative precision.
/// Throws std::domain_error unless 0 <= theta <= 1.
double risk_at(const BinaryEstimator& est, double theta);

/// Exact supremum of the risk over the space.
///
/// Convex or linear risk (c2 >= 0) peaks at an endpoint; f(0) == f(eta) reports
/// LeftEndpoint, and a constant polynomial reports Constant at theta = 0.
/// Concave risk peaks at -c1 / (2 c2) when that lies in [0, eta], otherwise
/// at the nearer endpoint. The reported value is always risk_at(theta_star).
SupRiskResult sup_risk(const BinaryEstimator& est, const ParamSpace& space);

/// `points` evenly spaced samples of the risk on [0, eta], both ends included.
/// Throws std::invalid_argument when points < 2.
std::vector<CurvePoint> risk_curve(const BinaryEstimator& est, const ParamSpace& space,
                                   std::size_t points);

}  // namespace bernmm
