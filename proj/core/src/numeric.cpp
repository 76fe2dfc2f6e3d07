#include "bernmm/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <utility>

#include "bernmm/analytic.hpp"
#include "golden.hpp"

namespace bernmm {

namespace {

// Sum of the two endpoint risks. Where sup_risk is flat in one coordinate
// (one endpoint dominates), ranking by this second key pulls the point towards
// the balanced optimum instead of leaving it anywhere on the flat.
double endpoint_balance(const ParamSpace& space, const BinaryEstimator& est) {
    return risk_at(est, 0.0) + risk_at(est, space.eta());
}

struct GridCandidate {
    double value = std::numeric_limits<double>::infinity();
    double balance = std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    std::size_t j = 0;
};

bool better(const GridCandidate& lhs, const GridCandidate& rhs) {
    if (lhs.value != rhs.value) return lhs.value < rhs.value;
    if (lhs.balance != rhs.balance) return lhs.balance < rhs.balance;
    if (lhs.i != rhs.i) return lhs.i < rhs.i;
    return lhs.j < rhs.j;
}

GridCandidate scan_rows(const std::vector<double>& axis, const ParamSpace& space, std::size_t row_begin,
                        std::size_t row_end) {
    GridCandidate best;
    for (std::size_t i = row_begin; i < row_end; ++i) {
        for (std::size_t j = 0; j < axis.size(); ++j) {
            const BinaryEstimator est{axis[i], axis[j]};
            const double value = sup_risk(est, space).value;
            if (value > best.value) continue;
            const GridCandidate candidate{value, endpoint_balance(space, est), i, j};
            if (better(candidate, best)) best = candidate;
        }
    }
    return best;
}

double objective(const ParamSpace& space, double a, double b, std::size_t& evaluations) {
    ++evaluations;
    return sup_risk({a, b}, space).value;
}

using RankedValue = std::pair<double, double>;

RankedValue ranked_objective(const ParamSpace& space, double a, double b, std::size_t& evaluations) {
    return {objective(space, a, b, evaluations), endpoint_balance(space, {a, b})};
}

// Binomial log-coefficients log C(n, k) for k = 0..n.
std::vector<double> log_binomials(std::size_t n) {
    std::vector<double> out(n + 1);
    const double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);
    for (std::size_t k = 0; k <= n; ++k) {
        out[k] = log_n_fact - std::lgamma(static_cast<double>(k) + 1.0) -
                 std::lgamma(static_cast<double>(n - k) + 1.0);
    }
    return out;
}

double general_risk(const std::vector<double>& d, const std::vector<double>& log_choose, double theta) {
    const std::size_t n = d.size() - 1;
    if (theta == 0.0) return d[0] * d[0];
    if (theta == 1.0) {
        const double miss = 1.0 - d[n];
        return miss * miss;
    }
    const double log_p = std::log(theta);
    const double log_q = std::log1p(-theta);
    double total = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double weight = std::exp(log_choose[k] + static_cast<double>(k) * log_p +
                                       static_cast<double>(n - k) * log_q);
        const double miss = theta - d[k];
        total += weight * miss * miss;
    }
    return total;
}

void require_theta(double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw std::domain_error("theta must lie in [0, 1], got " + std::to_string(theta));
    }
}

}  // namespace

GridSpec::GridSpec(double step) : step_(step) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw std::invalid_argument("grid step must be positive and finite, got " + std::to_string(step));
    }
}

std::vector<double> grid_axis(const ParamSpace& space, const GridSpec& grid) {
    const double eta = space.eta();
    if (eta == 0.0) return {0.0};
    if (grid.step() > eta) {
        throw std::invalid_argument("grid step " + std::to_string(grid.step()) + " exceeds eta " +
                                    std::to_string(eta));
    }
    // Number of whole steps strictly below eta, ignoring rounding in eta / step.
    const auto intervals = static_cast<std::size_t>(std::ceil(eta / grid.step() - 1e-9));
    std::vector<double> axis;
    axis.reserve(intervals + 1);
    for (std::size_t i = 0; i < intervals; ++i) {
        axis.push_back(static_cast<double>(i) * grid.step());
    }
    axis.push_back(eta);
    return axis;
}

NumericSolution grid_minimax(const ParamSpace& space, const GridSpec& grid, unsigned threads) {
    if (space.eta() == 0.0) {
        return {0.0, 0.0, 0.0, 0, false, {0.0}};
    }
    const std::vector<double> axis = grid_axis(space, grid);
    const std::size_t rows = axis.size();
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, rows);

    GridCandidate best;
    if (workers == 1) {
        best = scan_rows(axis, space, 0, rows);
    } else {
        std::vector<GridCandidate> partial(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = rows * w / workers;
            const std::size_t end = rows * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] { partial[w] = scan_rows(axis, space, begin, end); });
        }
        for (auto& t : pool) t.join();
        for (const auto& candidate : partial) {
            if (better(candidate, best)) best = candidate;
        }
    }

    return {axis[best.i], axis[best.j], best.value, rows * rows, false, {best.value}};
}

NumericSolution refine(const ParamSpace& space, const BinaryEstimator& start, double tol,
                       const RefineOptions& options) {
    const double eta = space.eta();
    if (!(tol > 0.0)) {
        throw std::invalid_argument("refine tolerance must be positive, got " + std::to_string(tol));
    }
    if (!(start.a >= 0.0 && start.a <= eta && start.b >= 0.0 && start.b <= eta)) {
        throw std::invalid_argument("refine start must lie in [0, eta]^2");
    }

    std::size_t evaluations = 0;
    NumericSolution current{start.a, start.b, objective(space, start.a, start.b, evaluations), 0, true, {}};
    current.objective_trace.push_back(current.value);
    if (eta == 0.0) {
        current.evaluations = evaluations;
        return current;
    }

    // Line searches run well below tol so that kinks in the objective do not
    // leave a value error of order slope * tol.
    const double line_width = tol * 1e-3;
    const double accept_margin = 4.0 * std::numeric_limits<double>::epsilon();
    double half_width = options.initial_half_width > 0.0 ? options.initial_half_width : eta / 16.0;
    half_width = std::max(half_width, tol);

    for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
        const double a_lo = std::max(0.0, current.a - half_width);
        const double a_hi = std::min(eta, current.a + half_width);
        const double b_lo = std::max(0.0, current.b - half_width);
        const double b_hi = std::min(eta, current.b + half_width);

        auto profile = [&](double a) {
            return detail::golden_minimize(
                       [&](double b) { return ranked_objective(space, a, b, evaluations); }, b_lo, b_hi,
                       line_width)
                .fx;
        };
        const auto outer = detail::golden_minimize(profile, a_lo, a_hi, line_width);
        const auto inner = detail::golden_minimize(
            [&](double b) { return ranked_objective(space, outer.x, b, evaluations); }, b_lo, b_hi,
            line_width);
        const double cand_a = outer.x;
        const double cand_b = inner.x;
        const double cand_value = objective(space, cand_a, cand_b, evaluations);

        if (cand_value < current.value - accept_margin * current.value) {
            current.a = cand_a;
            current.b = cand_b;
            current.value = cand_value;
        }
        current.objective_trace.push_back(current.value);

        const double edge = 4.0 * line_width;
        const bool on_edge = (a_lo > 0.0 && cand_a - a_lo < edge) || (a_hi < eta && a_hi - cand_a < edge) ||
                             (b_lo > 0.0 && cand_b - b_lo < edge) || (b_hi < eta && b_hi - cand_b < edge);
        if (!on_edge) {
            current.evaluations = evaluations;
            return current;
        }
        half_width *= 2.0;
    }

    throw ConvergenceError("refine did not converge within " + std::to_string(options.max_sweeps) +
                           " sweeps");
}

GeneralEstimator::GeneralEstimator(std::vector<double> estimates) : estimates_(std::move(estimates)) {
    if (estimates_.empty()) {
        throw std::invalid_argument("estimator needs n + 1 estimates");
    }
    for (const double d : estimates_) {
        if (!std::isfinite(d)) throw std::invalid_argument("estimates must be finite");
    }
}

GeneralEstimator GeneralEstimator::from_binary(const BinaryEstimator& est) {
    return GeneralEstimator({est.a, est.b});
}

GeneralEstimator GeneralEstimator::classic(long long n) {
    if (n < 1) throw std::invalid_argument("sample size must be at least 1");
    std::vector<double> d(static_cast<std::size_t>(n) + 1);
    for (long long k = 0; k <= n; ++k) {
        d[static_cast<std::size_t>(k)] = classic_minimax(n, static_cast<double>(k) / static_cast<double>(n));
    }
    return GeneralEstimator(std::move(d));
}

double general_risk_at(const GeneralEstimator& est, double theta) {
    require_theta(theta);
    return general_risk(est.estimates(), log_binomials(est.n()), theta);
}

SupRiskResult general_sup_risk(const GeneralEstimator& est, const ParamSpace& space, std::size_t scan_points) {
    if (est.n() == 0) throw std::invalid_argument("general_sup_risk needs n >= 1");
    if (scan_points < 16) throw std::invalid_argument("general_sup_risk needs at least 16 scan points");

    const auto& d = est.estimates();
    const auto log_choose = log_binomials(est.n());
    const double eta = space.eta();
    auto risk = [&](double theta) { return general_risk(d, log_choose, theta); };

    auto theta_at = [&](std::size_t i) {
        return i == scan_points ? eta : eta * (static_cast<double>(i) / static_cast<double>(scan_points));
    };

    std::size_t best_i = 0;
    double best_value = risk(0.0);
    for (std::size_t i = 1; i <= scan_points; ++i) {
        const double value = risk(theta_at(i));
        if (value > best_value) {
            best_value = value;
            best_i = i;
        }
    }

    double theta_star = theta_at(best_i);
    if (eta > 0.0) {
        const double lo = theta_at(best_i == 0 ? 0 : best_i - 1);
        const double hi = theta_at(std::min(best_i + 1, scan_points));
        const auto polished = detail::golden_minimize([&](double t) { return -risk(t); }, lo, hi, 1e-13);
        if (-polished.fx > best_value) theta_star = polished.x;
    }

    SupKind kind = SupKind::InteriorVertex;
    if (theta_star == 0.0) kind = SupKind::LeftEndpoint;
    else if (theta_star == eta) kind = SupKind::RightEndpoint;
    return {risk(theta_star), theta_star, kind};
}

MonteCarloRisk monte_carlo_risk(const GeneralEstimator& est, double theta, std::size_t samples,
                                std::uint64_t seed) {
    require_theta(theta);
    if (samples == 0) throw std::invalid_argument("monte_carlo_risk needs at least one sample");

    std::mt19937_64 engine(seed);
    const auto& d = est.estimates();
    const std::size_t n = est.n();

    // Welford running mean and sum of squared deviations.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        std::size_t successes = 0;
        for (std::size_t trial = 0; trial < n; ++trial) {
            if (unit_uniform(engine) < theta) ++successes;
        }
        const double miss = theta - d[successes];
        const double loss = miss * miss;
        const double delta = loss - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (loss - mean);
    }

    if (samples == 1) return {mean, std::numeric_limits<double>::infinity()};
    const double variance = m2 / static_cast<double>(samples - 1);
    return {mean, std::sqrt(variance / static_cast<double>(samples))};
}

}  // namespace bernmm
