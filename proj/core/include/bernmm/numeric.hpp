#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bernmm/risk.hpp"

namespace bernmm {

/// Raised when a solver exhausts its iteration budget.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Spacing of the square search grid over [0, eta]^2.
class GridSpec {
public:
    /// Throws std::invalid_argument unless step > 0 and finite.
    explicit GridSpec(double step);

    double step() const noexcept { return step_; }

private:
    double step_;
};

/// Grid coordinates 0, step, 2 step, ... with the last entry clamped to eta,
/// so both ends of [0, eta] are always present. Returns {0} when eta == 0.
/// Throws std::invalid_argument when step > eta > 0.
std::vector<double> grid_axis(const ParamSpace& space, const GridSpec& grid);

struct NumericSolution {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    std::size_t evaluations = 0;  // sup_risk calls
    bool refined = false;
    /// Objective after the starting point and after each refinement sweep.
    std::vector<double> objective_trace;

    BinaryEstimator estimator() const noexcept { return {a, b}; }
};

/// Exhaustive minimisation of sup_risk over the grid. Equal sup risks are
/// ranked by risk_at(0) + risk_at(eta), then by the lexicographically smallest
/// (a, b), so the answer does not depend on `threads`.
NumericSolution grid_minimax(const ParamSpace& space, const GridSpec& grid, unsigned threads = 1);

struct RefineOptions {
    std::size_t max_sweeps = 200;
    /// Half-width of the first search box around the start; <= 0 picks eta / 16.
    double initial_half_width = 0.0;
};

/// Golden-section polish of a starting estimator.
///
/// Each sweep searches a box centred on the current point: an outer
/// golden-section over a, and for every trial a an inner golden-section over b,
/// each run until its bracket is narrower than tol. Trial points are ranked like
/// grid_minimax ranks nodes: sup risk, then endpoint-risk sum. The objective is convex, so
/// a box minimum away from the box edges is the global minimum; a minimum on an
/// edge re-centres the box and doubles it. A move is accepted only if it lowers
/// the objective, so objective_trace never increases.
///
/// Throws std::invalid_argument for tol <= 0 or a start outside [0, eta]^2,
/// ConvergenceError after max_sweeps sweeps without an interior minimum.
NumericSolution refine(const ParamSpace& space, const BinaryEstimator& start, double tol,
                       const RefineOptions& options = {});

/// Estimator for n Bernoulli observations: d[k] is the estimate after k successes.
class GeneralEstimator {
public:
    /// Throws std::invalid_argument if `estimates` is empty or holds a non-finite value.
    explicit GeneralEstimator(std::vector<double> estimates);

    static GeneralEstimator from_binary(const BinaryEstimator& est);
    /// d[k] = classic_minimax(n, k / n).
    static GeneralEstimator classic(long long n);

    std::size_t n() const noexcept { return estimates_.size() - 1; }
    const std::vector<double>& estimates() const noexcept { return estimates_; }

private:
    std::vector<double> estimates_;
};

inline constexpr std::size_t kDefaultScanPoints = 4096;

/// sum_k C(n,k) theta^k (1-theta)^(n-k) (theta - d[k])^2.
/// Throws std::domain_error unless 0 <= theta <= 1.
double general_risk_at(const GeneralEstimator& est, double theta);

/// Sampled supremum for n >= 1: the risk is evaluated at scan_points + 1
/// evenly spaced points of [0, eta] and the best sample is polished by
/// golden-section within its neighbouring cells. Kind is never Constant.
/// Throws std::invalid_argument for n == 0 or scan_points < 16.
SupRiskResult general_sup_risk(const GeneralEstimator& est, const ParamSpace& space,
                               std::size_t scan_points = kDefaultScanPoints);

inline constexpr const char* kGeneratorName = "std::mt19937_64";

struct MonteCarloRisk {
    double mean = 0.0;
    double std_error = 0.0;  // infinite for a single sample
};

/// Mean squared error over `samples` simulated data sets of n Bernoulli(theta)
/// draws. Reproducible for a fixed seed on every platform.
/// Throws std::domain_error for theta outside [0, 1], std::invalid_argument for samples == 0.
MonteCarloRisk monte_carlo_risk(const GeneralEstimator& est, double theta, std::size_t samples,
                                std::uint64_t seed);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
template <class Engine>
double unit_uniform(Engine& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace bernmm
