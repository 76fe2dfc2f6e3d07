#include "bernmm/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include "bernmm/analytic.hpp"
#include "bernmm/numeric.hpp"
#include "bernmm/risk.hpp"

namespace bernmm::cli {

namespace {

using Tol = VerifyTolerances;

enum PropertyId : std::uint32_t {
    kCaseBDominance = 1,
    kHyperbolaSign = 2,
    kEllipseLevelSet = 3,
    kCaseBIdentity = 4,
};

std::string fmt(const char* pattern, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, x);
    return buf;
}

std::string fmt3(double x) { return fmt("%.3g", x); }

std::mt19937_64 engine_for(std::uint64_t seed, std::size_t eta_index, PropertyId property) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(eta_index), static_cast<std::uint32_t>(property)};
    return std::mt19937_64(seq);
}

double ulp_distance(double x, double y) {
    if (x == y) return 0.0;
    const double scale = std::max(std::abs(x), std::abs(y));
    return std::abs(x - y) / (std::nextafter(scale, std::numeric_limits<double>::infinity()) - scale);
}

PropertyCheck check_grid_oracle(double eta, const NumericSolution& grid_solution, double step) {
    const ParamSpace space(eta);
    const MinimaxSolution exact = minimax_n1(space);
    const double da = std::abs(grid_solution.a - exact.a_star);
    const double db = std::abs(grid_solution.b - exact.b_star);
    const double dv = std::abs(grid_solution.value - exact.value);
    // On [0, 1]^2, sup_risk moves by at most 2 max(|da|, |db|), and some grid
    // node is within step / 2 of the optimum in each coordinate.
    const bool pass = da <= 2.0 * step && db <= 2.0 * step && dv <= step;
    return {eta, "grid_oracle", pass,
            "|da|=" + fmt3(da) + " |db|=" + fmt3(db) + " |dv|=" + fmt3(dv) + " tol=" + fmt3(2.0 * step)};
}

PropertyCheck check_refine_oracle(double eta, const NumericSolution& grid_solution) {
    const ParamSpace space(eta);
    const MinimaxSolution exact = minimax_n1(space);
    try {
        const NumericSolution polished = refine(space, grid_solution.estimator(), Tol::refine_tol);
        const double da = std::abs(polished.a - exact.a_star);
        const double db = std::abs(polished.b - exact.b_star);
        const double dv = std::abs(polished.value - exact.value);
        bool monotone = true;
        for (std::size_t i = 1; i < polished.objective_trace.size(); ++i) {
            monotone = monotone && polished.objective_trace[i] <= polished.objective_trace[i - 1];
        }
        const bool pass =
            monotone && da <= Tol::refine_coord && db <= Tol::refine_coord && dv <= Tol::refine_value;
        return {eta, "refine_oracle", pass,
                "|da|=" + fmt3(da) + " |db|=" + fmt3(db) + " |dv|=" + fmt3(dv) +
                    (monotone ? "" : " non-monotone")};
    } catch (const ConvergenceError& e) {
        return {eta, "refine_oracle", false, e.what()};
    }
}

PropertyCheck check_endpoint_equality(double eta) {
    const BinaryEstimator est = minimax_n1(ParamSpace(eta)).estimator();
    const double gap = std::abs(risk_at(est, 0.0) - risk_at(est, eta));
    return {eta, "endpoint_equality", gap <= Tol::endpoint_equality, "|f(0)-f(eta)|=" + fmt3(gap)};
}

PropertyCheck check_constant_risk(double eta) {
    const SupRiskResult sup = sup_risk({0.25, 0.75}, ParamSpace(eta));
    const double ulps = ulp_distance(sup.value, 1.0 / 16.0);
    const bool pass = sup.kind == SupKind::Constant && ulps <= 1.0;
    return {eta, "constant_risk", pass, std::string("kind=") + to_string(sup.kind) + " ulps=" + fmt3(ulps)};
}

PropertyCheck check_value_consistency(double eta) {
    const ParamSpace space(eta);
    const double diff = std::abs(minimax_value(space) - sup_risk(minimax_n1(space).estimator(), space).value);
    return {eta, "value_consistency", diff <= Tol::value_consistency, "|diff|=" + fmt3(diff)};
}

PropertyCheck check_branch_continuity() {
    const double boundary = kBranchBoundary;
    const double restricted_a = std::sqrt(1.0 - boundary) - (1.0 - boundary);
    const double restricted_value = restricted_a * restricted_a;
    const double unrestricted_value = risk_at({0.25, 0.75}, 0.0);
    double worst_ulps = std::max({ulp_distance(restricted_a, 0.25), ulp_distance(boundary, 0.75),
                                  ulp_distance(restricted_value, unrestricted_value)});

    double worst_jump = 0.0;
    const MinimaxSolution at = minimax_n1(ParamSpace(boundary));
    for (const double eta : {boundary - Tol::continuity_offset, boundary + Tol::continuity_offset}) {
        const MinimaxSolution near = minimax_n1(ParamSpace(eta));
        worst_jump = std::max({worst_jump, std::abs(near.a_star - at.a_star), std::abs(near.b_star - at.b_star)});
    }
    const bool pass = worst_ulps <= 1.0 && worst_jump <= Tol::continuity_coord;
    return {boundary, "branch_continuity", pass, "ulps=" + fmt3(worst_ulps) + " jump=" + fmt3(worst_jump)};
}

PropertyCheck check_case_b_dominance(double eta, std::size_t eta_index, const VerifyOptions& options) {
    const ParamSpace space(eta);
    const double bound = minimax_value(space);
    auto engine = engine_for(options.seed, eta_index, kCaseBDominance);
    std::size_t failures = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < options.samples; ++s) {
        // Uniform over the feasible sliver {0 <= a, b <= eta, b > a + 1/2}.
        BinaryEstimator est;
        do {
            est.a = unit_uniform(engine) * (eta - 0.5);
            est.b = est.a + 0.5 + unit_uniform(engine) * (eta - 0.5 - est.a);
        } while (!(est.b > est.a + 0.5) || est.b > eta);
        const double at_half = risk_at(est, 0.5);
        const double sup = sup_risk(est, space).value;
        min_margin = std::min(min_margin, at_half - 1.0 / 16.0);
        if (!(at_half > 1.0 / 16.0) || !(sup > bound)) ++failures;
    }
    return {eta, "case_b_dominance", failures == 0,
            "failures=" + std::to_string(failures) + " min(f(1/2)-1/16)=" + fmt3(min_margin)};
}

PropertyCheck check_hyperbola_sign(double eta, std::size_t eta_index, const VerifyOptions& options) {
    const ParamSpace space(eta);
    auto engine = engine_for(options.seed, eta_index, kHyperbolaSign);
    std::size_t checked = 0;
    std::size_t failures = 0;
    for (std::size_t s = 0; s < options.samples; ++s) {
        const BinaryEstimator est{unit_uniform(engine) * eta, unit_uniform(engine) * eta};
        const double gap = hyperbola_gap(est, space);
        if (std::abs(gap) <= Tol::hyperbola_margin) continue;
        ++checked;
        const double endpoint_diff = risk_at(est, 0.0) - risk_at(est, eta);
        if ((gap > 0.0) != (endpoint_diff > 0.0)) ++failures;
    }
    return {eta, "hyperbola_sign", failures == 0,
            "checked=" + std::to_string(checked) + " failures=" + std::to_string(failures)};
}

PropertyCheck check_ellipse_level_set(double eta, std::size_t eta_index, const VerifyOptions& options) {
    const ParamSpace space(eta);
    auto engine = engine_for(options.seed, eta_index, kEllipseLevelSet);
    double worst = 0.0;
    for (std::size_t s = 0; s < options.samples; ++s) {
        const BinaryEstimator est{unit_uniform(engine) * eta, unit_uniform(engine) * eta};
        const double level = risk_at(est, eta);
        if (level <= Tol::ellipse_min_level) continue;
        worst = std::max(worst, std::abs(ellipse_residual(est, space, level)));
    }
    return {eta, "ellipse_level_set", worst <= Tol::ellipse_residual, "max|residual|=" + fmt3(worst)};
}

PropertyCheck check_case_b_identity(double eta, std::size_t eta_index, const VerifyOptions& options) {
    auto engine = engine_for(options.seed, eta_index, kCaseBIdentity);
    double worst = 0.0;
    for (std::size_t s = 0; s < options.samples; ++s) {
        const BinaryEstimator est{unit_uniform(engine), unit_uniform(engine)};
        worst = std::max(worst, ulp_distance(case_b_risk_at_half(est), risk_at(est, 0.5)));
    }
    return {eta, "case_b_identity", worst <= Tol::identity_ulps, "max_ulps=" + fmt3(worst)};
}

}  // namespace

std::vector<double> eta_sweep(double eta_step) {
    if (!(eta_step > 0.0 && eta_step <= 1.0)) {
        throw std::invalid_argument("eta step must lie in (0, 1]");
    }
    std::vector<double> etas;
    const double reciprocal = 1.0 / eta_step;
    const double whole = std::round(reciprocal);
    if (std::abs(reciprocal - whole) < 1e-9) {
        const auto count = static_cast<std::size_t>(whole);
        for (std::size_t k = 0; k <= count; ++k) etas.push_back(static_cast<double>(k) / whole);
        return etas;
    }
    for (std::size_t k = 0; static_cast<double>(k) * eta_step < 1.0; ++k) {
        etas.push_back(static_cast<double>(k) * eta_step);
    }
    etas.push_back(1.0);
    return etas;
}

std::vector<PropertyCheck> run_verification(const VerifyOptions& options) {
    if (!(options.grid_step > 0.0 && options.grid_step <= 1.0)) {
        throw std::invalid_argument("grid step must lie in (0, 1]");
    }
    if (options.samples == 0) throw std::invalid_argument("sample count must be positive");

    std::vector<PropertyCheck> checks;
    const std::vector<double> etas = eta_sweep(options.eta_step);
    for (std::size_t index = 0; index < etas.size(); ++index) {
        const double eta = etas[index];
        const ParamSpace space(eta);

        const double step = eta > 0.0 ? std::min(options.grid_step, eta) : options.grid_step;
        const NumericSolution grid_solution = grid_minimax(space, GridSpec(step), options.threads);
        checks.push_back(check_grid_oracle(eta, grid_solution, step));
        checks.push_back(check_refine_oracle(eta, grid_solution));
        checks.push_back(check_value_consistency(eta));
        if (eta <= kBranchBoundary) checks.push_back(check_endpoint_equality(eta));
        if (eta >= kBranchBoundary) checks.push_back(check_constant_risk(eta));
        if (eta == kBranchBoundary) checks.push_back(check_branch_continuity());
        if (eta > 0.5) checks.push_back(check_case_b_dominance(eta, index, options));
        if (eta > 0.0) checks.push_back(check_hyperbola_sign(eta, index, options));
        if (eta > 0.0 && eta < 1.0) checks.push_back(check_ellipse_level_set(eta, index, options));
        checks.push_back(check_case_b_identity(eta, index, options));
    }
    // A sweep that skips 3/4 still checks the junction.
    const bool has_boundary = std::find(etas.begin(), etas.end(), kBranchBoundary) != etas.end();
    if (!has_boundary) checks.push_back(check_branch_continuity());
    return checks;
}

}  // namespace bernmm::cli
