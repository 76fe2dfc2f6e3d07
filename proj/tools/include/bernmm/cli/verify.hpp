#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bernmm::cli {

struct VerifyOptions {
    double eta_step = 0.05;
    double grid_step = 1e-3;
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

struct PropertyCheck {
    double eta = 0.0;
    std::string property;
    bool pass = false;
    std::string detail;
};

/// Tolerances pinned by the verification battery.
struct VerifyTolerances {
    static constexpr double refine_tol = 1e-8;
    static constexpr double refine_coord = 1e-6;
    static constexpr double refine_value = 1e-9;
    static constexpr double endpoint_equality = 1e-12;
    static constexpr double value_consistency = 1e-12;
    static constexpr double hyperbola_margin = 1e-9;
    static constexpr double ellipse_residual = 1e-9;
    static constexpr double ellipse_min_level = 1e-6;
    static constexpr double identity_ulps = 4.0;
    static constexpr double continuity_offset = 1e-12;
    static constexpr double continuity_coord = 1e-6;
};

/// The eta sweep {0, step, 2 step, ..., 1}. When 1 / step is an integer K the
/// points are computed as k / K so that 3/4 and 1 land exactly.
std::vector<double> eta_sweep(double eta_step);

/// Runs every property that applies at each eta of the sweep. Throws
/// std::invalid_argument for a non-positive or > 1 step or zero samples.
std::vector<PropertyCheck> run_verification(const VerifyOptions& options);

}  // namespace bernmm::cli
