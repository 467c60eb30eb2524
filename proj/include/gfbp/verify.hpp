#pragma once

// Oracle-backed self checks: closed-form operators against the grid prox and
// finite differences, sampled firm nonexpansiveness and cocoercivity, the
// reduction to plain resolvent composition when B = C = 0, and the split/non-split objective
// identity. The operators under test are injectable so a deliberately broken
// implementation can be shown to fail.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gfbp/linalg.hpp"

namespace gfbp::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;      ///< largest observed error (or violation)
    double tolerance = 0.0;  ///< threshold worst was held to
    std::size_t samples = 0;
    std::string detail;
};

struct ProxSuite {
    std::function<Vector(double r, double w, std::span<const double> x)> l1;
    std::function<Vector(double c, double r, std::span<const double> x)> scaled_sq_norm;
    std::function<Vector(std::span<const double> a, double b, double r, std::span<const double> x)>
        rank_one_quadratic;
    std::function<Vector(const Matrix& a, std::span<const double> b, double r, std::span<const double> x)>
        least_squares;
    std::function<Vector(std::span<const double> c, double rho, double r, std::span<const double> x)>
        dist_ball;
    std::function<Vector(std::span<const double> lo, std::span<const double> hi, std::span<const double> x)>
        grad_box;
    std::function<Vector(const Matrix& a, std::span<const double> x)> grad_ax;

    /// The library's implementations.
    static ProxSuite library();
};

inline constexpr std::size_t kDraws = 100;
inline constexpr double kIdentityTol = 1e-10;
inline constexpr double kGradientRelTol = 1e-5;
inline constexpr double kFirmTol = 1e-10;
inline constexpr double kObjectiveIdentityTol = 1e-10;

CheckResult check_prox_l1_grid(const ProxSuite& s, std::uint64_t seed);
CheckResult check_prox_scaled_sq_norm_grid(const ProxSuite& s, std::uint64_t seed);
CheckResult check_prox_rank_one_grid(const ProxSuite& s, std::uint64_t seed);
CheckResult check_prox_least_squares_grid(const ProxSuite& s, std::uint64_t seed);
CheckResult check_prox_dist_ball_grid(const ProxSuite& s, std::uint64_t seed);
/// prox_least_squares(I, 0, r, x) against prox_scaled_sq_norm(½, r, x).
CheckResult check_least_squares_identity(const ProxSuite& s, std::uint64_t seed);
CheckResult check_grad_box_fd(const ProxSuite& s, std::uint64_t seed);
CheckResult check_grad_ax_fd(const ProxSuite& s, std::uint64_t seed);
CheckResult check_firm_nonexpansive(const ProxSuite& s, std::uint64_t seed);
/// ⟨x−y, Tx−Ty⟩ ≥ μ‖Tx−Ty‖² on 1000 random pairs for both constraint gradients.
CheckResult check_cocoercivity(std::uint64_t seed);
/// B = C = 0: `steps` GFBP steps equal the direct resolvent composition bit for bit.
CheckResult check_backward_composition(std::uint64_t seed, std::size_t steps = 50);
CheckResult check_split_objective_identity(std::uint64_t seed);

std::vector<CheckResult> run_all(const ProxSuite& suite, std::uint64_t seed = 2024);

std::string format_table(const std::vector<CheckResult>& results);
std::string to_json(const std::vector<CheckResult>& results);

}  // namespace gfbp::verify
