#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace gfbp {

/// Step sizes α_k = a/kᵖ and penalty parameters β_k = ξ·k^q, k ≥ 1.
///
/// A schedule may instead carry arbitrary callables; those are evaluated as
/// given and reported as unvalidated, since the summability and limit
/// conditions can only be decided from the exponents of the power family.
class StepSchedule {
public:
    /// Throws ParameterError unless a > 0 and xi > 0.
    StepSchedule(double a, double p, double xi, double q);

    static StepSchedule custom(std::function<double(std::size_t)> alpha,
                               std::function<double(std::size_t)> beta);

    double alpha(std::size_t k) const;
    double beta(std::size_t k) const;

    double a() const noexcept { return a_; }
    double p() const noexcept { return p_; }
    double xi() const noexcept { return xi_; }
    double q() const noexcept { return q_; }
    bool is_custom() const noexcept { return static_cast<bool>(alpha_fn_); }

private:
    StepSchedule() = default;
    double a_ = 1.0;
    double p_ = 1.0;
    double xi_ = 0.9;
    double q_ = 1.0;
    std::function<double(std::size_t)> alpha_fn_;
    std::function<double(std::size_t)> beta_fn_;
};

/// α_k = 1/k, β_k = ξk.
StepSchedule make_default(double xi);

struct ScheduleCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    bool accepted = false;
    bool validated = true;  ///< false for custom schedules
    std::vector<ScheduleCheck> checks;
    std::string to_string() const;
};

/// Checks ½ < p ≤ 1 (α ∈ ℓ²∖ℓ¹), q = p (α_kβ_k has a positive finite limit),
/// and aξ < mu_bound. An infinite mu_bound passes the last check.
ValidationReport validate(const StepSchedule& s, double mu_bound);

}  // namespace gfbp
