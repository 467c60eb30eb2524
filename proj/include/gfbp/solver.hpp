#pragma once

// Generalized forward-backward iteration with penalization.
//
// For 0 ∈ Σᵢ Aᵢ(x) + B(x) + N_{zer C}(x) one step from x_k is
//
//   ψ₀ = x_k − α_k B(x_k) − α_k β_k C(x_k)
//   ψᵢ = J_{α_k Aᵢ}(ψᵢ₋₁),  i = 1..m
//   x_{k+1} = ψ_m
//
// The blocks are visited in declaration order with the same α_k. Alongside
// the iterate the state keeps τ_k = Σ α_n and Σ α_n x_n, from which the
// ergodic average z_k is read off.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gfbp/operators.hpp"
#include "gfbp/schedule.hpp"

namespace gfbp {

using ScalarFn = std::function<double(std::span<const double>)>;

struct GfbpProblem {
    std::vector<ResolventOp> blocks;  ///< A₁ … A_m, applied in this order
    CocoerciveOp smooth = zero_cocoercive();   ///< B
    CocoerciveOp penalty = zero_cocoercive();  ///< C
    ScalarFn objective;         ///< F, optional
    ScalarFn constraint_value;  ///< g with zer C = argmin g, optional
    std::size_t dim = 0;

    /// Throws ParameterError when there are no blocks or dim is zero.
    void check() const;
};

/// Which cocoercivity bounds α_kβ_k when validating a schedule for a problem.
enum class BoundPolicy {
    /// B's parameter; vacuous (infinite) when B ≡ 0.
    Smooth,
    /// B's parameter, falling back to C's when B ≡ 0.
    PenaltyWhenSmoothZero,
};

double schedule_bound(const GfbpProblem& problem,
                      BoundPolicy policy = BoundPolicy::PenaltyWhenSmoothZero);

struct SolverState {
    std::size_t k = 1;  ///< index of the current iterate x_k
    Vector x;
    double tau = 0.0;     ///< Σ_{n≤k} α_n
    Vector weighted_sum;  ///< Σ_{n≤k} α_n x_n
    std::vector<Vector> sweep;  ///< ψ₀ … ψ_m of the last completed step
    double last_alpha = 0.0;
    double last_beta = 0.0;
    bool has_sweep = false;

    // Scratch for B(x_k) and C(x_k).
    Vector smooth_eval;
    Vector penalty_eval;
};

/// State at k = 1 with x₁ = start already entered into the ergodic sum.
SolverState init_state(const GfbpProblem& problem, const StepSchedule& schedule, Vector start);

/// Advances state from x_k to x_{k+1}. Throws DivergenceError naming the
/// stage (forward step or block label) that produced a non-finite value.
void gfbp_step(const GfbpProblem& problem, const StepSchedule& schedule, SolverState& state);

/// z_k = (Σ α_n x_n) / τ_k
Vector ergodic_average(const SolverState& state);

/// ‖C(x)‖₂
double residual_C(const GfbpProblem& problem, std::span<const double> x);

/// Σᵢ ‖ψᵢ − ψᵢ₋₁‖² over the last completed sweep; 0 before the first step.
double inner_displacement(const SolverState& state);

enum class StopMode {
    RelativeChange,  ///< max(|ΔF|/|F_prev|, |Δg|/|g_prev|) ≤ tol
    MaxOnly,         ///< run exactly max_iters steps
    Residual,        ///< max(‖C(x_k)‖, ‖x_k − x_{k−1}‖) ≤ tol
    ObjectiveChange, ///< |ΔF|/|F_prev| ≤ tol, g ignored
};

struct StoppingRule {
    double tol = 1e-5;
    std::size_t max_iters = 200000;
    StopMode mode = StopMode::RelativeChange;
};

enum class Termination { RelativeChange, Residual, ObjectiveChange, MaxIterations };

std::string to_string(StopMode mode);
std::string to_string(Termination reason);

/// Relative-change denominators below this are replaced by 1.
inline constexpr double kTinyDenominator = 1e-30;

/// max of the two relative changes used by StopMode::RelativeChange.
double relative_change(double f_prev, double f_cur, double g_prev, double g_cur);
/// The objective half of relative_change.
double objective_change(double f_prev, double f_cur);

struct TraceRow {
    /// Iterate index: values are taken at x_k, alpha/beta are those of the
    /// step that produced it (so the first row has k = 2).
    std::size_t k = 0;
    double objective = 0.0;
    double constraint = 0.0;
    double norm_c = 0.0;
    double inner_disp = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double elapsed_s = 0.0;
};

struct RunReport {
    std::size_t iterations = 0;
    double elapsed_s = 0.0;
    Termination reason = Termination::MaxIterations;
    StoppingRule stopping;
    std::vector<TraceRow> trace;
    Vector x_final;
    Vector z_final;
    std::optional<double> final_objective;
    std::optional<double> final_constraint;
    double final_norm_c = 0.0;
};

struct RunOptions {
    StoppingRule stopping;
    std::size_t trace_every = 1;  ///< 0 disables the trace
};

/// Iterates gfbp_step from x₁ = start until the stopping rule fires.
/// Throws ParameterError if the rule needs F and g but the problem lacks them.
RunReport run(const GfbpProblem& problem, const StepSchedule& schedule, const RunOptions& options,
              Vector start);

}  // namespace gfbp
