#include "gfbp/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

#include "gfbp/error.hpp"

namespace gfbp {

void GfbpProblem::check() const {
    if (blocks.empty()) throw ParameterError("problem: at least one resolvent block is required");
    if (dim == 0) throw ParameterError("problem: dimension must be positive");
}

double schedule_bound(const GfbpProblem& problem, BoundPolicy policy) {
    if (!problem.smooth.is_zero()) return problem.smooth.cocoercivity();
    if (policy == BoundPolicy::Smooth) return CocoerciveOp::kZeroOperator;
    return problem.penalty.cocoercivity();
}

SolverState init_state(const GfbpProblem& problem, const StepSchedule& schedule, Vector start) {
    problem.check();
    if (start.size() != problem.dim) {
        throw ShapeError("init_state: start point has dimension " + std::to_string(start.size()) +
                         ", problem has " + std::to_string(problem.dim));
    }
    SolverState state;
    state.k = 1;
    const double a1 = schedule.alpha(1);
    state.tau = a1;
    state.weighted_sum.resize(start.size());
    for (std::size_t j = 0; j < start.size(); ++j) state.weighted_sum[j] = a1 * start[j];
    state.x = std::move(start);
    state.sweep.assign(problem.blocks.size() + 1, Vector(problem.dim, 0.0));
    state.smooth_eval.assign(problem.dim, 0.0);
    state.penalty_eval.assign(problem.dim, 0.0);
    return state;
}

void gfbp_step(const GfbpProblem& problem, const StepSchedule& schedule, SolverState& state) {
    const std::size_t n = state.x.size();
    const double alpha = schedule.alpha(state.k);
    const double beta = schedule.beta(state.k);

    Vector& psi0 = state.sweep.front();
    psi0 = state.x;
    if (!problem.smooth.is_zero()) {
        problem.smooth.apply(state.x, state.smooth_eval);
        axpy(-alpha, state.smooth_eval, psi0);
    }
    if (!problem.penalty.is_zero()) {
        problem.penalty.apply(state.x, state.penalty_eval);
        axpy(-alpha * beta, state.penalty_eval, psi0);
    }
    if (!all_finite(psi0)) {
        throw DivergenceError("non-finite value in forward/penalty step at k = " +
                                  std::to_string(state.k),
                              state.k, "forward");
    }

    for (std::size_t i = 0; i < problem.blocks.size(); ++i) {
        const auto& block = problem.blocks[i];
        block.apply(alpha, state.sweep[i], state.sweep[i + 1]);
        if (!all_finite(state.sweep[i + 1])) {
            throw DivergenceError("non-finite value from block " + std::to_string(i + 1) + " (" +
                                      block.label() + ") at k = " + std::to_string(state.k),
                                  state.k, block.label());
        }
    }

    state.x = state.sweep.back();
    state.last_alpha = alpha;
    state.last_beta = beta;
    state.has_sweep = true;
    ++state.k;

    const double a_next = schedule.alpha(state.k);
    state.tau += a_next;
    for (std::size_t j = 0; j < n; ++j) state.weighted_sum[j] += a_next * state.x[j];
}

Vector ergodic_average(const SolverState& state) {
    Vector z(state.weighted_sum.size());
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = state.weighted_sum[j] / state.tau;
    return z;
}

double residual_C(const GfbpProblem& problem, std::span<const double> x) {
    if (problem.penalty.is_zero()) return 0.0;
    return norm2(problem.penalty(x));
}

double inner_displacement(const SolverState& state) {
    if (!state.has_sweep) return 0.0;
    double s = 0.0;
    for (std::size_t i = 1; i < state.sweep.size(); ++i) {
        s += squared_distance(state.sweep[i], state.sweep[i - 1]);
    }
    return s;
}

std::string to_string(StopMode mode) {
    switch (mode) {
        case StopMode::RelativeChange: return "relative_change";
        case StopMode::MaxOnly: return "max_only";
        case StopMode::Residual: return "residual";
        case StopMode::ObjectiveChange: return "objective_change";
    }
    return "unknown";
}

std::string to_string(Termination reason) {
    switch (reason) {
        case Termination::RelativeChange: return "relative_change";
        case Termination::Residual: return "residual";
        case Termination::ObjectiveChange: return "objective_change";
        case Termination::MaxIterations: return "max_iterations";
    }
    return "unknown";
}

double relative_change(double f_prev, double f_cur, double g_prev, double g_cur) {
    auto rel = [](double prev, double cur) {
        const double denom = std::abs(prev) < kTinyDenominator ? 1.0 : std::abs(prev);
        return std::abs(cur - prev) / denom;
    };
    return std::max(rel(f_prev, f_cur), rel(g_prev, g_cur));
}

double objective_change(double f_prev, double f_cur) {
    const double denom = std::abs(f_prev) < kTinyDenominator ? 1.0 : std::abs(f_prev);
    return std::abs(f_cur - f_prev) / denom;
}

RunReport run(const GfbpProblem& problem, const StepSchedule& schedule, const RunOptions& options,
              Vector start) {
    const StoppingRule& rule = options.stopping;
    if (rule.mode != StopMode::MaxOnly && !(rule.tol > 0.0)) {
        throw ParameterError("stopping rule: tolerance must be positive");
    }
    if (rule.mode == StopMode::RelativeChange && (!problem.objective || !problem.constraint_value)) {
        throw ParameterError("stopping rule: relative_change needs objective and constraint_value");
    }
    if (rule.mode == StopMode::ObjectiveChange && !problem.objective) {
        throw ParameterError("stopping rule: objective_change needs objective");
    }
    if (rule.max_iters == 0) throw ParameterError("stopping rule: max_iters must be positive");

    SolverState state = init_state(problem, schedule, std::move(start));
    RunReport report;
    report.stopping = rule;

    const bool have_f = static_cast<bool>(problem.objective);
    const bool have_g = static_cast<bool>(problem.constraint_value);
    const bool by_change = rule.mode == StopMode::RelativeChange || rule.mode == StopMode::ObjectiveChange;
    const bool track = by_change || options.trace_every > 0;
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    double f_prev = have_f ? problem.objective(state.x) : nan;
    double g_prev = have_g ? problem.constraint_value(state.x) : nan;
    Vector x_prev;

    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    auto seconds_since = [&t0] {
        return std::chrono::duration<double>(clock::now() - t0).count();
    };

    report.reason = Termination::MaxIterations;
    for (std::size_t step = 1; step <= rule.max_iters; ++step) {
        if (rule.mode == StopMode::Residual) x_prev = state.x;
        gfbp_step(problem, schedule, state);
        report.iterations = step;

        const bool want_row = options.trace_every > 0 && step % options.trace_every == 0;
        double f_cur = nan;
        double g_cur = nan;
        if (track && (want_row || by_change)) {
            if (have_f) f_cur = problem.objective(state.x);
            if (have_g) g_cur = problem.constraint_value(state.x);
        }
        double norm_c = nan;
        if (want_row || rule.mode == StopMode::Residual) norm_c = residual_C(problem, state.x);

        if (want_row) {
            report.trace.push_back({state.k, f_cur, g_cur, norm_c, inner_displacement(state),
                                    state.last_alpha, state.last_beta, seconds_since()});
        }

        bool stop = false;
        if (rule.mode == StopMode::RelativeChange) {
            stop = relative_change(f_prev, f_cur, g_prev, g_cur) <= rule.tol;
            f_prev = f_cur;
            g_prev = g_cur;
            if (stop) report.reason = Termination::RelativeChange;
        } else if (rule.mode == StopMode::ObjectiveChange) {
            stop = objective_change(f_prev, f_cur) <= rule.tol;
            f_prev = f_cur;
            if (stop) report.reason = Termination::ObjectiveChange;
        } else if (rule.mode == StopMode::Residual) {
            stop = std::max(norm_c, distance(state.x, x_prev)) <= rule.tol;
            if (stop) report.reason = Termination::Residual;
        }
        if (stop) break;
    }
    report.elapsed_s = seconds_since();

    report.z_final = ergodic_average(state);
    report.final_norm_c = residual_C(problem, state.x);
    if (have_f) report.final_objective = problem.objective(state.x);
    if (have_g) report.final_constraint = problem.constraint_value(state.x);
    report.x_final = std::move(state.x);
    return report;
}

}  // namespace gfbp
