// Acceptance suite: one PASS/FAIL line per criterion. `--only N` runs one.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gfbp/cli.hpp"
#include "gfbp/oracle.hpp"
#include "gfbp/problems.hpp"
#include "gfbp/solver.hpp"
#include "gfbp/verify.hpp"

using namespace gfbp;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome combine(const std::vector<verify::CheckResult>& checks) {
    bool ok = true;
    std::string detail;
    for (const auto& c : checks) {
        ok = ok && c.passed;
        if (!detail.empty()) detail += "; ";
        detail += fmt("%s %s (worst %.3g, tol %.3g)", c.name.c_str(), c.passed ? "ok" : "FAILED", c.worst,
                      c.tolerance);
    }
    return {ok, detail};
}

constexpr std::uint64_t kSeed = 2024;

Outcome prox_correctness() {
    const auto s = verify::ProxSuite::library();
    return combine({verify::check_prox_l1_grid(s, kSeed), verify::check_prox_scaled_sq_norm_grid(s, kSeed),
                    verify::check_prox_rank_one_grid(s, kSeed), verify::check_prox_least_squares_grid(s, kSeed),
                    verify::check_prox_dist_ball_grid(s, kSeed), verify::check_least_squares_identity(s, kSeed)});
}

Outcome gradient_correctness() {
    const auto s = verify::ProxSuite::library();
    return combine({verify::check_grad_box_fd(s, kSeed), verify::check_grad_ax_fd(s, kSeed)});
}

Outcome backward_composition() { return combine({verify::check_backward_composition(kSeed, 50)}); }

RunReport split_toy_run() {
    const RegressionData d = gen_regression_data(20, 50, 42);
    const GfbpProblem p = build_elastic_net({d.a, d.b, 0.5, true});
    return run(p, make_default(0.9), {{0.0, 100000, StopMode::MaxOnly}, 1}, Vector(50, 0.0));
}

Outcome penalty_residual_decay() {
    const RunReport r = split_toy_run();
    const std::size_t tenth = r.trace.size() / 10;
    double first = 0.0, last = 0.0;
    for (std::size_t i = 0; i < tenth; ++i) {
        first += r.trace[i].norm_c;
        last += r.trace[r.trace.size() - 1 - i].norm_c;
    }
    first /= static_cast<double>(tenth);
    last /= static_cast<double>(tenth);
    const bool ok = last < first / 10 && r.final_norm_c < 1e-2;
    return {ok, fmt("first-decile mean %.4g, last-decile mean %.4g (ratio %.4g), final %.4g after %zu steps",
                    first, last, last / first, r.final_norm_c, r.iterations)};
}

Outcome ergodic_convergence() {
    HeronConfig h = gen_heron_instance(2, 1, 42);
    h.a = Matrix::identity(2);
    const GfbpProblem p = build_heron(h);
    // x_1 plus 99999 steps puts the last iterate at k = 10^5.
    const RunReport r = run(p, make_default(0.9), {{0.0, 99999, StopMode::MaxOnly}, 0}, Vector(2, 0.0));
    const double z = norm2(r.z_final);
    return {z < 1e-2, fmt("|z_k| = %.4g at k = %zu (|x_k| = %.3g); target 1e-2", z, r.iterations + 1,
                          norm2(r.x_final))};
}

Outcome strong_convergence() {
    Matrix a(1, 1, 1.0);
    const ElasticNetConfig cfg{a, Vector{3.0}, 0.5, false};
    const auto ref = oracle::reference_solve(oracle::elastic_net_reference(cfg), Vector{0.0}, 100000, {});
    const GfbpProblem p = build_elastic_net(cfg);
    const RunReport r = run(p, make_default(0.9), {{0.0, 99999, StopMode::MaxOnly}, 0}, Vector{0.0});
    const double err = std::abs(r.x_final[0] - ref.x[0]);
    return {err < 1e-2, fmt("x* = %.6g (reference), x_k = %.8g, |x_k - x*| = %.3g", ref.x[0], r.x_final[0], err)};
}

Outcome split_consistency() {
    const RegressionData d = gen_regression_data(20, 50, 42);
    double f[2];
    std::string how[2];
    bool terminated = true;
    for (int split = 0; split < 2; ++split) {
        const GfbpProblem p = build_elastic_net({d.a, d.b, 0.5, split == 1});
        const RunReport r = run(p, make_default(0.9), {{1e-5, 200000, StopMode::RelativeChange}, 0}, Vector(50, 0.0));
        terminated = terminated && r.reason == Termination::RelativeChange;
        f[split] = *r.final_objective;
        how[split] = fmt("%zu its", r.iterations);
    }
    const ElasticNetConfig cfg{d.a, d.b, 0.5, false};
    const double ref = oracle::reference_solve(oracle::elastic_net_reference(cfg), Vector(50, 0.0), 200000, {}).value;
    auto rel = [](double x, double y) { return std::abs(x - y) / std::abs(y); };
    const double worst = std::max({rel(f[0], f[1]), rel(f[0], ref), rel(f[1], ref)});
    return {terminated && worst < 0.01,
            fmt("F non-split %.8g (%s), split %.8g (%s), reference %.8g; worst relative gap %.3g", f[0],
                how[0].c_str(), f[1], how[1].c_str(), ref, worst)};
}

Outcome hilbert_ordering() {
    const HilbertData h = gen_hilbert_problem(7);
    const double gammas[] = {0.1, 0.5, 0.9};
    std::size_t counts[3], f_only[3];
    bool all_relative = true;
    for (int i = 0; i < 3; ++i) {
        const GfbpProblem p = build_elastic_net({h.a, h.b, gammas[i], true});
        const RunReport r = run(p, make_default(0.9), {{1e-6, 5000000, StopMode::RelativeChange}, 0},
                                Vector(p.dim, 0.0));
        all_relative = all_relative && r.reason == Termination::RelativeChange;
        counts[i] = r.iterations;
        const RunReport o = run(p, make_default(0.9), {{1e-6, 5000000, StopMode::ObjectiveChange}, 0},
                                Vector(p.dim, 0.0));
        f_only[i] = o.iterations;
    }
    const bool ordered = counts[0] >= counts[1] && counts[1] >= counts[2];
    return {all_relative && ordered,
            fmt("iterations for gamma 0.1/0.5/0.9: %zu/%zu/%zu (%s); objective-only rule: %zu/%zu/%zu", counts[0],
                counts[1], counts[2], all_relative ? "all by relative change" : "some hit the cap", f_only[0],
                f_only[1], f_only[2])};
}

std::string trace_without_timing(const RunReport& r) {
    std::ostringstream os;
    cli::write_trace_csv(os, r.trace);
    std::istringstream in(os.str());
    std::string line, out;
    while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
    return out;
}

Outcome determinism() {
    const std::string a = trace_without_timing(split_toy_run());
    const std::string b = trace_without_timing(split_toy_run());
    return {a == b, fmt("%zu trace bytes, %s", a.size(), a == b ? "identical" : "different")};
}

struct Criterion {
    int id;
    const char* name;
    double time_limit_s;  // 0: none
    std::function<Outcome()> fn;
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
    }
    const std::vector<Criterion> criteria = {
        {1, "prox correctness", 60.0, prox_correctness},
        {2, "gradient correctness", 10.0, gradient_correctness},
        {3, "backward composition", 0.0, backward_composition},
        {4, "penalty residual decay", 0.0, penalty_residual_decay},
        {5, "ergodic convergence", 30.0, ergodic_convergence},
        {6, "strong convergence", 0.0, strong_convergence},
        {7, "split/non-split consistency", 0.0, split_consistency},
        {8, "Hilbert iteration ordering", 120.0, hilbert_ordering},
        {9, "determinism", 0.0, determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o = c.fn();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
            o.passed = false;
            o.detail += fmt("; exceeded %.0f s", c.time_limit_s);
        }
        std::printf("[%s] %d %s (%.2f s): %s\n", o.passed ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
        std::fflush(stdout);
        failures += !o.passed;
    }
    return failures == 0 ? 0 : 1;
}
