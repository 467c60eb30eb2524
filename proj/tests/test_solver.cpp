#include <doctest.h>

#include <cmath>

#include "gfbp/error.hpp"
#include "gfbp/oracle.hpp"
#include "gfbp/problems.hpp"
#include "gfbp/rng.hpp"
#include "gfbp/solver.hpp"

using namespace gfbp;

namespace {

CocoerciveOp identity_op() {
    return CocoerciveOp(
        [](std::span<const double> x, std::span<double> out) { std::copy(x.begin(), x.end(), out.begin()); },
        1.0, "identity");
}

GfbpProblem zero_problem(std::size_t n, std::size_t blocks) {
    GfbpProblem p;
    p.dim = n;
    for (std::size_t i = 0; i < blocks; ++i) p.blocks.push_back(zero_resolvent());
    p.objective = [](std::span<const double>) { return 0.0; };
    p.constraint_value = [](std::span<const double>) { return 0.0; };
    return p;
}

Vector random_vector(Rng& rng, std::size_t n) {
    Vector v(n);
    for (double& x : v) x = rng.normal();
    return v;
}

}  // namespace

TEST_CASE("all-zero operators leave the iterate unchanged") {
    const GfbpProblem p = zero_problem(3, 2);
    const StepSchedule s = make_default(0.9);
    SolverState st = init_state(p, s, Vector{1.0, -2.0, 0.5});
    for (int i = 0; i < 5; ++i) gfbp_step(p, s, st);
    CHECK(st.x == Vector{1.0, -2.0, 0.5});
    CHECK(st.k == 6);
    CHECK(inner_displacement(st) == 0.0);
}

TEST_CASE("two-block step with B = C = 0 is the composition of resolvents") {
    GfbpProblem p;
    p.dim = 2;
    p.blocks = {prox_l1_op(0.3), prox_dist_ball_op(Vector{2.0, 1.0}, 0.5, "ball")};
    const StepSchedule s = make_default(0.9);
    const Vector x1{3.0, -1.0};
    SolverState st = init_state(p, s, x1);
    gfbp_step(p, s, st);
    const Vector direct = prox_dist_ball(Vector{2.0, 1.0}, 0.5, 1.0, prox_l1(1.0, 0.3, x1));
    CHECK(st.x == direct);
}

TEST_CASE("one-dimensional hand-evaluated step") {
    GfbpProblem p;
    p.dim = 1;
    p.blocks = {prox_l1_op(1.0)};
    p.penalty = identity_op();
    const StepSchedule s(1.0, 1.0, 0.5, 1.0);
    SolverState st = init_state(p, s, Vector{3.0});
    gfbp_step(p, s, st);
    CHECK(st.sweep[0][0] == 1.5);
    CHECK(st.x[0] == 0.5);

    const oracle::GridSpec grid{-3.0, 3.0, 6001};
    const double g = oracle::grid_prox([](double u) { return std::abs(u); }, 1.0, 1.5, grid);
    CHECK(std::abs(g - st.x[0]) <= 2 * grid.spacing());
}

TEST_CASE("single block reproduces the forward-backward penalty step") {
    Rng rng(12);
    GfbpProblem p;
    p.dim = 4;
    p.blocks = {prox_scaled_sq_norm_op(0.7)};
    const Vector lo(4, -0.5), hi(4, 0.5);
    p.penalty = grad_half_sqdist_box_op(lo, hi);
    Matrix a(3, 4);
    for (double& v : a.data()) v = rng.normal();
    p.smooth = grad_half_sq_Ax_op(a);
    const StepSchedule s(0.5, 0.8, 0.3, 0.8);
    SolverState st = init_state(p, s, random_vector(rng, 4));
    for (int k = 1; k <= 20; ++k) {
        const Vector x = st.x;
        const double al = s.alpha(k), be = s.beta(k);
        const Vector bx = grad_half_sq_Ax(a, x);
        const Vector cx = grad_half_sqdist_box(lo, hi, x);
        Vector fwd(4);
        for (int j = 0; j < 4; ++j) fwd[j] = x[j] - al * bx[j] - al * be * cx[j];
        const Vector expected = prox_scaled_sq_norm(0.7, al, fwd);
        gfbp_step(p, s, st);
        for (int j = 0; j < 4; ++j) CHECK(st.x[j] == doctest::Approx(expected[j]).epsilon(1e-14));
    }
}

TEST_CASE("ergodic average") {
    GfbpProblem p = zero_problem(1, 1);
    // A resolvent that jumps to 3 regardless of input.
    p.blocks = {ResolventOp([](double, std::span<const double>, std::span<double> out) { out[0] = 3.0; }, "jump")};
    const StepSchedule s = make_default(1.0);
    SolverState st = init_state(p, s, Vector{0.0});
    CHECK(ergodic_average(st) == Vector{0.0});
    gfbp_step(p, s, st);
    CHECK(ergodic_average(st)[0] == doctest::Approx(1.0).epsilon(1e-15));

    const GfbpProblem q = zero_problem(2, 1);
    SolverState c = init_state(q, s, Vector{2.0, -1.0});
    for (int i = 0; i < 10; ++i) gfbp_step(q, s, c);
    const Vector z = ergodic_average(c);
    CHECK(z[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(z[1] == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("divergence names the offending stage") {
    GfbpProblem p = zero_problem(2, 2);
    p.blocks[1] = ResolventOp(
        [](double, std::span<const double> x, std::span<double> out) {
            out[0] = x[0];
            out[1] = std::numeric_limits<double>::quiet_NaN();
        },
        "broken");
    const StepSchedule s = make_default(0.9);
    SolverState st = init_state(p, s, Vector{1.0, 1.0});
    try {
        gfbp_step(p, s, st);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        CHECK(e.stage() == "broken");
        CHECK(e.iteration() == 1);
    }

    GfbpProblem q = zero_problem(1, 1);
    q.penalty = CocoerciveOp(
        [](std::span<const double>, std::span<double> out) { out[0] = std::numeric_limits<double>::infinity(); },
        1.0, "inf");
    SolverState sq = init_state(q, s, Vector{1.0});
    try {
        gfbp_step(q, s, sq);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        CHECK(e.stage() == "forward");
    }
}

TEST_CASE("problem and start validation") {
    GfbpProblem empty;
    empty.dim = 2;
    CHECK_THROWS_AS(init_state(empty, make_default(0.9), Vector(2, 0.0)), ParameterError);
    const GfbpProblem p = zero_problem(2, 1);
    CHECK_THROWS_AS(init_state(p, make_default(0.9), Vector(3, 0.0)), ShapeError);
}

TEST_CASE("schedule bound policy") {
    GfbpProblem p = zero_problem(2, 1);
    p.penalty = grad_half_sqdist_box_op(Vector(2, 0.0), Vector(2, 1.0));
    CHECK(schedule_bound(p) == 1.0);
    CHECK(std::isinf(schedule_bound(p, BoundPolicy::Smooth)));
    const Vector d{2.0, 1.0};
    p.smooth = grad_half_sq_Ax_op(Matrix::diagonal(d));
    CHECK(schedule_bound(p) == doctest::Approx(0.25));
    CHECK(schedule_bound(p, BoundPolicy::Smooth) == doctest::Approx(0.25));
}

TEST_CASE("residual and inner displacement") {
    GfbpProblem p = zero_problem(2, 1);
    p.penalty = grad_half_sqdist_box_op(Vector(2, 0.0), Vector(2, 1.0));
    CHECK(residual_C(p, Vector{0.5, 1.0}) == 0.0);
    CHECK(residual_C(p, Vector{2.0, -1.0}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(residual_C(zero_problem(2, 1), Vector{5.0, 5.0}) == 0.0);

    GfbpProblem q = zero_problem(1, 2);
    q.blocks = {prox_l1_op(1.0), prox_scaled_sq_norm_op(0.5)};
    const StepSchedule s = make_default(1.0);
    SolverState st = init_state(q, s, Vector{3.0});
    CHECK(inner_displacement(st) == 0.0);
    gfbp_step(q, s, st);
    // ψ₀ = 3, ψ₁ = 2, ψ₂ = 1
    CHECK(inner_displacement(st) == doctest::Approx(2.0));
}

TEST_CASE("relative change") {
    CHECK(relative_change(2.0, 1.0, 4.0, 4.0) == 0.5);
    CHECK(relative_change(2.0, 2.0, 4.0, 3.0) == 0.25);
    CHECK(relative_change(0.0, 0.0, 0.0, 0.0) == 0.0);
    CHECK(relative_change(0.0, 1e-3, 1e-40, 2e-40) == doctest::Approx(1e-3));
    CHECK(objective_change(4.0, 3.0) == 0.25);
    CHECK(objective_change(0.0, 0.5) == 0.5);
}

TEST_CASE("run: all-zero problem stops at the first check") {
    const GfbpProblem p = zero_problem(2, 1);
    const RunReport r = run(p, make_default(0.9), {}, Vector{1.0, 2.0});
    CHECK(r.iterations == 1);
    CHECK(r.reason == Termination::RelativeChange);
    CHECK(r.x_final == Vector{1.0, 2.0});
    REQUIRE(r.trace.size() == 1);
    CHECK(r.trace[0].k == 2);
}

TEST_CASE("run: max_only takes exactly max_iters steps") {
    const GfbpProblem p = zero_problem(2, 1);
    const RunReport r = run(p, make_default(0.9), {{1e-5, 7, StopMode::MaxOnly}, 1}, Vector{1.0, 2.0});
    CHECK(r.iterations == 7);
    CHECK(r.reason == Termination::MaxIterations);
    CHECK(r.trace.size() == 7);
    CHECK(r.trace.back().k == 8);
}

TEST_CASE("run: trace thinning") {
    const GfbpProblem p = zero_problem(1, 1);
    const RunReport r = run(p, make_default(0.9), {{1e-5, 10, StopMode::MaxOnly}, 3}, Vector{1.0});
    REQUIRE(r.trace.size() == 3);
    CHECK(r.trace[0].k == 4);
    CHECK(r.trace[2].k == 10);
    const RunReport none = run(p, make_default(0.9), {{1e-5, 10, StopMode::MaxOnly}, 0}, Vector{1.0});
    CHECK(none.trace.empty());
}

TEST_CASE("run: parameter errors") {
    GfbpProblem p = zero_problem(1, 1);
    p.objective = nullptr;
    CHECK_THROWS_AS(run(p, make_default(0.9), {}, Vector{1.0}), ParameterError);
    CHECK_NOTHROW(run(p, make_default(0.9), {{1e-5, 3, StopMode::MaxOnly}, 1}, Vector{1.0}));
    CHECK_THROWS_AS(run(p, make_default(0.9), {{1e-5, 3, StopMode::ObjectiveChange}, 1}, Vector{1.0}),
                    ParameterError);
    const GfbpProblem q = zero_problem(1, 1);
    CHECK_THROWS_AS(run(q, make_default(0.9), {{0.0, 3, StopMode::RelativeChange}, 1}, Vector{1.0}),
                    ParameterError);
    CHECK_THROWS_AS(run(q, make_default(0.9), {{1e-5, 0, StopMode::MaxOnly}, 1}, Vector{1.0}), ParameterError);
}

TEST_CASE("run: residual stop mode") {
    GfbpProblem p = zero_problem(1, 1);
    p.blocks = {prox_scaled_sq_norm_op(1.0)};
    p.penalty = grad_half_sqdist_box_op(Vector{0.0}, Vector{1.0});
    const RunReport r = run(p, make_default(0.9), {{1e-3, 100000, StopMode::Residual}, 0}, Vector{5.0});
    CHECK(r.reason == Termination::Residual);
    CHECK(r.final_norm_c <= 1e-3);
}

TEST_CASE("run: elastic-net toy terminates feasible and near the reference optimum") {
    const RegressionData d = gen_regression_data(20, 50, 42);
    const ElasticNetConfig cfg{d.a, d.b, 0.5, false};
    const GfbpProblem p = build_elastic_net(cfg);
    const RunReport r = run(p, make_default(0.9), {{1e-5, 200000, StopMode::RelativeChange}, 100},
                            Vector(50, 0.0));
    CHECK(r.reason == Termination::RelativeChange);
    CHECK(r.final_norm_c < 1e-2);

    // Sampled every 100 steps, F moves monotonically toward its limit.
    std::size_t ups = 0, downs = 0;
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
        if (r.trace[i].objective > r.trace[i - 1].objective) ++ups;
        if (r.trace[i].objective < r.trace[i - 1].objective) ++downs;
    }
    CHECK(std::min(ups, downs) == 0);

    const auto ref = oracle::reference_solve(oracle::elastic_net_reference(cfg), Vector(50, 0.0), 100000, {});
    CHECK(std::abs(*r.final_objective - ref.value) <= 0.01 * ref.value);
}

TEST_CASE("run: determinism") {
    const RegressionData d = gen_regression_data(8, 12, 5);
    const GfbpProblem p = build_elastic_net({d.a, d.b, 0.3, true});
    const RunOptions opt{{1e-5, 2000, StopMode::MaxOnly}, 1};
    const RunReport a = run(p, make_default(0.9), opt, Vector(12, 0.0));
    const RunReport b = run(p, make_default(0.9), opt, Vector(12, 0.0));
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].objective == b.trace[i].objective);
        CHECK(a.trace[i].constraint == b.trace[i].constraint);
        CHECK(a.trace[i].norm_c == b.trace[i].norm_c);
    }
    CHECK(a.x_final == b.x_final);
}

TEST_CASE("strong convergence on a strongly convex problem") {
    // ½(x−3)² + ½|x| + ½x² over [0, 1]: unique solution 1.
    Matrix a(1, 1, 1.0);
    const GfbpProblem p = build_elastic_net({a, Vector{3.0}, 0.5, false});
    const StepSchedule s = make_default(0.9);
    SolverState st = init_state(p, s, Vector{0.0});
    double prev = std::abs(st.x[0] - 1.0);
    std::size_t increases_late = 0;
    for (int k = 0; k < 20000; ++k) {
        gfbp_step(p, s, st);
        const double e = std::abs(st.x[0] - 1.0);
        if (k > 100 && e > prev) ++increases_late;
        prev = e;
    }
    CHECK(increases_late == 0);
    CHECK(prev < 1e-2);
}

TEST_CASE("penalty residual and inner displacement trend to zero") {
    const RegressionData d = gen_regression_data(6, 10, 3);
    const GfbpProblem p = build_elastic_net({d.a, d.b, 0.5, true});
    const RunReport r = run(p, make_default(0.9), {{1e-5, 20000, StopMode::MaxOnly}, 1}, Vector(10, 0.0));
    const std::size_t tenth = r.trace.size() / 10;
    double c_first = 0, c_last = 0, d_first = 0, d_last = 0;
    for (std::size_t i = 0; i < tenth; ++i) {
        c_first += r.trace[i].norm_c;
        d_first += r.trace[i].inner_disp;
        c_last += r.trace[r.trace.size() - 1 - i].norm_c;
        d_last += r.trace[r.trace.size() - 1 - i].inner_disp;
    }
    CHECK(c_last < c_first / 10);
    CHECK(d_last < d_first / 10);
}

TEST_CASE("Heron with A = I shrinks the penalty residual") {
    HeronConfig h = gen_heron_instance(2, 3, 11);
    h.a = Matrix::identity(2);
    const GfbpProblem p = build_heron(h);
    const StepSchedule s = make_default(0.9);
    SolverState st = init_state(p, s, gen_heron_start(2, 11));
    const double r1 = residual_C(p, st.x);
    while (st.k < 100) gfbp_step(p, s, st);
    CHECK(residual_C(p, st.x) < r1);
}
