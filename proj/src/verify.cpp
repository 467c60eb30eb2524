#include "gfbp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "gfbp/operators.hpp"
#include "gfbp/oracle.hpp"
#include "gfbp/problems.hpp"
#include "gfbp/rng.hpp"
#include "gfbp/solver.hpp"

namespace gfbp::verify {

namespace {

constexpr std::size_t kGridPoints1d = 2001;
constexpr std::size_t kGridPoints2d = 201;

Vector random_vector(Rng& rng, std::size_t n, double lo, double hi) {
    Vector v(n);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

Matrix random_matrix(Rng& rng, std::size_t m, std::size_t n, double lo, double hi) {
    Matrix a(m, n);
    for (double& x : a.data()) x = rng.uniform(lo, hi);
    return a;
}

CheckResult finish(CheckResult r) {
    r.passed = r.worst <= r.tolerance;
    return r;
}

// Tracks max over draws of |closed − grid| / (2·spacing); passing means ≤ 1.
struct GridTally {
    double worst_ratio = 0.0;
    double worst_abs = 0.0;
    void add(double err, double spacing) {
        worst_ratio = std::max(worst_ratio, err / (2.0 * spacing));
        worst_abs = std::max(worst_abs, err);
    }
    CheckResult result(std::string name) const {
        CheckResult r;
        r.name = std::move(name);
        r.worst = worst_ratio;
        r.tolerance = 1.0;
        r.samples = kDraws;
        std::ostringstream os;
        os << "max |closed - grid| = " << worst_abs << " (in units of 2x grid spacing: " << worst_ratio
           << ")";
        r.detail = os.str();
        return finish(r);
    }
};

double distance2(const Vector& u, const oracle::Point2& p) {
    return std::hypot(u[0] - p[0], u[1] - p[1]);
}

oracle::GridSpec centered_square(const Vector& x, double reach) {
    const double c = std::max(std::abs(x[0]), std::abs(x[1]));
    return {-(c + reach), c + reach, kGridPoints2d};
}

}  // namespace

ProxSuite ProxSuite::library() {
    ProxSuite s;
    s.l1 = [](double r, double w, std::span<const double> x) { return prox_l1(r, w, x); };
    s.scaled_sq_norm = [](double c, double r, std::span<const double> x) {
        return prox_scaled_sq_norm(c, r, x);
    };
    s.rank_one_quadratic = [](std::span<const double> a, double b, double r, std::span<const double> x) {
        return prox_rank_one_quadratic(a, b, r, x);
    };
    s.least_squares = [](const Matrix& a, std::span<const double> b, double r, std::span<const double> x) {
        return prox_least_squares(a, b, r, x);
    };
    s.dist_ball = [](std::span<const double> c, double rho, double r, std::span<const double> x) {
        return prox_dist_ball(c, rho, r, x);
    };
    s.grad_box = [](std::span<const double> lo, std::span<const double> hi, std::span<const double> x) {
        return grad_half_sqdist_box(lo, hi, x);
    };
    s.grad_ax = [](const Matrix& a, std::span<const double> x) { return grad_half_sq_Ax(a, x); };
    return s;
}

CheckResult check_prox_l1_grid(const ProxSuite& s, std::uint64_t seed) {
    Rng rng(seed);
    GridTally tally;
    for (std::size_t d = 0; d < kDraws; ++d) {
        const double r = rng.uniform(0.1, 2.0);
        const double w = rng.uniform(0.0, 2.0);
        const Vector x = random_vector(rng, 3, -3.0, 3.0);
        const Vector closed = s.l1(r, w, x);
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double reach = r * w + 1.0;
            const oracle::GridSpec grid{x[j] - reach, x[j] + reach, kGridPoints1d};
            const double g = oracle::grid_prox([w](double u) { return w * std::abs(u); }, r, x[j], grid);
            tally.add(std::abs(closed[j] - g), grid.spacing());
        }
    }
    return tally.result("prox_l1 vs grid");
}

CheckResult check_prox_scaled_sq_norm_grid(const ProxSuite& s, std::uint64_t seed) {
    Rng rng(seed);
    GridTally tally;
    for (std::size_t d = 0; d < kDraws; ++d) {
        const double c = rng.uniform(0.0, 2.0);
        const double r = rng.uniform(0.1, 2.0);
        const Vector x = random_vector(rng, 3, -3.0, 3.0);
        const Vector closed = s.scaled_sq_norm(c, r, x);
        for (std::size_t j = 0; j < x.size(); ++j) {
            const oracle::GridSpec grid{x[j] - (std::abs(x[j]) + 1.0), x[j] + (std::abs(x[j]) + 1.0),
                                        kGridPoints1d};
            const double g = oracle::grid_prox([c](double u) { return c * u * u; }, r, x[j], grid);
            tally.add(std::abs(closed[j] - g), grid.spacing());
        }
    }
    return tally.result("prox_scaled_sq_norm vs grid");
}

CheckResult check_prox_rank_one_grid(const ProxSuite& s, std::uint64_t seed) {
    Rng rng(seed);
    GridTally tally;
    for (std::size_t d = 0; d < kDraws; ++d) {
        const Vector a = random_vector(rng, 2, -2.0, 2.0);
        const double b = rng.uniform(-2.0, 2.0);
        const double r = rng.uniform(0.1, 2.0);
        const Vector x = random_vector(rng, 2, -3.0, 3.0);
        const Vector closed = s.rank_one_quadratic(a, b, r, x);
        const double resid = std::abs(a[0] * x[0] + a[1] * x[1] - b);
        const auto grid = centered_square(x, r * resid * std::hypot(a[0], a[1]) + 1.0);
        const auto g = oracle::grid_prox(
            [&](oracle::Point2 u) {
                const double t = a[0] * u[0] + a[1] * u[1] - b;
                return 0.5 * t * t;
            },
            r, {x[0], x[1]}, grid);
        tally.add(distance2(closed, g), grid.spacing());
    }
    return tally.result("prox_rank_one_quadratic vs grid");
}

CheckResult check_prox_least_squares_grid(const ProxSuite& s, std::uint64_t seed) {
    Rng rng(seed);
    GridTally tally;
    for (std::size_t d = 0; d < kDraws; ++d) {
        const Matrix a = random_matrix(rng, 3, 2, -1.5, 1.5);
        const Vector b = random_vector(rng, 3, -2.0, 2.0);
        const double r = rng.uniform(0.1, 2.0);
        const Vector x = random_vector(rng, 2, -3.0, 3.0);
        const Vector closed = s.least_squares(a, b, r, x);
        double reach = 1.0;
        {
            // ‖prox(x) − x‖ ≤ r‖∇f(x)‖
            double g0 = 0.0;
            double g1 = 0.0;
            for (std::size_t i = 0; i < 3; ++i) {
                const double t = a(i, 0) * x[0] + a(i, 1) * x[1] - b[i];
                g0 += a(i, 0) * t;
                g1 += a(i, 1) * t;
            }
            reach += r * std::hypot(g0, g1);
        }
        const auto grid = centered_square(x, reach);
        const auto g = oracle::grid_prox(
            [&](oracle::Point2 u) {
                double sum = 0.0;
                for (std::size_t i = 0; i < 3; ++i) {
                    const double t = a(i, 0) * u[0] + a(i, 1) * u[1] - b[i];
                    sum += t * t;
                }
                return 0.5 * sum;
            },
            r, {x[0], x[1]}, grid);
        tally.add(distance2(closed, g), grid.spacing());
    }
    return tally.result("prox_least_squares vs grid");
}

CheckResult check_prox_dist_ball_grid(const ProxSuite& s, std::uint64_t seed) {
    Rng rng(seed);
    GridTally tally;
    for (std::size_t d = 0; d < kDraws; ++d) {
        const Vector c = random_vector(rng, 2, -3.0, 3.0);
        const double rho = rng.uniform(0.2, 2.0);
        const double r = rng.uniform(0.1, 3.0);
        const Vector x = random_vector(rng, 2, -4.0, 4.0);
        const Vector closed = s.dist_ball(c, rho, r, x);
        const auto grid = centered_square(x, r + 1.0);
        const auto g = oracle::grid_prox(
            [&](oracle::Point2 u) { return std::max(0.0, std::hypot(u[0] - c[0], u[1] - c[1]) - rho); }, r,
            {x[0], x[1]}, grid);
        tally.add(distance2(closed, g), grid.spacing());
    }
    return tally.result("prox_dist_ball vs grid");
}

CheckResult check_least_squares_identity(const ProxSuite& s, std::uint64_t seed) {
    Rng rng(seed);
    CheckResult res;
    res.name = "prox_least_squares(I) == prox_scaled_sq_norm(1/2)";
    res.tolerance = kIdentityTol;
    res.samples = kDraws;
    for (std::size_t d = 0; d < kDraws; ++d) {
        const std::size_t n = 1 + rng.index(6);
        const double r = rng.uniform(0.05, 5.0);
        const Vector x = random_vector(rng, n, -5.0, 5.0);
        const Vector u = s.least_squares(Matrix::identity(n), Vector(n, 0.0), r, x);
        const Vector v = s.scaled_sq_norm(0.5, r, x);
        res.worst = std::max(res.worst, distance(u, v));
    }
    return finish(res);
}

namespace {

CheckResult gradient_result(std::string name) {
    CheckResult res;
    res.name = std::move(name);
    res.tolerance = kGradientRelTol;
    res.samples = kDraws;
    return res;
}

}  // namespace

CheckResult check_grad_box_fd(const ProxSuite& s, std::uint64_t seed) {
    Rng rng(seed);
    CheckResult res = gradient_result("grad_half_sqdist_box vs finite differences");
    for (std::size_t d = 0; d < kDraws; ++d) {
        const std::size_t n = 4;
        Vector lo = random_vector(rng, n, -1.0, 0.5);
        Vector hi(n);
        for (std::size_t j = 0; j < n; ++j) hi[j] = lo[j] + rng.uniform(0.1, 1.5);
        const Vector x = random_vector(rng, n, -3.0, 3.0);
        const Vector g = s.grad_box(lo, hi, x);
        const Vector fd = oracle::finite_diff_grad(
            [&](std::span<const double> y) {
                double sum = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    const double e = y[j] < lo[j] ? lo[j] - y[j] : (y[j] > hi[j] ? y[j] - hi[j] : 0.0);
                    sum += e * e;
                }
                return 0.5 * sum;
            },
            x);
        res.worst = std::max(res.worst, distance(g, fd) / std::max(1.0, norm2(fd)));
    }
    return finish(res);
}

CheckResult check_grad_ax_fd(const ProxSuite& s, std::uint64_t seed) {
    Rng rng(seed);
    CheckResult res = gradient_result("grad_half_sq_Ax vs finite differences");
    for (std::size_t d = 0; d < kDraws; ++d) {
        const Matrix a = random_matrix(rng, 4, 3, -2.0, 2.0);
        const Vector x = random_vector(rng, 3, -3.0, 3.0);
        const Vector g = s.grad_ax(a, x);
        const Vector fd = oracle::finite_diff_grad(
            [&](std::span<const double> y) {
                double sum = 0.0;
                for (std::size_t i = 0; i < a.rows(); ++i) {
                    double t = 0.0;
                    for (std::size_t j = 0; j < a.cols(); ++j) t += a(i, j) * y[j];
                    sum += t * t;
                }
                return 0.5 * sum;
            },
            x);
        res.worst = std::max(res.worst, distance(g, fd) / std::max(1.0, norm2(fd)));
    }
    return finish(res);
}

CheckResult check_firm_nonexpansive(const ProxSuite& s, std::uint64_t seed) {
    Rng rng(seed);
    CheckResult res;
    res.name = "firm nonexpansiveness of every prox";
    res.tolerance = kFirmTol;
    std::vector<std::function<Vector(std::span<const double>)>> maps;
    for (std::size_t d = 0; d < 20; ++d) {
        const double r = rng.uniform(0.05, 3.0);
        const double w = rng.uniform(0.0, 2.0);
        const Vector a = random_vector(rng, 3, -2.0, 2.0);
        const double b = rng.uniform(-2.0, 2.0);
        const Matrix am = random_matrix(rng, 4, 3, -2.0, 2.0);
        const Vector bm = random_vector(rng, 4, -2.0, 2.0);
        const Vector c = random_vector(rng, 3, -2.0, 2.0);
        const double rho = rng.uniform(0.2, 2.0);
        maps.push_back([&s, r, w](std::span<const double> x) { return s.l1(r, w, x); });
        maps.push_back([&s, r, w](std::span<const double> x) { return s.scaled_sq_norm(w, r, x); });
        maps.push_back([&s, r, a, b](std::span<const double> x) { return s.rank_one_quadratic(a, b, r, x); });
        maps.push_back([&s, r, am, bm](std::span<const double> x) { return s.least_squares(am, bm, r, x); });
        maps.push_back([&s, r, c, rho](std::span<const double> x) { return s.dist_ball(c, rho, r, x); });
    }
    for (const auto& p : maps) {
        for (std::size_t t = 0; t < 10; ++t) {
            const Vector x = random_vector(rng, 3, -4.0, 4.0);
            const Vector y = random_vector(rng, 3, -4.0, 4.0);
            const Vector px = p(x);
            const Vector py = p(y);
            Vector dp(3);
            Vector dx(3);
            for (std::size_t j = 0; j < 3; ++j) {
                dp[j] = px[j] - py[j];
                dx[j] = x[j] - y[j];
            }
            const double violation = (squared_norm(dp) - dot(dp, dx)) / (1.0 + squared_norm(dx));
            res.worst = std::max(res.worst, violation);
            ++res.samples;
        }
    }
    return finish(res);
}

CheckResult check_cocoercivity(std::uint64_t seed) {
    Rng rng(seed);
    CheckResult res;
    res.name = "sampled cocoercivity of constraint gradients";
    res.tolerance = 1e-9;
    const std::size_t n = 4;
    const Matrix a = random_matrix(rng, 5, n, -3.0, 3.0);
    const CocoerciveOp ops[] = {grad_half_sqdist_box_op(Vector(n, 0.0), Vector(n, 1.0)),
                                grad_half_sq_Ax_op(a)};
    for (const auto& op : ops) {
        for (std::size_t t = 0; t < 1000; ++t) {
            const Vector x = random_vector(rng, n, -3.0, 3.0);
            const Vector y = random_vector(rng, n, -3.0, 3.0);
            const Vector tx = op(x);
            const Vector ty = op(y);
            Vector dt(n);
            Vector dx(n);
            for (std::size_t j = 0; j < n; ++j) {
                dt[j] = tx[j] - ty[j];
                dx[j] = x[j] - y[j];
            }
            const double lhs = dot(dx, dt);
            const double rhs = op.cocoercivity() * squared_norm(dt);
            res.worst = std::max(res.worst, (rhs - lhs) / (1.0 + std::abs(lhs)));
            ++res.samples;
        }
    }
    return finish(res);
}

CheckResult check_backward_composition(std::uint64_t seed, std::size_t steps) {
    Rng rng(seed);
    const std::size_t n = 4;
    GfbpProblem problem;
    problem.dim = n;
    problem.blocks.push_back(prox_l1_op(rng.uniform(0.1, 1.0)));
    problem.blocks.push_back(prox_dist_ball_op(random_vector(rng, n, -5.0, 5.0), 1.0, "ball"));
    problem.blocks.push_back(prox_scaled_sq_norm_op(rng.uniform(0.1, 1.0)));
    const StepSchedule schedule = make_default(0.9);
    const Vector start = random_vector(rng, n, -5.0, 5.0);

    SolverState state = init_state(problem, schedule, start);
    Vector direct = start;
    std::size_t mismatches = 0;
    for (std::size_t k = 1; k <= steps; ++k) {
        gfbp_step(problem, schedule, state);
        const double alpha = schedule.alpha(k);
        for (const auto& block : problem.blocks) direct = block(alpha, direct);
        if (state.x != direct) ++mismatches;
    }
    CheckResult res;
    res.name = "backward composition (B = C = 0) is bit-identical";
    res.worst = static_cast<double>(mismatches);
    res.tolerance = 0.0;
    res.samples = steps;
    res.detail = std::to_string(mismatches) + " mismatching steps";
    return finish(res);
}

CheckResult check_split_objective_identity(std::uint64_t seed) {
    const RegressionData data = gen_regression_data(12, 7, seed);
    ElasticNetConfig cfg{data.a, data.b, 0.5, false};
    const GfbpProblem whole = build_elastic_net(cfg);
    cfg.split = true;
    const GfbpProblem split = build_elastic_net(cfg);

    Rng rng(seed + 1);
    CheckResult res;
    res.name = "split and non-split elastic net agree on F and g";
    res.tolerance = kObjectiveIdentityTol;
    res.samples = kDraws;
    for (std::size_t d = 0; d < kDraws; ++d) {
        const Vector x = random_vector(rng, 7, -2.0, 3.0);
        const double f1 = whole.objective(x);
        const double f2 = split.objective(x);
        const double g1 = whole.constraint_value(x);
        const double g2 = split.constraint_value(x);
        res.worst = std::max(res.worst, std::abs(f1 - f2) / std::max(1.0, std::abs(f1)));
        res.worst = std::max(res.worst, std::abs(g1 - g2) / std::max(1.0, std::abs(g1)));
    }
    // The split objective must also equal the per-row sum it stands for.
    for (std::size_t d = 0; d < 10; ++d) {
        const Vector x = random_vector(rng, 7, -2.0, 3.0);
        double rows = 0.0;
        for (std::size_t i = 0; i < data.a.rows(); ++i) {
            const double t = dot(data.a.row(i), x) - data.b[i];
            rows += 0.5 * t * t;
        }
        double l1 = 0.0;
        for (double v : x) l1 += std::abs(v);
        const double expected = rows + 0.5 * l1 + 0.5 * squared_norm(x);
        res.worst = std::max(res.worst, std::abs(split.objective(x) - expected) / std::max(1.0, expected));
    }
    return finish(res);
}

std::vector<CheckResult> run_all(const ProxSuite& suite, std::uint64_t seed) {
    return {
        check_prox_l1_grid(suite, seed),
        check_prox_scaled_sq_norm_grid(suite, seed + 1),
        check_prox_rank_one_grid(suite, seed + 2),
        check_prox_least_squares_grid(suite, seed + 3),
        check_prox_dist_ball_grid(suite, seed + 4),
        check_least_squares_identity(suite, seed + 5),
        check_grad_box_fd(suite, seed + 6),
        check_grad_ax_fd(suite, seed + 7),
        check_firm_nonexpansive(suite, seed + 8),
        check_cocoercivity(seed + 9),
        check_backward_composition(seed + 10),
        check_split_objective_identity(seed + 11),
    };
}

std::string format_table(const std::vector<CheckResult>& results) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-52s %-6s %12s %12s\n", "check", "status", "worst", "tolerance");
    os << line;
    for (const auto& r : results) {
        std::snprintf(line, sizeof line, "%-52s %-6s %12.3e %12.3e\n", r.name.c_str(),
                      r.passed ? "pass" : "FAIL", r.worst, r.tolerance);
        os << line;
    }
    return os.str();
}

std::string to_json(const std::vector<CheckResult>& results) {
    nlohmann::json j = nlohmann::json::array();
    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
        j.push_back({{"name", r.name},
                     {"passed", r.passed},
                     {"worst", r.worst},
                     {"tolerance", r.tolerance},
                     {"samples", r.samples},
                     {"detail", r.detail}});
    }
    return nlohmann::json{{"passed", all}, {"checks", j}}.dump(2);
}

}  // namespace gfbp::verify
