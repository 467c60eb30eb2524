#include "gfbp/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gfbp/error.hpp"
#include "gfbp/rng.hpp"

namespace gfbp {

namespace {

void check_elastic_net(const ElasticNetConfig& cfg) {
    if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0)) {
        throw ParameterError("elastic net: gamma must lie in [0, 1], got " + std::to_string(cfg.gamma));
    }
    if (cfg.a.rows() == 0 || cfg.a.cols() == 0) throw ParameterError("elastic net: A is empty");
    if (cfg.b.size() != cfg.a.rows()) {
        throw ShapeError("elastic net: b has " + std::to_string(cfg.b.size()) + " entries, A has " +
                         std::to_string(cfg.a.rows()) + " rows");
    }
    if (cfg.lo > cfg.hi) throw ParameterError("elastic net: box lower bound exceeds upper bound");
}

void check_heron(const HeronConfig& cfg) {
    const std::size_t n = cfg.a.cols();
    if (n == 0 || cfg.a.rows() == 0) throw ParameterError("heron: A is empty");
    if (cfg.a.all_zero()) throw ParameterError("heron: A is identically zero");
    if (cfg.centers.empty()) throw ParameterError("heron: at least one target is required");
    if (cfg.radii.size() != cfg.centers.size()) {
        throw ShapeError("heron: number of radii differs from number of centers");
    }
    for (std::size_t i = 0; i < cfg.centers.size(); ++i) {
        if (cfg.centers[i].size() != n) {
            throw ShapeError("heron: center " + std::to_string(i + 1) + " has dimension " +
                             std::to_string(cfg.centers[i].size()) + ", expected " +
                             std::to_string(n));
        }
        if (!(cfg.radii[i] > 0.0)) throw ParameterError("heron: radii must be positive");
    }
}

}  // namespace

double elastic_net_objective(const ElasticNetConfig& cfg, std::span<const double> x) {
    const Vector ax = kernels::matvec(cfg.a, x);
    double fit = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        const double r = ax[i] - cfg.b[i];
        fit += r * r;
    }
    double l1 = 0.0;
    for (double v : x) l1 += std::abs(v);
    return 0.5 * fit + cfg.gamma * l1 + (1.0 - cfg.gamma) * squared_norm(x);
}

double elastic_net_constraint(const ElasticNetConfig& cfg, std::span<const double> x) {
    double s = 0.0;
    for (double v : x) {
        const double d = v - std::clamp(v, cfg.lo, cfg.hi);
        s += d * d;
    }
    return 0.5 * s;
}

double heron_objective(const HeronConfig& cfg, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < cfg.centers.size(); ++i) {
        s += std::max(0.0, distance(x, cfg.centers[i]) - cfg.radii[i]);
    }
    return s + squared_norm(x);
}

double heron_constraint(const HeronConfig& cfg, std::span<const double> x) {
    return 0.5 * squared_norm(kernels::matvec(cfg.a, x));
}

GfbpProblem build_elastic_net(const ElasticNetConfig& cfg) {
    check_elastic_net(cfg);
    const std::size_t n = cfg.a.cols();
    GfbpProblem problem;
    problem.dim = n;
    if (cfg.split) {
        problem.blocks.reserve(cfg.a.rows() + 2);
        for (std::size_t i = 0; i < cfg.a.rows(); ++i) {
            const auto row = cfg.a.row(i);
            problem.blocks.push_back(prox_rank_one_quadratic_op(
                Vector(row.begin(), row.end()), cfg.b[i], "row_" + std::to_string(i + 1)));
        }
    } else {
        problem.blocks.push_back(prox_least_squares_op(cfg.a, cfg.b));
    }
    problem.blocks.push_back(prox_l1_op(cfg.gamma));
    problem.blocks.push_back(prox_scaled_sq_norm_op(1.0 - cfg.gamma));
    problem.smooth = zero_cocoercive();
    problem.penalty = grad_half_sqdist_box_op(Vector(n, cfg.lo), Vector(n, cfg.hi));
    problem.objective = [cfg](std::span<const double> x) { return elastic_net_objective(cfg, x); };
    problem.constraint_value = [cfg](std::span<const double> x) {
        return elastic_net_constraint(cfg, x);
    };
    return problem;
}

GfbpProblem build_heron(const HeronConfig& cfg) {
    check_heron(cfg);
    GfbpProblem problem;
    problem.dim = cfg.dim();
    problem.blocks.reserve(cfg.centers.size() + 1);
    for (std::size_t i = 0; i < cfg.centers.size(); ++i) {
        problem.blocks.push_back(
            prox_dist_ball_op(cfg.centers[i], cfg.radii[i], "ball_" + std::to_string(i + 1)));
    }
    problem.blocks.push_back(prox_scaled_sq_norm_op(1.0));
    problem.smooth = zero_cocoercive();
    problem.penalty = grad_half_sq_Ax_op(cfg.a);
    problem.objective = [cfg](std::span<const double> x) { return heron_objective(cfg, x); };
    problem.constraint_value = [cfg](std::span<const double> x) { return heron_constraint(cfg, x); };
    return problem;
}

RegressionData gen_regression_data(std::size_t m, std::size_t n, std::uint64_t seed,
                                   double nonzero_frac) {
    if (m == 0 || n == 0) throw ParameterError("gen_regression_data: sizes must be positive");
    if (!(nonzero_frac >= 0.0 && nonzero_frac <= 1.0)) {
        throw ParameterError("gen_regression_data: nonzero_frac must lie in [0, 1]");
    }
    Rng rng(seed);
    RegressionData out;
    out.a = Matrix(m, n);
    for (double& v : out.a.data()) v = rng.normal();

    const auto nnz = static_cast<std::size_t>(std::ceil(nonzero_frac * static_cast<double>(n)));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // Partial Fisher–Yates: the first nnz slots become the support.
    for (std::size_t i = 0; i < nnz; ++i) std::swap(idx[i], idx[i + rng.index(n - i)]);
    out.x0.assign(n, 0.0);
    for (std::size_t i = 0; i < nnz; ++i) out.x0[idx[i]] = rng.normal();

    out.b = kernels::matvec(out.a, out.x0);
    const double sd = norm2(out.b);
    for (double& v : out.b) v += sd * rng.normal();
    return out;
}

HilbertData gen_hilbert_problem(std::size_t m) {
    if (m == 0 || m > 20) throw ParameterError("gen_hilbert_problem: m must lie in [1, 20]");
    const std::size_t n = std::size_t{1} << m;
    HilbertData out{Matrix(m, n), Vector(m, 0.0)};
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = 1.0 / static_cast<double>(i + j + 1);  // 1/(i+j−1), 1-based
            out.a(i, j) = v;
            s += v;
        }
        out.b[i] = -s;
    }
    return out;
}

HeronConfig gen_heron_instance(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (n == 0 || m == 0) throw ParameterError("gen_heron_instance: sizes must be positive");
    Rng rng(seed);
    const double half = static_cast<double>(n * n);
    HeronConfig cfg;
    cfg.centers.resize(m, Vector(n));
    for (auto& c : cfg.centers)
        for (double& v : c) v = rng.uniform(-half, half);
    cfg.radii.assign(m, 1.0);
    cfg.a = Matrix(n, n);
    for (double& v : cfg.a.data()) v = rng.uniform(-10.0, 10.0);
    return cfg;
}

Vector gen_heron_start(std::size_t n, std::uint64_t seed) {
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const double half = static_cast<double>(n * n);
    Vector x(n);
    for (double& v : x) v = rng.uniform(-half, half);
    return x;
}

}  // namespace gfbp
