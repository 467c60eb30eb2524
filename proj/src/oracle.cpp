#include "gfbp/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gfbp/error.hpp"

namespace gfbp::oracle {

namespace {

struct Best {
    double value = std::numeric_limits<double>::infinity();
    std::size_t index = std::numeric_limits<std::size_t>::max();
};

Best better(const Best& a, const Best& b) {
    if (a.value < b.value) return a;
    if (b.value < a.value) return b;
    return a.index <= b.index ? a : b;
}

// Argmin over indices [0, count) of eval(i); parallel with a deterministic
// reduction (lowest index wins ties).
template <class Eval>
Best grid_argmin(std::size_t count, const Eval& eval) {
    Best global;
#pragma omp parallel
    {
        Best local;
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(count); ++ii) {
            const auto i = static_cast<std::size_t>(ii);
            const double v = eval(i);
            if (v < local.value) local = {v, i};
        }
#pragma omp critical(gfbp_grid_argmin)
        global = better(global, local);
    }
    return global;
}

void check_grid(const GridSpec& grid, std::size_t min_points) {
    if (!(grid.lower < grid.upper)) throw ParameterError("grid: lower bound must be below upper bound");
    if (grid.points < min_points) {
        throw ParameterError("grid: at least " + std::to_string(min_points) + " points per axis required");
    }
}

}  // namespace

double grid_prox(const std::function<double(double)>& f, double r, double x, const GridSpec& grid) {
    check_grid(grid, kMinPoints1d);
    if (!(r > 0.0)) throw ParameterError("grid_prox: step must be positive");
    const double h = grid.spacing();
    auto objective = [&](double u) { return f(u) + (u - x) * (u - x) / (2.0 * r); };
    auto at = [&](std::size_t i) { return grid.lower + h * static_cast<double>(i); };

    const Best best = grid_argmin(grid.points, [&](std::size_t i) { return objective(at(i)); });

    // The objective is strictly convex, so the minimizer lies in the two cells
    // around the grid argmin; ternary search there.
    double lo = std::max(grid.lower, at(best.index) - h);
    double hi = std::min(grid.upper, at(best.index) + h);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (objective(m1) <= objective(m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    const double refined = 0.5 * (lo + hi);
    return objective(refined) <= best.value ? refined : at(best.index);
}

Point2 grid_prox(const std::function<double(Point2)>& f, double r, Point2 x, const GridSpec& grid) {
    check_grid(grid, kMinPoints2d);
    if (!(r > 0.0)) throw ParameterError("grid_prox: step must be positive");
    auto objective = [&](Point2 u) {
        const double d0 = u[0] - x[0];
        const double d1 = u[1] - x[1];
        return f(u) + (d0 * d0 + d1 * d1) / (2.0 * r);
    };

    const std::size_t n = grid.points;
    const double h = grid.spacing();
    auto point = [&](std::size_t idx) {
        return Point2{grid.lower + h * static_cast<double>(idx / n),
                      grid.lower + h * static_cast<double>(idx % n)};
    };
    const Best coarse = grid_argmin(n * n, [&](std::size_t idx) { return objective(point(idx)); });

    Point2 center = point(coarse.index);
    double best_value = coarse.value;
    double half = h;
    constexpr std::size_t sub = 21;
    for (int pass = 0; pass < 2; ++pass) {
        const double step = 2.0 * half / static_cast<double>(sub - 1);
        const Point2 origin{center[0] - half, center[1] - half};
        auto sub_point = [&](std::size_t idx) {
            return Point2{origin[0] + step * static_cast<double>(idx / sub),
                          origin[1] + step * static_cast<double>(idx % sub)};
        };
        const Best fine = grid_argmin(sub * sub, [&](std::size_t idx) { return objective(sub_point(idx)); });
        if (fine.value <= best_value) {
            best_value = fine.value;
            center = sub_point(fine.index);
        }
        half = step;
    }
    return center;
}

Vector finite_diff_grad(const std::function<double(std::span<const double>)>& phi,
                        std::span<const double> x, double h) {
    if (!(h > 0.0)) throw ParameterError("finite_diff_grad: step must be positive");
    Vector probe(x.begin(), x.end());
    Vector g(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double orig = probe[j];
        probe[j] = orig + h;
        const double up = phi(probe);
        probe[j] = orig - h;
        const double down = phi(probe);
        probe[j] = orig;
        g[j] = (up - down) / (2.0 * h);
    }
    return g;
}

ReferenceResult reference_solve(const ReferenceProblem& problem, std::span<const double> x0,
                                std::size_t iters, StepRule step) {
    if (!problem.value || !problem.subgradient || !problem.projection) {
        throw UnsupportedInstance("reference_solve: problem lacks value, subgradient or projection");
    }
    if (!(step.c > 0.0)) throw ParameterError("reference_solve: step constant must be positive");

    Vector x = problem.projection(x0);
    ReferenceResult best{x, problem.value(x)};
    for (std::size_t k = 1; k <= iters; ++k) {
        const Vector g = problem.subgradient(x);
        double t = step.c / std::sqrt(static_cast<double>(k));
        if (step.normalized) {
            double gn = 0.0;
            for (double v : g) gn += v * v;
            gn = std::sqrt(gn);
            if (gn == 0.0) break;
            t /= gn;
        }
        for (std::size_t j = 0; j < x.size(); ++j) x[j] -= t * g[j];
        x = problem.projection(x);
        const double v = problem.value(x);
        if (v < best.value) best = {x, v};
    }
    return best;
}

ReferenceProblem elastic_net_reference(const ElasticNetConfig& cfg) {
    const std::size_t m = cfg.a.rows();
    const std::size_t n = cfg.a.cols();
    Eigen::MatrixXd a(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = cfg.a(i, j);
    const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(cfg.b.data(), m);
    const double gamma = cfg.gamma;
    const double lo = cfg.lo;
    const double hi = cfg.hi;

    ReferenceProblem p;
    p.value = [a, b, gamma](std::span<const double> xs) {
        const Eigen::Map<const Eigen::VectorXd> x(xs.data(), xs.size());
        return 0.5 * (a * x - b).squaredNorm() + gamma * x.lpNorm<1>() +
               (1.0 - gamma) * x.squaredNorm();
    };
    p.subgradient = [a, b, gamma](std::span<const double> xs) {
        const Eigen::Map<const Eigen::VectorXd> x(xs.data(), xs.size());
        Eigen::VectorXd g = a.transpose() * (a * x - b) + 2.0 * (1.0 - gamma) * x;
        for (Eigen::Index j = 0; j < g.size(); ++j) {
            g(j) += gamma * (x(j) > 0.0 ? 1.0 : (x(j) < 0.0 ? -1.0 : 0.0));
        }
        return Vector(g.data(), g.data() + g.size());
    };
    p.projection = [lo, hi](std::span<const double> xs) {
        Vector out(xs.begin(), xs.end());
        for (double& v : out) v = std::min(hi, std::max(lo, v));
        return out;
    };
    return p;
}

ReferenceProblem heron_reference(const HeronConfig& cfg) {
    const std::size_t n = cfg.a.cols();
    if (n > kMaxReferenceDim) {
        throw UnsupportedInstance("heron_reference: dimension " + std::to_string(n) +
                                  " exceeds the dense null-space limit");
    }
    Eigen::MatrixXd a(cfg.a.rows(), n);
    for (std::size_t i = 0; i < cfg.a.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = cfg.a(i, j);
    const Eigen::MatrixXd pinv = a.completeOrthogonalDecomposition().pseudoInverse();
    const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(n, n) - pinv * a;

    std::vector<Eigen::VectorXd> centers;
    for (const auto& c : cfg.centers) centers.emplace_back(Eigen::Map<const Eigen::VectorXd>(c.data(), n));
    const std::vector<double> radii = cfg.radii;

    ReferenceProblem p;
    p.value = [centers, radii](std::span<const double> xs) {
        const Eigen::Map<const Eigen::VectorXd> x(xs.data(), xs.size());
        double s = x.squaredNorm();
        for (std::size_t i = 0; i < centers.size(); ++i) s += std::max(0.0, (x - centers[i]).norm() - radii[i]);
        return s;
    };
    p.subgradient = [centers, radii](std::span<const double> xs) {
        const Eigen::Map<const Eigen::VectorXd> x(xs.data(), xs.size());
        Eigen::VectorXd g = 2.0 * x;
        for (std::size_t i = 0; i < centers.size(); ++i) {
            const Eigen::VectorXd d = x - centers[i];
            const double nd = d.norm();
            if (nd > radii[i]) g += d / nd;
        }
        return Vector(g.data(), g.data() + g.size());
    };
    p.projection = [proj](std::span<const double> xs) {
        const Eigen::Map<const Eigen::VectorXd> x(xs.data(), xs.size());
        const Eigen::VectorXd y = proj * x;
        return Vector(y.data(), y.data() + y.size());
    };
    return p;
}

}  // namespace gfbp::oracle
