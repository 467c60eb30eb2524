#pragma once

// Brute-force ground truth used to check the closed-form operators and the
// solver. Nothing here calls into operators.hpp or solver.hpp: the grid prox
// minimizes the defining objective directly, gradients come from central
// differences, and the reference solver is a projected subgradient method.

#include <array>
#include <cstddef>
#include <functional>
#include <span>

#include "gfbp/linalg.hpp"
#include "gfbp/problems.hpp"

namespace gfbp::oracle {

struct GridSpec {
    double lower = -1.0;
    double upper = 1.0;
    std::size_t points = 2001;

    double spacing() const noexcept { return (upper - lower) / static_cast<double>(points - 1); }
};

/// Minimum points per axis the grid oracles accept.
inline constexpr std::size_t kMinPoints1d = 1000;
inline constexpr std::size_t kMinPoints2d = 201;

/// Grid argmin of f(u) + (u − x)²/(2r) over the grid, then a ternary search
/// on the bracketing cell. Ties go to the lowest grid index.
double grid_prox(const std::function<double(double)>& f, double r, double x, const GridSpec& grid);

using Point2 = std::array<double, 2>;

/// Same on the square tensor grid (bounds and count apply to both axes), refined by two
/// passes of a 21×21 sub-grid on the neighboring cells.
Point2 grid_prox(const std::function<double(Point2)>& f, double r, Point2 x, const GridSpec& grid);

/// Central differences with step h per coordinate.
Vector finite_diff_grad(const std::function<double(std::span<const double>)>& phi,
                        std::span<const double> x, double h = 1e-6);

/// Independent description of "minimize F over a set with an exact projection".
struct ReferenceProblem {
    std::function<double(std::span<const double>)> value;
    std::function<Vector(std::span<const double>)> subgradient;
    std::function<Vector(std::span<const double>)> projection;
};

struct StepRule {
    double c = 1.0;           ///< step_k = c/√k
    bool normalized = false;  ///< divide by ‖subgradient‖
};

struct ReferenceResult {
    Vector x;
    double value = 0.0;
};

/// Projected subgradient method from x0, tracking the best projected iterate.
ReferenceResult reference_solve(const ReferenceProblem& problem, std::span<const double> x0,
                                std::size_t iters, StepRule step);

/// Largest dimension for which the reference instances build a projection.
inline constexpr std::size_t kMaxReferenceDim = 50;

/// Elastic net over the box, with its own value and subgradient formulas.
ReferenceProblem elastic_net_reference(const ElasticNetConfig& cfg);

/// Heron over null(A); the projection I − A⁺A is formed from an SVD.
/// Throws UnsupportedInstance above kMaxReferenceDim.
ReferenceProblem heron_reference(const HeronConfig& cfg);

}  // namespace gfbp::oracle
