#pragma once

// Experiment families: box-constrained elastic net (one least-squares block
// or one block per observation) and the generalized Heron problem over the
// null space of a matrix, with their synthetic instance generators.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "gfbp/linalg.hpp"
#include "gfbp/solver.hpp"

namespace gfbp {

/// minimize ½‖Ax − b‖² + γ‖x‖₁ + (1−γ)‖x‖² subject to x ∈ argmin ½dist²(·, [lo, hi]ⁿ).
struct ElasticNetConfig {
    Matrix a;
    Vector b;
    double gamma = 0.5;
    bool split = false;  ///< one rank-one block per row of A instead of one least-squares block
    double lo = 0.0;
    double hi = 1.0;
};

/// minimize Σᵢ dist(x, B(cᵢ, ρᵢ)) + ‖x‖² subject to x ∈ argmin ½‖Ax‖².
struct HeronConfig {
    std::vector<Vector> centers;
    std::vector<double> radii;
    Matrix a;

    std::size_t dim() const noexcept { return a.cols(); }
};

/// Blocks: [least squares | m rank-one quadratics], γ‖·‖₁, (1−γ)‖·‖²; B = 0;
/// C = ∇½dist²(·, box) with cocoercivity 1. The strongly convex term is last.
GfbpProblem build_elastic_net(const ElasticNetConfig& cfg);

/// Blocks: m ball-distance proxes, ‖·‖²; B = 0; C = AᵀA with cocoercivity 1/‖A‖².
GfbpProblem build_heron(const HeronConfig& cfg);

double elastic_net_objective(const ElasticNetConfig& cfg, std::span<const double> x);
double elastic_net_constraint(const ElasticNetConfig& cfg, std::span<const double> x);
double heron_objective(const HeronConfig& cfg, std::span<const double> x);
double heron_constraint(const HeronConfig& cfg, std::span<const double> x);

struct RegressionData {
    Matrix a;
    Vector b;
    Vector x0;
};

/// Standard-normal A (m×n); x₀ with ⌈frac·n⌉ standard-normal entries at random
/// positions; b = Ax₀ + ε with ε i.i.d. N(0, ‖Ax₀‖²).
RegressionData gen_regression_data(std::size_t m, std::size_t n, std::uint64_t seed,
                                   double nonzero_frac = 0.5);

struct HilbertData {
    Matrix a;
    Vector b;
};

/// A_ij = 1/(i+j−1) of size m × 2^m, b_i = −Σ_j A_ij.
HilbertData gen_hilbert_problem(std::size_t m);

/// m unit balls with centers uniform in (−n², n²)ⁿ; A uniform in (−10, 10)^{n×n}.
HeronConfig gen_heron_instance(std::size_t n, std::size_t m, std::uint64_t seed);

/// Uniform point in (−n², n²)ⁿ drawn from a stream independent of the instance.
Vector gen_heron_start(std::size_t n, std::uint64_t seed);

// CSV ingestion. Comma separated; a first row containing any non-numeric cell
// is treated as a header and skipped. Throws FormatError with the offending
// 1-based row/column.
Matrix load_csv_matrix(const std::filesystem::path& path);
/// Accepts a single column or a single row.
Vector load_csv_vector(const std::filesystem::path& path);
Matrix parse_csv_matrix(std::string_view text);

}  // namespace gfbp
