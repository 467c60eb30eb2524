#pragma once

// Minimal dense linear algebra: a row-major matrix, vector helpers, and the
// handful of kernels the solver needs. Every kernel exists twice: the OpenMP
// version in gfbp::kernels and a plain loop in gfbp::kernels::serial that the
// tests and the benchmark use as the reference.

#include <cstddef>
#include <span>
#include <vector>

namespace gfbp {

using Vector = std::vector<double>;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    /// Takes ownership of row-major data; throws ShapeError if the size is wrong.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> d);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    Matrix transposed() const;
    bool all_zero() const noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double squared_norm(std::span<const double> x);
double distance(std::span<const double> x, std::span<const double> y);
double squared_distance(std::span<const double> x, std::span<const double> y);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
bool all_finite(std::span<const double> x) noexcept;

namespace kernels {

/// Below this many multiply-adds the parallel kernels run on one thread.
inline constexpr std::size_t kParallelThreshold = 1 << 15;

/// y = A x
Vector matvec(const Matrix& a, std::span<const double> x);
/// y = Aᵀ x
Vector matvec_transposed(const Matrix& a, std::span<const double> x);
/// AᵀA (cols × cols)
Matrix gram_columns(const Matrix& a);
/// AAᵀ (rows × rows)
Matrix gram_rows(const Matrix& a);

namespace serial {
Vector matvec(const Matrix& a, std::span<const double> x);
Vector matvec_transposed(const Matrix& a, std::span<const double> x);
Matrix gram_columns(const Matrix& a);
Matrix gram_rows(const Matrix& a);
}  // namespace serial

}  // namespace kernels

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
class Cholesky {
public:
    /// Throws ParameterError when the matrix is not numerically positive definite.
    explicit Cholesky(const Matrix& spd);
    Vector solve(std::span<const double> rhs) const;
    std::size_t size() const noexcept { return factor_.rows(); }

private:
    Matrix factor_;
};

struct CgResult {
    Vector solution;
    std::size_t iterations = 0;
    double residual_norm = 0.0;
    bool converged = false;
};

/// Conjugate gradients for an SPD operator given as a callable y = op(x).
/// Stops when ‖r‖ ≤ rel_tol·‖rhs‖.
template <class Op>
CgResult conjugate_gradient(const Op& op, std::span<const double> rhs, double rel_tol,
                            std::size_t max_iters);

/// λ_max(AᵀA) by power iteration; stops when the Rayleigh quotient changes by
/// less than tol relative. Throws EstimationError after max_iters.
double spectral_norm_sq(const Matrix& a, double tol = 1e-12, std::size_t max_iters = 100000);

}  // namespace gfbp

#include "gfbp/detail/cg.ipp"
