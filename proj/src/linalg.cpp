#include "gfbp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gfbp/error.hpp"
#include "gfbp/rng.hpp"

namespace gfbp {

namespace {

void require_cols(const Matrix& a, std::size_t n, const char* what) {
    if (a.cols() != n) {
        throw ShapeError(std::string(what) + ": matrix has " + std::to_string(a.cols()) +
                         " columns, vector has " + std::to_string(n) + " entries");
    }
}

void require_rows(const Matrix& a, std::size_t n, const char* what) {
    if (a.rows() != n) {
        throw ShapeError(std::string(what) + ": matrix has " + std::to_string(a.rows()) +
                         " rows, vector has " + std::to_string(n) + " entries");
    }
}

void require_same(std::size_t a, std::size_t b) {
    if (a != b) {
        throw ShapeError("vector lengths differ: " + std::to_string(a) + " vs " +
                         std::to_string(b));
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) {
        throw ShapeError("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                         std::to_string(rows * cols));
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

Matrix Matrix::diagonal(std::span<const double> d) {
    Matrix out(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) out(i, i) = d[i];
    return out;
}

Matrix Matrix::transposed() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

bool Matrix::all_zero() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

double dot(std::span<const double> x, std::span<const double> y) {
    require_same(x.size(), y.size());
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double squared_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double norm2(std::span<const double> x) { return std::sqrt(squared_norm(x)); }

double squared_distance(std::span<const double> x, std::span<const double> y) {
    require_same(x.size(), y.size());
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

double distance(std::span<const double> x, std::span<const double> y) {
    return std::sqrt(squared_distance(x, y));
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    require_same(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

bool all_finite(std::span<const double> x) noexcept {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

namespace kernels {

namespace serial {

Vector matvec(const Matrix& a, std::span<const double> x) {
    require_cols(a, x.size(), "matvec");
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Vector matvec_transposed(const Matrix& a, std::span<const double> x) {
    require_rows(a, x.size(), "matvec_transposed");
    Vector y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * x[i];
    return y;
}

Matrix gram_columns(const Matrix& a) {
    Matrix g(a.cols(), a.cols());
    for (std::size_t p = 0; p < a.cols(); ++p)
        for (std::size_t q = 0; q < a.cols(); ++q) {
            double s = 0.0;
            for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, p) * a(i, q);
            g(p, q) = s;
        }
    return g;
}

Matrix gram_rows(const Matrix& a) {
    Matrix g(a.rows(), a.rows());
    for (std::size_t p = 0; p < a.rows(); ++p)
        for (std::size_t q = 0; q < a.rows(); ++q) {
            double s = 0.0;
            for (std::size_t j = 0; j < a.cols(); ++j) s += a(p, j) * a(q, j);
            g(p, q) = s;
        }
    return g;
}

}  // namespace serial

Vector matvec(const Matrix& a, std::span<const double> x) {
    require_cols(a, x.size(), "matvec");
    const auto rows = static_cast<std::ptrdiff_t>(a.rows());
    const std::size_t cols = a.cols();
    Vector y(a.rows(), 0.0);
#pragma omp parallel for schedule(static) if (a.rows() * cols >= kParallelThreshold)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
        const auto r = a.row(static_cast<std::size_t>(i));
        double s = 0.0;
        for (std::size_t j = 0; j < cols; ++j) s += r[j] * x[j];
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

Vector matvec_transposed(const Matrix& a, std::span<const double> x) {
    require_rows(a, x.size(), "matvec_transposed");
    const auto cols = static_cast<std::ptrdiff_t>(a.cols());
    const std::size_t rows = a.rows();
    Vector y(a.cols(), 0.0);
    // Column-parallel: each thread owns a slice of y, so the row loop order
    // (and hence the rounding) matches the serial kernel exactly.
#pragma omp parallel for schedule(static) if (rows * a.cols() >= kParallelThreshold)
    for (std::ptrdiff_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i) s += a(i, static_cast<std::size_t>(j)) * x[i];
        y[static_cast<std::size_t>(j)] = s;
    }
    return y;
}

Matrix gram_columns(const Matrix& a) {
    const std::size_t n = a.cols();
    const std::size_t m = a.rows();
    Matrix g(n, n);
#pragma omp parallel for schedule(dynamic, 8) if (m * n * n >= kParallelThreshold)
    for (std::ptrdiff_t pi = 0; pi < static_cast<std::ptrdiff_t>(n); ++pi) {
        const auto p = static_cast<std::size_t>(pi);
        for (std::size_t q = p; q < n; ++q) {
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += a(i, p) * a(i, q);
            g(p, q) = s;
            g(q, p) = s;
        }
    }
    return g;
}

Matrix gram_rows(const Matrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    Matrix g(m, m);
#pragma omp parallel for schedule(dynamic, 8) if (m * m * n >= kParallelThreshold)
    for (std::ptrdiff_t pi = 0; pi < static_cast<std::ptrdiff_t>(m); ++pi) {
        const auto p = static_cast<std::size_t>(pi);
        const auto rp = a.row(p);
        for (std::size_t q = p; q < m; ++q) {
            const auto rq = a.row(q);
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += rp[j] * rq[j];
            g(p, q) = s;
            g(q, p) = s;
        }
    }
    return g;
}

}  // namespace kernels

Cholesky::Cholesky(const Matrix& spd) : factor_(spd.rows(), spd.cols()) {
    if (spd.rows() != spd.cols()) throw ShapeError("Cholesky: matrix is not square");
    const std::size_t n = spd.rows();
    for (std::size_t j = 0; j < n; ++j) {
        double d = spd(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= factor_(j, k) * factor_(j, k);
        if (!(d > 0.0)) {
            throw ParameterError("Cholesky: matrix is not positive definite (pivot " +
                                 std::to_string(j) + ")");
        }
        const double ljj = std::sqrt(d);
        factor_(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = spd(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= factor_(i, k) * factor_(j, k);
            factor_(i, j) = s / ljj;
        }
    }
}

Vector Cholesky::solve(std::span<const double> rhs) const {
    const std::size_t n = size();
    if (rhs.size() != n) throw ShapeError("Cholesky::solve: right-hand side has wrong length");
    Vector y(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i < n; ++i) {
        double s = y[i];
        for (std::size_t k = 0; k < i; ++k) s -= factor_(i, k) * y[k];
        y[i] = s / factor_(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= factor_(k, ii) * y[k];
        y[ii] = s / factor_(ii, ii);
    }
    return y;
}

double spectral_norm_sq(const Matrix& a, double tol, std::size_t max_iters) {
    if (a.empty() || a.all_zero()) throw ParameterError("spectral_norm_sq: matrix is zero");
    Rng rng(0x5eedULL);
    Vector v(a.cols());
    for (double& c : v) c = 1.0 + 0.25 * rng.normal();
    double nv = norm2(v);
    for (double& c : v) c /= nv;

    double estimate = 0.0;
    for (std::size_t it = 0; it < max_iters; ++it) {
        Vector w = kernels::matvec_transposed(a, kernels::matvec(a, v));
        const double rayleigh = dot(v, w);
        const double nw = norm2(w);
        if (nw == 0.0) {
            // Start vector fell in the null space; restart from a fresh direction.
            for (double& c : v) c = rng.normal();
            nv = norm2(v);
            for (double& c : v) c /= nv;
            continue;
        }
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = w[j] / nw;
        if (it > 0 && std::abs(rayleigh - estimate) <= tol * std::abs(rayleigh)) {
            return std::max(rayleigh, estimate);
        }
        estimate = rayleigh;
    }
    throw EstimationError("spectral_norm_sq: power iteration did not converge", estimate);
}

}  // namespace gfbp
