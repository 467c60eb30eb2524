#include "gfbp/operators.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gfbp/error.hpp"

namespace gfbp {

namespace {

void require_positive_step(double r, const char* what) {
    if (!(r > 0.0)) throw ParameterError(std::string(what) + ": step must be positive");
}

void require_dim(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got) {
        throw ShapeError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                         ", got " + std::to_string(got));
    }
}

void soft_threshold(double t, std::span<const double> x, std::span<double> out) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double mag = std::abs(x[j]) - t;
        out[j] = mag > 0.0 ? std::copysign(mag, x[j]) : 0.0;
    }
}

void scale_into(double s, std::span<const double> x, std::span<double> out) {
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = s * x[j];
}

void rank_one_into(std::span<const double> a, double b, double a_sq, double r,
                   std::span<const double> x, std::span<double> out) {
    const double coef = r * (dot(a, x) - b) / (1.0 + r * a_sq);
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] - coef * a[j];
}

void dist_ball_into(std::span<const double> center, double radius, double r,
                    std::span<const double> x, std::span<double> out) {
    const double d_center = distance(x, center);
    const double dist = d_center - radius;
    if (dist <= 0.0) {
        std::copy(x.begin(), x.end(), out.begin());
        return;
    }
    // P(x) = c + ρ(x − c)/‖x − c‖; move a fraction min(1, r/dist) of the way.
    const double t = std::min(1.0, r / dist);
    const double shrink = radius / d_center;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double proj = center[j] + shrink * (x[j] - center[j]);
        out[j] = x[j] + t * (proj - x[j]);
    }
}

}  // namespace

ResolventOp::ResolventOp(ResolventFn fn, std::string label, std::optional<double> strong_monotonicity)
    : fn_(std::move(fn)), label_(std::move(label)), strong_monotonicity_(strong_monotonicity) {
    if (strong_monotonicity_ && *strong_monotonicity_ < 0.0) {
        throw ParameterError("ResolventOp: strong monotonicity modulus must be non-negative");
    }
}

Vector ResolventOp::operator()(double alpha, std::span<const double> x) const {
    Vector out(x.size());
    fn_(alpha, x, out);
    return out;
}

CocoerciveOp::CocoerciveOp(EvalFn fn, double cocoercivity, std::string label)
    : fn_(std::move(fn)), cocoercivity_(cocoercivity), label_(std::move(label)) {
    if (!(cocoercivity_ > 0.0)) throw ParameterError("CocoerciveOp: cocoercivity must be positive");
}

Vector CocoerciveOp::operator()(std::span<const double> x) const {
    Vector out(x.size());
    fn_(x, out);
    return out;
}

ResolventOp zero_resolvent() {
    return ResolventOp(
        [](double, std::span<const double> x, std::span<double> out) {
            std::copy(x.begin(), x.end(), out.begin());
        },
        "zero");
}

CocoerciveOp zero_cocoercive() {
    return CocoerciveOp([](std::span<const double>, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
    },
                        CocoerciveOp::kZeroOperator, "zero");
}

Vector prox_l1(double r, double w, std::span<const double> x) {
    require_positive_step(r, "prox_l1");
    if (w < 0.0) throw ParameterError("prox_l1: weight must be non-negative");
    Vector out(x.size());
    soft_threshold(r * w, x, out);
    return out;
}

Vector prox_scaled_sq_norm(double c, double r, std::span<const double> x) {
    require_positive_step(r, "prox_scaled_sq_norm");
    if (c < 0.0) throw ParameterError("prox_scaled_sq_norm: coefficient must be non-negative");
    Vector out(x.size());
    scale_into(1.0 / (1.0 + 2.0 * c * r), x, out);
    return out;
}

Vector prox_rank_one_quadratic(std::span<const double> a, double b, double r,
                               std::span<const double> x) {
    require_positive_step(r, "prox_rank_one_quadratic");
    require_dim(a.size(), x.size(), "prox_rank_one_quadratic");
    Vector out(x.size());
    rank_one_into(a, b, squared_norm(a), r, x, out);
    return out;
}

Vector prox_least_squares(const Matrix& a, std::span<const double> b, double r,
                          std::span<const double> x) {
    require_positive_step(r, "prox_least_squares");
    return LeastSquaresProx(a, Vector(b.begin(), b.end()))(r, x);
}

Vector prox_dist_ball(std::span<const double> center, double radius, double r,
                      std::span<const double> x) {
    require_positive_step(r, "prox_dist_ball");
    if (!(radius > 0.0)) throw ParameterError("prox_dist_ball: radius must be positive");
    require_dim(center.size(), x.size(), "prox_dist_ball");
    Vector out(x.size());
    dist_ball_into(center, radius, r, x, out);
    return out;
}

ResolventOp prox_l1_op(double w) {
    if (w < 0.0) throw ParameterError("prox_l1_op: weight must be non-negative");
    return ResolventOp([w](double alpha, std::span<const double> x,
                           std::span<double> out) { soft_threshold(alpha * w, x, out); },
                       "l1");
}

ResolventOp prox_scaled_sq_norm_op(double c) {
    if (c < 0.0) throw ParameterError("prox_scaled_sq_norm_op: coefficient must be non-negative");
    std::optional<double> modulus;
    if (c > 0.0) modulus = 2.0 * c;  // ∂(c‖·‖²) = 2c·I
    return ResolventOp(
        [c](double alpha, std::span<const double> x, std::span<double> out) {
            scale_into(1.0 / (1.0 + 2.0 * c * alpha), x, out);
        },
        "sq_norm", modulus);
}

ResolventOp prox_rank_one_quadratic_op(Vector a, double b, std::string label) {
    const double a_sq = squared_norm(a);
    return ResolventOp(
        [a = std::move(a), b, a_sq](double alpha, std::span<const double> x, std::span<double> out) {
            rank_one_into(a, b, a_sq, alpha, x, out);
        },
        std::move(label));
}

ResolventOp prox_dist_ball_op(Vector center, double radius, std::string label) {
    if (!(radius > 0.0)) throw ParameterError("prox_dist_ball_op: radius must be positive");
    return ResolventOp(
        [center = std::move(center), radius](double alpha, std::span<const double> x,
                                             std::span<double> out) {
            dist_ball_into(center, radius, alpha, x, out);
        },
        std::move(label));
}

LeastSquaresProx::LeastSquaresProx(Matrix a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
    if (b_.size() != a_.rows()) {
        throw ShapeError("prox_least_squares: b has " + std::to_string(b_.size()) +
                         " entries, A has " + std::to_string(a_.rows()) + " rows");
    }
    atb_ = kernels::matvec_transposed(a_, b_);
    const std::size_t small = std::min(a_.rows(), a_.cols());
    if (small > kDirectLimit) {
        mode_ = Mode::Iterative;
    } else if (a_.cols() <= a_.rows()) {
        mode_ = Mode::Columns;
        gram_ = kernels::gram_columns(a_);
    } else {
        mode_ = Mode::Rows;
        gram_ = kernels::gram_rows(a_);
    }
}

Vector LeastSquaresProx::operator()(double r, std::span<const double> x) const {
    require_positive_step(r, "prox_least_squares");
    require_dim(a_.cols(), x.size(), "prox_least_squares");
    Vector rhs(x.begin(), x.end());
    axpy(r, atb_, rhs);

    switch (mode_) {
        case Mode::Columns: {
            Matrix sys = gram_;
            for (double& v : sys.data()) v *= r;
            for (std::size_t i = 0; i < sys.rows(); ++i) sys(i, i) += 1.0;
            return Cholesky(sys).solve(rhs);
        }
        case Mode::Rows: {
            // (I + rAᵀA)⁻¹ = I − rAᵀ(I + rAAᵀ)⁻¹A
            Matrix sys = gram_;
            for (double& v : sys.data()) v *= r;
            for (std::size_t i = 0; i < sys.rows(); ++i) sys(i, i) += 1.0;
            const Vector inner = Cholesky(sys).solve(kernels::matvec(a_, rhs));
            const Vector back = kernels::matvec_transposed(a_, inner);
            axpy(-r, back, rhs);
            return rhs;
        }
        case Mode::Iterative: {
            auto op = [&](std::span<const double> v) {
                Vector out(v.begin(), v.end());
                axpy(r, kernels::matvec_transposed(a_, kernels::matvec(a_, v)), out);
                return out;
            };
            CgResult res = conjugate_gradient(op, rhs, kCgTolerance, 10 * a_.cols() + 100);
            if (!res.converged) {
                throw EstimationError("prox_least_squares: conjugate gradients did not converge",
                                      res.residual_norm);
            }
            return std::move(res.solution);
        }
    }
    return rhs;
}

ResolventOp prox_least_squares_op(Matrix a, Vector b) {
    auto prox = std::make_shared<const LeastSquaresProx>(std::move(a), std::move(b));
    return ResolventOp(
        [prox](double alpha, std::span<const double> x, std::span<double> out) {
            const Vector u = (*prox)(alpha, x);
            std::copy(u.begin(), u.end(), out.begin());
        },
        "least_squares");
}

Vector grad_half_sqdist_box(std::span<const double> lo, std::span<const double> hi,
                            std::span<const double> x) {
    require_dim(lo.size(), x.size(), "grad_half_sqdist_box");
    require_dim(hi.size(), x.size(), "grad_half_sqdist_box");
    Vector out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] - std::clamp(x[j], lo[j], hi[j]);
    return out;
}

Vector grad_half_sq_Ax(const Matrix& a, std::span<const double> x) {
    return kernels::matvec_transposed(a, kernels::matvec(a, x));
}

CocoerciveOp grad_half_sqdist_box_op(Vector lo, Vector hi) {
    if (lo.size() != hi.size()) throw ShapeError("grad_half_sqdist_box_op: bound lengths differ");
    for (std::size_t j = 0; j < lo.size(); ++j) {
        if (lo[j] > hi[j]) throw ParameterError("grad_half_sqdist_box_op: lo > hi");
    }
    return CocoerciveOp(
        [lo = std::move(lo), hi = std::move(hi)](std::span<const double> x, std::span<double> out) {
            for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] - std::clamp(x[j], lo[j], hi[j]);
        },
        1.0, "grad_half_sqdist_box");
}

CocoerciveOp grad_half_sq_Ax_op(Matrix a) {
    const double lipschitz = spectral_norm_sq(a);
    return CocoerciveOp(
        [a = std::move(a)](std::span<const double> x, std::span<double> out) {
            const Vector g = kernels::matvec_transposed(a, kernels::matvec(a, x));
            std::copy(g.begin(), g.end(), out.begin());
        },
        1.0 / lipschitz, "grad_half_sq_Ax");
}

}  // namespace gfbp
