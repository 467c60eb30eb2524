#pragma once

// Operator abstractions for the splitting iteration and the closed-form
// proximal maps and gradients used by the experiment problems.
//
// A maximally monotone block is only ever touched through its resolvent
// (α, x) ↦ (I + αA)⁻¹x; for A = ∂f this is prox_{αf}. A single-valued
// block (the smooth term or the penalty) is an evaluation map plus its
// cocoercivity parameter.

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "gfbp/linalg.hpp"

namespace gfbp {

/// Writes J_{αA}(x) into out. out and x never alias.
using ResolventFn = std::function<void(double alpha, std::span<const double> x, std::span<double> out)>;
/// Writes T(x) into out. out and x never alias.
using EvalFn = std::function<void(std::span<const double> x, std::span<double> out)>;

class ResolventOp {
public:
    ResolventOp(ResolventFn fn, std::string label,
                std::optional<double> strong_monotonicity = std::nullopt);

    void apply(double alpha, std::span<const double> x, std::span<double> out) const {
        fn_(alpha, x, out);
    }
    Vector operator()(double alpha, std::span<const double> x) const;

    const std::string& label() const noexcept { return label_; }
    /// Modulus γ with ⟨x−y, u−v⟩ ≥ γ‖x−y‖² on the graph, when known.
    std::optional<double> strong_monotonicity() const noexcept { return strong_monotonicity_; }

private:
    ResolventFn fn_;
    std::string label_;
    std::optional<double> strong_monotonicity_;
};

class CocoerciveOp {
public:
    static constexpr double kZeroOperator = std::numeric_limits<double>::infinity();

    /// cocoercivity must be > 0; kZeroOperator marks the identically-zero map.
    CocoerciveOp(EvalFn fn, double cocoercivity, std::string label);

    void apply(std::span<const double> x, std::span<double> out) const { fn_(x, out); }
    Vector operator()(std::span<const double> x) const;

    double cocoercivity() const noexcept { return cocoercivity_; }
    bool is_zero() const noexcept { return cocoercivity_ == kZeroOperator; }
    const std::string& label() const noexcept { return label_; }

private:
    EvalFn fn_;
    double cocoercivity_;
    std::string label_;
};

ResolventOp zero_resolvent();
CocoerciveOp zero_cocoercive();

// ---------------------------------------------------------------------------
// Closed-form proximal maps. Each free function computes the point directly;
// the *_op factories wrap the same computation as a ResolventOp where the
// resolvent step α plays the role of r.

/// prox of r·w‖·‖₁: componentwise soft threshold at r·w.
Vector prox_l1(double r, double w, std::span<const double> x);
/// prox of r·c‖·‖²: x / (1 + 2cr).
Vector prox_scaled_sq_norm(double c, double r, std::span<const double> x);
/// prox of r·½(aᵀu − b)² via Sherman–Morrison.
Vector prox_rank_one_quadratic(std::span<const double> a, double b, double r,
                               std::span<const double> x);
/// prox of r·½‖Au − b‖²: the solution of (I + rAᵀA)u = x + rAᵀb.
Vector prox_least_squares(const Matrix& a, std::span<const double> b, double r,
                          std::span<const double> x);
/// prox of r·dist(·, B(center, radius)).
Vector prox_dist_ball(std::span<const double> center, double radius, double r,
                      std::span<const double> x);

ResolventOp prox_l1_op(double w);
ResolventOp prox_scaled_sq_norm_op(double c);
ResolventOp prox_rank_one_quadratic_op(Vector a, double b, std::string label);
ResolventOp prox_dist_ball_op(Vector center, double radius, std::string label);

/// Cached least-squares resolvent. The Gram matrix of the smaller side of A is
/// formed once; each call factors I + r·Gram (Cholesky) or, when both sides
/// exceed kDirectLimit, runs conjugate gradients on I + rAᵀA.
class LeastSquaresProx {
public:
    static constexpr std::size_t kDirectLimit = 2000;
    static constexpr double kCgTolerance = 1e-10;

    LeastSquaresProx(Matrix a, Vector b);
    Vector operator()(double r, std::span<const double> x) const;
    std::size_t dim() const noexcept { return a_.cols(); }
    bool uses_direct_solve() const noexcept { return mode_ != Mode::Iterative; }

private:
    enum class Mode { Columns, Rows, Iterative };
    Matrix a_;
    Vector b_;
    Vector atb_;
    Matrix gram_;
    Mode mode_;
};

ResolventOp prox_least_squares_op(Matrix a, Vector b);

// ---------------------------------------------------------------------------
// Gradients of the constraint functions.

/// ∇ of ½dist²(·, [lo, hi]): x − clamp(x, lo, hi).
Vector grad_half_sqdist_box(std::span<const double> lo, std::span<const double> hi,
                            std::span<const double> x);
/// ∇ of ½‖A·‖²: Aᵀ(Ax).
Vector grad_half_sq_Ax(const Matrix& a, std::span<const double> x);

/// Cocoercivity 1 (firmly nonexpansive).
CocoerciveOp grad_half_sqdist_box_op(Vector lo, Vector hi);
/// Cocoercivity 1/‖A‖², spectral norm estimated by power iteration.
CocoerciveOp grad_half_sq_Ax_op(Matrix a);

}  // namespace gfbp
