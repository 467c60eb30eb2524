#pragma once

#include <cmath>

namespace gfbp {

template <class Op>
CgResult conjugate_gradient(const Op& op, std::span<const double> rhs, double rel_tol,
                            std::size_t max_iters) {
    const std::size_t n = rhs.size();
    CgResult out;
    out.solution.assign(n, 0.0);
    Vector r(rhs.begin(), rhs.end());
    Vector p = r;
    double rr = squared_norm(r);
    const double target = rel_tol * norm2(rhs);
    if (std::sqrt(rr) <= target) {
        out.converged = true;
        out.residual_norm = std::sqrt(rr);
        return out;
    }
    for (std::size_t it = 1; it <= max_iters; ++it) {
        const Vector ap = op(p);
        const double step = rr / dot(p, ap);
        axpy(step, p, out.solution);
        axpy(-step, ap, r);
        const double rr_next = squared_norm(r);
        out.iterations = it;
        out.residual_norm = std::sqrt(rr_next);
        if (out.residual_norm <= target) {
            out.converged = true;
            return out;
        }
        const double beta = rr_next / rr;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        rr = rr_next;
    }
    return out;
}

}  // namespace gfbp
