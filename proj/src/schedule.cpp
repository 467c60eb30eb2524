#include "gfbp/schedule.hpp"

#include <cmath>
#include <sstream>

#include "gfbp/error.hpp"

namespace gfbp {

StepSchedule::StepSchedule(double a, double p, double xi, double q) : a_(a), p_(p), xi_(xi), q_(q) {
    if (!(a > 0.0)) throw ParameterError("schedule: a must be positive");
    if (!(xi > 0.0)) throw ParameterError("schedule: xi must be positive");
    if (!std::isfinite(p) || !std::isfinite(q)) throw ParameterError("schedule: exponents must be finite");
}

StepSchedule StepSchedule::custom(std::function<double(std::size_t)> alpha,
                                  std::function<double(std::size_t)> beta) {
    if (!alpha || !beta) throw ParameterError("schedule: custom schedule needs both sequences");
    StepSchedule s;
    s.alpha_fn_ = std::move(alpha);
    s.beta_fn_ = std::move(beta);
    return s;
}

double StepSchedule::alpha(std::size_t k) const {
    if (k == 0) throw ParameterError("schedule: k starts at 1");
    if (alpha_fn_) return alpha_fn_(k);
    const auto kk = static_cast<double>(k);
    return p_ == 1.0 ? a_ / kk : a_ / std::pow(kk, p_);
}

double StepSchedule::beta(std::size_t k) const {
    if (k == 0) throw ParameterError("schedule: k starts at 1");
    if (beta_fn_) return beta_fn_(k);
    const auto kk = static_cast<double>(k);
    return q_ == 1.0 ? xi_ * kk : xi_ * std::pow(kk, q_);
}

StepSchedule make_default(double xi) { return StepSchedule(1.0, 1.0, xi, 1.0); }

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    os << (validated ? (accepted ? "accepted" : "rejected") : "unvalidated") << '\n';
    for (const auto& c : checks) {
        os << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name;
        if (!c.detail.empty()) os << ": " << c.detail;
        os << '\n';
    }
    return os.str();
}

ValidationReport validate(const StepSchedule& s, double mu_bound) {
    ValidationReport report;
    if (s.is_custom()) {
        report.validated = false;
        report.accepted = false;
        report.checks.push_back({"power family", false, "custom sequences cannot be checked"});
        return report;
    }

    std::ostringstream detail;
    detail << "p = " << s.p();
    report.checks.push_back(
        {"alpha in l2 minus l1 (1/2 < p <= 1)", s.p() > 0.5 && s.p() <= 1.0, detail.str()});

    detail.str("");
    detail << "p = " << s.p() << ", q = " << s.q();
    report.checks.push_back({"alpha*beta has a positive finite limit (q == p)", s.q() == s.p(),
                             detail.str()});

    const double product = s.a() * s.xi();
    detail.str("");
    detail << "a*xi = " << product << ", bound = " << mu_bound;
    report.checks.push_back({"limit of alpha*beta below cocoercivity (a*xi < mu)",
                             std::isinf(mu_bound) || product < mu_bound, detail.str()});

    report.accepted = true;
    for (const auto& c : report.checks) report.accepted = report.accepted && c.passed;
    return report;
}

}  // namespace gfbp
