#include <doctest.h>

#include <json.hpp>

#include "gfbp/operators.hpp"
#include "gfbp/verify.hpp"

using namespace gfbp;

TEST_CASE("library passes every self check") {
    const auto results = verify::run_all(verify::ProxSuite::library());
    CHECK(results.size() >= 12);
    for (const auto& r : results) {
        CAPTURE(r.name);
        CAPTURE(r.worst);
        CHECK(r.passed);
        CHECK(r.samples > 0);
    }
}

TEST_CASE("a perturbed soft threshold fails the grid check") {
    verify::ProxSuite suite = verify::ProxSuite::library();
    suite.l1 = [](double r, double w, std::span<const double> x) { return prox_l1(1.1 * r, w, x); };
    CHECK_FALSE(verify::check_prox_l1_grid(suite, 2024).passed);
    CHECK(verify::check_prox_scaled_sq_norm_grid(suite, 2024).passed);
}

TEST_CASE("a perturbed quadratic prox fails both the grid and the identity checks") {
    verify::ProxSuite suite = verify::ProxSuite::library();
    suite.scaled_sq_norm = [](double c, double r, std::span<const double> x) {
        return prox_scaled_sq_norm(c * 1.05, r, x);
    };
    CHECK_FALSE(verify::check_prox_scaled_sq_norm_grid(suite, 2024).passed);
    CHECK_FALSE(verify::check_least_squares_identity(suite, 2024).passed);
}

TEST_CASE("a perturbed gradient fails the finite-difference check") {
    verify::ProxSuite suite = verify::ProxSuite::library();
    suite.grad_ax = [](const Matrix& a, std::span<const double> x) {
        Vector g = grad_half_sq_Ax(a, x);
        g[0] += 1e-3;
        return g;
    };
    CHECK_FALSE(verify::check_grad_ax_fd(suite, 2024).passed);
}

TEST_CASE("an expansive prox fails firm nonexpansiveness") {
    verify::ProxSuite suite = verify::ProxSuite::library();
    suite.dist_ball = [](std::span<const double> c, double rho, double r, std::span<const double> x) {
        Vector p = prox_dist_ball(c, rho, r, x);
        for (double& v : p) v *= 1.5;
        return p;
    };
    CHECK_FALSE(verify::check_firm_nonexpansive(suite, 2024).passed);
}

TEST_CASE("individual structural checks") {
    CHECK(verify::check_cocoercivity(1).passed);
    CHECK(verify::check_backward_composition(1).passed);
    CHECK(verify::check_split_objective_identity(1).passed);
}

TEST_CASE("reports") {
    const auto results = verify::run_all(verify::ProxSuite::library(), 3);
    const auto j = nlohmann::json::parse(verify::to_json(results));
    CHECK(j.at("passed").get<bool>());
    CHECK(j.at("checks").size() == results.size());
    CHECK(j.at("checks")[0].contains("worst"));
    CHECK(verify::format_table(results).find("pass") != std::string::npos);
}
