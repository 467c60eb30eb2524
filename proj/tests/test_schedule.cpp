#include <doctest.h>

#include <cmath>
#include <limits>

#include "gfbp/error.hpp"
#include "gfbp/schedule.hpp"

using namespace gfbp;

namespace {

const ScheduleCheck* find_check(const ValidationReport& r, const std::string& prefix) {
    for (const auto& c : r.checks)
        if (c.name.rfind(prefix, 0) == 0) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("default schedule values") {
    const StepSchedule s = make_default(0.9);
    CHECK(s.alpha(1) == 1.0);
    CHECK(s.beta(1) == doctest::Approx(0.9));
    CHECK(s.alpha(1) * s.beta(1) == doctest::Approx(0.9));
    CHECK(s.alpha(10) * s.beta(10) == doctest::Approx(0.9).epsilon(1e-15));

    const StepSchedule h = make_default(0.5);
    CHECK(h.alpha(4) == 0.25);
    CHECK(h.beta(4) == 2.0);
}

TEST_CASE("power schedule formulas") {
    const StepSchedule s(2.0, 0.75, 0.3, 0.75);
    CHECK(s.alpha(16) == doctest::Approx(2.0 / 8.0));
    CHECK(s.beta(16) == doctest::Approx(0.3 * 8.0));
    CHECK_FALSE(s.is_custom());
}

TEST_CASE("schedule parameter errors") {
    CHECK_THROWS_AS(make_default(0.0), ParameterError);
    CHECK_THROWS_AS(make_default(-1.0), ParameterError);
    CHECK_THROWS_AS(StepSchedule(0.0, 1.0, 1.0, 1.0), ParameterError);
    CHECK_THROWS_AS(StepSchedule(1.0, 1.0, 1.0, 1.0).alpha(0), ParameterError);
}

TEST_CASE("validation accepts the standard configuration") {
    const ValidationReport r = validate(make_default(0.9), 1.0);
    CHECK(r.accepted);
    CHECK(r.validated);
    for (const auto& c : r.checks) CHECK(c.passed);
}

TEST_CASE("validation rejects a non-square-summable step") {
    const ValidationReport r = validate(StepSchedule(1.0, 0.4, 0.9, 0.4), 1.0);
    CHECK_FALSE(r.accepted);
    const ScheduleCheck* c = find_check(r, "alpha");
    REQUIRE(c != nullptr);
    CHECK_FALSE(c->passed);
}

TEST_CASE("validation rejects a summable step") {
    CHECK_FALSE(validate(StepSchedule(1.0, 1.5, 0.9, 1.5), 1.0).accepted);
}

TEST_CASE("validation rejects q different from p") {
    const ValidationReport r = validate(StepSchedule(1.0, 1.0, 0.9, 0.5), 1.0);
    CHECK_FALSE(r.accepted);
    const ScheduleCheck* c = find_check(r, "alpha*beta");
    REQUIRE(c != nullptr);
    CHECK_FALSE(c->passed);
}

TEST_CASE("validation checks the product against the cocoercivity bound") {
    CHECK_FALSE(validate(make_default(0.9), 0.5).accepted);
    CHECK(validate(make_default(0.9), 0.91).accepted);
    CHECK(validate(make_default(50.0), std::numeric_limits<double>::infinity()).accepted);
}

TEST_CASE("custom schedules are evaluated but not validated") {
    const StepSchedule s = StepSchedule::custom([](std::size_t k) { return 1.0 / (k + 1.0); },
                                                [](std::size_t k) { return double(k); });
    CHECK(s.is_custom());
    CHECK(s.alpha(1) == 0.5);
    CHECK(s.beta(3) == 3.0);
    const ValidationReport r = validate(s, 1.0);
    CHECK_FALSE(r.validated);
    CHECK_FALSE(r.to_string().empty());
}
