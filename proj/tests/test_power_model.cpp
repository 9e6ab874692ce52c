#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "napsched/power_model.hpp"
#include "support.hpp"

using namespace napsched;

TEST_CASE("power: s^alpha + beta") {
    const PowerModel m = testsupport::model(2.0, 1.0, 2.0);
    CHECK_EQ(power(m, 0.0), 1.0);
    CHECK_EQ(power(m, 1.0), 2.0);
    CHECK_EQ(power(m, 2.0), 5.0);
    const PowerModel cubic = testsupport::model(3.0, 0.0, 0.0);
    CHECK_EQ(power(cubic, 2.0), 8.0);
    CHECK_THROWS_AS(power(m, -0.1), std::domain_error);
}

TEST_CASE("model validation rejects out-of-range parameters") {
    CHECK_NOTHROW(testsupport::model(2.0, 0.0, 0.0).validate());
    CHECK_THROWS_AS(testsupport::model(1.5, 1.0, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(testsupport::model(2.0, -1.0, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(testsupport::model(2.0, 1.0, -1.0).validate(), std::invalid_argument);
    PowerModel capped = testsupport::model(2.0, 1.0, 1.0);
    capped.max_speed = 0.0;
    CHECK_THROWS_AS(capped.validate(), std::invalid_argument);
    capped.max_speed = 2.0;
    CHECK_NOTHROW(capped.validate());
}

TEST_CASE("critical speed: (beta/(alpha-1))^(1/alpha)") {
    CHECK_EQ(critical_speed(testsupport::model(2.0, 1.0, 0.0)), 1.0);
    CHECK_EQ(critical_speed(testsupport::model(2.0, 4.0, 0.0)), 2.0);
    CHECK_EQ(critical_speed(testsupport::model(3.0, 2.0, 0.0)), 1.0);
    CHECK_EQ(critical_speed(testsupport::model(2.0, 0.0, 0.0)), 0.0);
    CHECK_EQ(critical_speed(testsupport::model(3.0, 0.5, 0.0)),
             doctest::Approx(std::pow(0.25, 1.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("per-work cost is minimised at the critical speed") {
    const PowerModel m = testsupport::model(2.0, 1.0, 0.0);
    CHECK_EQ(per_work_cost(m, 1.0), 2.0);
    CHECK_EQ(per_work_cost(m, 2.0), 2.5);
    CHECK_THROWS_AS(per_work_cost(m, 0.0), std::domain_error);

    for (const double alpha : {2.0, 2.5, 3.0, 4.0}) {
        for (const double beta : {0.25, 1.0, 3.0}) {
            const PowerModel grid_model = testsupport::model(alpha, beta, 0.0);
            const double s_cr = critical_speed(grid_model);
            const double at_crit = per_work_cost(grid_model, s_cr);
            for (int i = 1; i <= 10000; ++i) {
                const double s = 5.0 * s_cr * i / 10000.0;
                CHECK_GE(per_work_cost(grid_model, s), at_crit - 1e-12);
            }
        }
    }
}

TEST_CASE("value density and profitable speed") {
    CHECK_EQ(value_density(1.9, 0.1), doctest::Approx(19.0).epsilon(1e-12));
    CHECK_EQ(value_density(0.0, 2.0), 0.0);
    CHECK_EQ(value_density(5.0, 0.0), std::numeric_limits<double>::infinity());

    const PowerModel quad = testsupport::model(2.0, 1.0, 0.0);
    CHECK_EQ(profitable_speed(quad, 10.0, 2.0), 5.0);  // density itself at alpha=2
    const PowerModel cubic = testsupport::model(3.0, 1.0, 0.0);
    CHECK_EQ(profitable_speed(cubic, 8.0, 2.0), 2.0);  // sqrt(4)
    CHECK_EQ(profitable_speed(quad, 1.0, 0.0), std::numeric_limits<double>::infinity());
}

TEST_CASE("running below profitable speed pays for itself on the dynamic curve") {
    // At any speed s <= s_up, dynamic energy w * s^(alpha-1) stays <= value.
    const PowerModel m = testsupport::model(3.0, 1.0, 0.0);
    const double work = 2.0, value = 8.0;
    const double s_up = profitable_speed(m, value, work);
    for (int i = 1; i <= 100; ++i) {
        const double s = s_up * i / 100.0;
        CHECK_LE(work * std::pow(s, m.alpha - 1.0), value + 1e-9);
    }
}
