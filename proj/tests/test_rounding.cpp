#include <cmath>
#include <limits>
#include <set>

#include "doctest.h"
#include "reprisk/errors.hpp"
#include "reprisk/rounding.hpp"

using namespace reprisk;

TEST_CASE("head interval maps to alpha0/2") {
    const RoundingGrid grid{0.1, 0.05};
    const RoundedEstimate r = round_estimate(0.03, grid);
    CHECK(r.value == doctest::Approx(0.025).epsilon(1e-15));
    CHECK(r.interval_index == -1);
    CHECK(r.raw == 0.03);
}

TEST_CASE("interior intervals follow the midpoint arithmetic") {
    const RoundingGrid grid{0.1, 0.05};
    // raw = 0.26: round(2.1) = 2 -> 0.05 + 0.2 = 0.25
    CHECK(round_estimate(0.26, grid).value == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(round_estimate(0.26, grid).interval_index == 2);
    // raw = 0.31: round(2.6) = 3 -> 0.05 + 0.3 = 0.35
    CHECK(round_estimate(0.31, grid).value == doctest::Approx(0.35).epsilon(1e-12));
    // raw just above alpha0 rounds to index 0
    CHECK(round_estimate(0.051, grid).interval_index == 0);
    CHECK(round_estimate(0.051, grid).value == doctest::Approx(0.05));
}

TEST_CASE("ties round away from zero") {
    // binary-exact grid so the midpoint is hit exactly
    const RoundingGrid grid{0.25, 0.125};
    // (0.5 - 0.125)/0.25 = 1.5 -> 2
    CHECK(round_estimate(0.5, grid).interval_index == 2);
    CHECK(round_estimate(0.5, grid).value == doctest::Approx(0.625).epsilon(1e-15));
}

TEST_CASE("invalid raw estimates are rejected") {
    const RoundingGrid grid{0.1, 0.05};
    CHECK_THROWS_AS(round_estimate(-0.01, grid), InputError);
    CHECK_THROWS_AS(round_estimate(std::numeric_limits<double>::quiet_NaN(), grid), InputError);
    CHECK_THROWS_AS(round_estimate(std::numeric_limits<double>::infinity(), grid), InputError);
    CHECK_THROWS_AS(round_estimate(0.5, RoundingGrid{0.0, 0.0}), InputError);
}

TEST_CASE("raw estimates above one are rounded, not clamped") {
    const RoundingGrid grid{0.1, 0.05};
    const RoundedEstimate r = round_estimate(1.38, grid);
    CHECK(r.interval_index == 13);
    CHECK(r.value == doctest::Approx(0.05 + 1.3).epsilon(1e-12));
}

TEST_CASE("offset bound: dense sweep against the analytic envelope") {
    for (const RoundingGrid grid : {RoundingGrid{1.0 / 7.0, 0.03},
                                    RoundingGrid{1.0 / 7.0, 0.0714},
                                    RoundingGrid{0.1, 0.0},
                                    RoundingGrid{0.1, 0.1}}) {
        CHECK(rounding_offset_bound(grid) == doctest::Approx(grid.alpha / 2));
        double worst_interior = 0.0;
        for (int i = 0; i <= 10000; ++i) {
            const double raw = i * 1e-4;
            const RoundedEstimate r = round_estimate(raw, grid);
            if (r.interval_index == -1) {
                CHECK(std::abs(r.value - raw) <=
                      grid.alpha / 2 + grid.alpha0 / 2 + 1e-12);
            } else {
                const double off = std::abs(r.value - raw);
                CHECK(off <= grid.alpha + 1e-12);
                worst_interior = std::max(worst_interior, off);
            }
        }
        // the alpha/2 bound is attained only when alpha0 = alpha/2
        if (std::abs(grid.alpha0 - grid.alpha / 2) < 1e-3)
            CHECK(worst_interior <= grid.alpha / 2 + 2e-3);
    }
}

TEST_CASE("outputs form a finite set and are interval-constant") {
    const RoundingGrid grid{1.0 / 7.0, 0.04};
    std::set<double> values;
    for (int i = 0; i <= 20000; ++i) {
        const double raw = i * 5e-5;
        values.insert(round_estimate(raw, grid).value);
    }
    // [0, 1] holds the head value plus ceil(1/alpha) + 1 midpoints at most
    CHECK(values.size() <= 9);
    CHECK(values.count(grid.alpha0 / 2) == 1);

    // two raws inside the same interval map to the identical output
    CHECK(round_estimate(0.50, grid).value == round_estimate(0.53, grid).value);
    // sensitivity: nudges that stay inside the interval never change the output
    const double raw = 0.37;
    const RoundedEstimate base = round_estimate(raw, grid);
    for (double eps : {1e-6, 1e-5, 1e-4}) {
        CHECK(round_estimate(raw + eps, grid).value == base.value);
        CHECK(round_estimate(raw - eps, grid).value == base.value);
    }
}
