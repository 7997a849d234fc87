#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "stablemc/errors.hpp"
#include "stablemc/quantize.hpp"

using namespace stablemc;

TEST_CASE("quantizer pinned cases") {
    // Branch 0 < u <= delta.
    CHECK(quantize_mixing(0.25, 0.5) == 0.5);
    // j = 2 since 0.6 < 0.7 <= 0.9.
    CHECK(quantize_mixing(0.7, 0.3) == doctest::Approx(0.6).epsilon(1e-15));
    // Boundary u = (j+1) delta goes down: j = 1 since 0.5 < 1.0 <= 1.0.
    CHECK(quantize_mixing(1.0, 0.5) == 0.5);
}

TEST_CASE("quantizer domain errors") {
    CHECK_THROWS_AS(quantize_mixing(0.0, 0.5), DomainError);
    CHECK_THROWS_AS(quantize_mixing(-1.0, 0.5), DomainError);
    CHECK_THROWS_AS(quantize_mixing(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(quantize_mixing(1.0, 1.5), DomainError);
    CHECK_THROWS_AS(quantize_mixing(1.0, -0.1), DomainError);
}

TEST_CASE("quantizer contract over random (u, delta)") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 100000; ++i) {
        // Mix of scales, including u <= delta.
        const double delta = std::ldexp(unit(gen) + 1e-9, -(static_cast<int>(gen() % 4)));
        const double d = std::min(delta, 1.0);
        double u = unit(gen) * 10.0 + 1e-12;
        if (i % 7 == 0) u = unit(gen) * d;  // force the low branch
        if (u <= 0.0) continue;

        const double q = quantize_mixing(u, d);
        REQUIRE(q > 0.0);
        // On-grid: q reconstructs exactly from its own grid index.
        const double j = std::round(q / d);
        REQUIRE(j >= 1.0);
        REQUIRE(q == j * d);
        // u - delta <= q <= max(delta, u).
        REQUIRE(q >= u - d);
        REQUIRE(q <= std::max(d, u));
        // For u > delta the grid point sits strictly below u.
        if (u > d) {
            REQUIRE(q < u);
            REQUIRE((j + 1.0) * d >= u);
        }
    }
}
