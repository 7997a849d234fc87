#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "stablemc/errors.hpp"
#include "stablemc/step_function.hpp"

using namespace stablemc;

namespace {

StepFunction indicator(double from) { return StepFunction(0.0, {from}, {1.0}); }

StepFunction random_step(std::mt19937_64& gen, std::size_t max_jumps) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    const std::size_t jumps = 1 + gen() % max_jumps;
    std::vector<double> t;
    for (std::size_t i = 0; i < jumps; ++i) {
        const double u = unit(gen);
        if (u > 0.0 && u < 1.0) t.push_back(u);
    }
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    std::vector<double> v(t.size());
    for (auto& x : v) x = val(gen);
    return StepFunction(val(gen), std::move(t), std::move(v));
}

// Oracle: dense evaluation of |x - y| (valid because jumps are included).
double sup_norm_oracle(const StepFunction& x, const StepFunction& y) {
    std::vector<double> points{0.0, 1.0};
    for (const double t : x.jump_times()) points.push_back(t);
    for (const double t : y.jump_times()) points.push_back(t);
    for (int i = 0; i <= 997; ++i) points.push_back(i / 997.0);
    double m = 0.0;
    for (const double t : points) m = std::max(m, std::fabs(x(t) - y(t)));
    return m;
}

}  // namespace

TEST_CASE("step function evaluation and validation") {
    const StepFunction x(1.0, {0.25, 0.5}, {2.0, 3.0});
    CHECK(x(0.0) == 1.0);
    CHECK(x(0.2499) == 1.0);
    CHECK(x(0.25) == 2.0);  // right-continuous
    CHECK(x(0.49) == 2.0);
    CHECK(x(0.5) == 3.0);
    CHECK(x(1.0) == 3.0);
    CHECK(x.max_abs() == 3.0);

    CHECK_THROWS_AS(StepFunction(0.0, {0.5, 0.5}, {1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(StepFunction(0.0, {0.0}, {1.0}), DomainError);
    CHECK_THROWS_AS(StepFunction(0.0, {1.1}, {1.0}), DomainError);
    CHECK_THROWS_AS(StepFunction(0.0, {0.5}, {1.0, 2.0}), DomainError);
}

TEST_CASE("compressed drops silent nodes") {
    const StepFunction x(1.0, {0.2, 0.4, 0.6}, {1.0, 2.0, 2.0});
    const StepFunction c = x.compressed();
    CHECK(c.node_count() == 1);
    CHECK(c.jump_times()[0] == 0.4);
    CHECK(sup_norm(x, c) == 0.0);
}

TEST_CASE("time change basics") {
    const TimeChange id;
    CHECK(id(0.3) == 0.3);
    CHECK(id.max_dev() == 0.0);

    const TimeChange lam({0.0, 0.6, 1.0}, {0.0, 0.5, 1.0});
    CHECK(lam(0.6) == 0.5);
    CHECK(lam.inverse_at(0.5) == 0.6);
    CHECK(lam.max_dev() == doctest::Approx(0.1));
    CHECK(lam.inverse()(0.5) == 0.6);

    CHECK_THROWS_AS(TimeChange({0.0, 0.5, 0.4, 1.0}, {0.0, 0.2, 0.3, 1.0}), DomainError);
    CHECK_THROWS_AS(TimeChange({0.1, 1.0}, {0.0, 1.0}), DomainError);
}

TEST_CASE("sup_norm pinned cases and oracle") {
    const StepFunction zero;
    CHECK(sup_norm(indicator(0.5), indicator(0.5)) == 0.0);
    CHECK(sup_norm(indicator(0.5), zero) == 1.0);

    std::mt19937_64 gen(11);
    for (int i = 0; i < 100; ++i) {
        const StepFunction a = random_step(gen, 8);
        const StepFunction b = random_step(gen, 8);
        CHECK(sup_norm(a, b) == doctest::Approx(sup_norm_oracle(a, b)).epsilon(1e-14));
    }
}

TEST_CASE("compose_time_change relabels jump locations") {
    const StepFunction x = indicator(0.5);
    const TimeChange lam({0.0, 0.6, 1.0}, {0.0, 0.5, 1.0});  // lambda(0.6) = 0.5
    const StepFunction moved = compose_time_change(x, lam);
    CHECK(moved(0.59) == 0.0);
    CHECK(moved(0.6) == 1.0);
    CHECK(sup_norm(moved, indicator(0.6)) == 0.0);
}

TEST_CASE("skorohod distance pinned cases") {
    const StepFunction x = indicator(0.5);
    CHECK(skorohod_distance(x, x, 512).upper_bound == 0.0);

    // Shifting the jump by 0.1 costs exactly the time deformation.
    const auto shifted = skorohod_distance(indicator(0.5), indicator(0.6), 512);
    CHECK(shifted.upper_bound == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(shifted.matching_exhausted);

    // Against the zero function no time change helps.
    const StepFunction zero;
    CHECK(skorohod_distance(x, zero, 512).upper_bound == 1.0);
}

TEST_CASE("skorohod distance never exceeds the sup norm") {
    std::mt19937_64 gen(23);
    for (int i = 0; i < 100; ++i) {
        const StepFunction a = random_step(gen, 10);
        const StepFunction b = random_step(gen, 10);
        const auto d = skorohod_distance(a, b, 128);
        CHECK(d.upper_bound <= sup_norm(a, b));
        CHECK(d.upper_bound >= 0.0);
    }
}

TEST_CASE("skorohod distance is symmetric within tolerance") {
    std::mt19937_64 gen(37);
    for (int i = 0; i < 100; ++i) {
        const StepFunction a = random_step(gen, 8);
        const StepFunction b = random_step(gen, 8);
        const double dab = skorohod_distance(a, b, 256).upper_bound;
        const double dba = skorohod_distance(b, a, 256).upper_bound;
        CHECK(std::fabs(dab - dba) <= 2.0 / 256.0);
    }
}

TEST_CASE("skorohod triangle inequality with resolution slack") {
    std::mt19937_64 gen(41);
    const int resolution = 256;
    for (int i = 0; i < 100; ++i) {
        const StepFunction a = random_step(gen, 6);
        const StepFunction b = random_step(gen, 6);
        const StepFunction c = random_step(gen, 6);
        const double dab = skorohod_distance(a, b, resolution).upper_bound;
        const double dbc = skorohod_distance(b, c, resolution).upper_bound;
        const double dac = skorohod_distance(a, c, resolution).upper_bound;
        CHECK(dac <= dab + dbc + 4.0 / resolution);
    }
}

TEST_CASE("matching cap triggers the advisory flag, value still bounded") {
    std::vector<double> t, v;
    for (int i = 1; i <= 40; ++i) {
        t.push_back(i / 41.0);
        v.push_back(i % 2 == 0 ? 1.0 : -1.0);
    }
    const StepFunction busy(0.0, t, v);
    const StepFunction shifted_busy = [&] {
        std::vector<double> t2;
        for (const double s : t) t2.push_back(s + 0.003);
        return StepFunction(0.0, t2, v);
    }();
    const auto d = skorohod_distance(busy, shifted_busy, 512);
    CHECK(d.resolution_advisory);
    CHECK_FALSE(d.matching_exhausted);
    CHECK(d.upper_bound <= sup_norm(busy, shifted_busy));
    CHECK_THROWS_AS(skorohod_distance(busy, busy, 1), DomainError);
}

TEST_CASE("sample_on_grid evaluates pointwise") {
    const StepFunction x = indicator(0.5);
    const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
    const auto vals = sample_on_grid(x, grid);
    CHECK(vals == std::vector<double>{0.0, 0.0, 1.0, 1.0, 1.0});
}
