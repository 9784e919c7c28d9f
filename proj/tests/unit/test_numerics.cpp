#include "doctest.h"

#include <cmath>
#include <numbers>

#include "viscolevy/errors.hpp"
#include "viscolevy/numerics.hpp"

using namespace viscolevy;

TEST_CASE("time grid validation") {
    CHECK_THROWS_AS(TimeGrid::uniform(-1.0, 0.1, 10), InvalidArgument);
    CHECK_THROWS_AS(TimeGrid::uniform(0.0, 0.0, 10), InvalidArgument);
    CHECK_THROWS_AS(TimeGrid::uniform(0.0, 0.1, 1), InvalidArgument);
    const auto g = TimeGrid::uniform(1.0, 0.5, 4);
    CHECK(g.back() == 2.5);
    CHECK(g.points() == std::vector<double>{1.0, 1.5, 2.0, 2.5});
}

TEST_CASE("convolution of low-degree inputs is exact") {
    const auto grid = TimeGrid::uniform(0.0, 0.125, 81);
    const auto one = sample(grid, [](double) { return 1.0; });
    const auto t = sample(grid, [](double s) { return s; });
    const auto affine = sample(grid, [](double s) { return 2.0 - 3.0 * s; });

    const auto c11 = convolve_grid(one, one, grid);
    const auto ct1 = convolve_grid(t, one, grid);
    const auto c1a = convolve_grid(one, affine, grid);
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double x = grid[i];
        CHECK(c11[i] == doctest::Approx(x).epsilon(1e-14));
        CHECK(ct1[i] == doctest::Approx(x * x / 2).epsilon(1e-14));
        CHECK(c1a[i] == doctest::Approx(2 * x - 1.5 * x * x).epsilon(1e-13));
    }
}

TEST_CASE("convolution grid mismatches") {
    const auto shifted = TimeGrid::uniform(0.5, 0.1, 5);
    std::vector<double> v(5, 1.0);
    CHECK_THROWS_AS(convolve_grid(v, v, shifted), GridMismatch);
    const auto grid = TimeGrid::uniform(0.0, 0.1, 6);
    CHECK_THROWS_AS(convolve_grid(v, v, grid), GridMismatch);
}

TEST_CASE("trapezoid convolution converges at second order") {
    // e^{-s} * e^{-s}: the integrand e^{-t} is constant in s, so the rule is exact.
    {
        const auto grid = TimeGrid::uniform(0.0, 0.01, 101);
        const auto e = sample(grid, [](double s) { return std::exp(-s); });
        const auto c = convolve_grid(e, e, grid);
        for (std::size_t i = 0; i < grid.count; ++i)
            CHECK(c[i] == doctest::Approx(grid[i] * std::exp(-grid[i])).epsilon(1e-13));
    }
    // e^{-s} * e^{-2s} = e^{-t} - e^{-2t} has a genuine O(h^2) error.
    auto error_at = [](std::size_t n) {
        const auto grid = TimeGrid::uniform(0.0, 1.0 / static_cast<double>(n), n + 1);
        const auto e1 = sample(grid, [](double s) { return std::exp(-s); });
        const auto e2 = sample(grid, [](double s) { return std::exp(-2.0 * s); });
        const auto c = convolve_grid(e1, e2, grid);
        return std::abs(c.back() - (std::exp(-1.0) - std::exp(-2.0)));
    };
    const double e1 = error_at(50), e2 = error_at(100), e3 = error_at(200);
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(std::log2(e2 / e3) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("inverse Laplace test pairs") {
    using C = std::complex<double>;
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        CAPTURE(t);
        const auto step = inverse_laplace([](C s) { return 1.0 / s; }, t);
        CHECK(step.agreed);
        CHECK(step.value == doctest::Approx(1.0).epsilon(1e-6));

        const auto decay = inverse_laplace([](C s) { return 1.0 / (s + 1.0); }, t);
        CHECK(decay.agreed);
        CHECK(decay.value == doctest::Approx(std::exp(-t)).epsilon(1e-6));

        const auto root = inverse_laplace([](C s) { return 1.0 / std::sqrt(s); }, t);
        CHECK(root.agreed);
        CHECK(root.value == doctest::Approx(1.0 / std::sqrt(std::numbers::pi * t)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(talbot_inverse([](C s) { return 1.0 / s; }, 0.0), InvalidArgument);
}

TEST_CASE("Stehfest on a numerically transformed smooth function") {
    auto f = [](double t) { return 1.0 - std::exp(-t) + 0.5 * t * std::exp(-0.5 * t); };
    auto transform = [&](double theta) { return laplace_transform_numeric(f, theta); };
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
        CAPTURE(t);
        CHECK(stehfest_inverse(transform, t) == doctest::Approx(f(t)).epsilon(1e-5));
    }
}

TEST_CASE("half-line quadrature") {
    CHECK(integrate_half_line([](double x) { return std::exp(-x); }) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate_half_line([](double x) { return std::exp(-x) / std::sqrt(x); }) ==
          doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-10));
    CHECK(laplace_transform_numeric([](double t) { return t; }, 2.0) ==
          doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("root isolation stays inside brackets") {
    auto cubic = [](double x) { return (x - 1.0) * (x - 2.5) * (x - 4.0); };
    const std::vector<std::pair<double, double>> brackets{{3.0, 5.0}, {0.0, 2.0}, {2.0, 3.0}};
    const auto roots = isolate_real_roots(cubic, brackets);
    REQUIRE(roots.size() == brackets.size());
    CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(roots[1] == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(roots[2] == doctest::Approx(4.0).epsilon(1e-12));
    const std::vector<std::pair<double, double>> no_change{{1.5, 2.0}};
    CHECK_THROWS_AS(isolate_real_roots(cubic, no_change), StructuralError);
}

TEST_CASE("compensated sum") {
    CompensatedSum s;
    s.add(1.0);
    for (int i = 0; i < 1000; ++i) s.add(1e-17);
    s.add(-1.0);
    CHECK(s.value() == doctest::Approx(1e-14).epsilon(1e-10));
}
