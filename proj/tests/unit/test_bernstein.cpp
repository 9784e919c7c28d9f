#include "doctest.h"

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "viscolevy/bernstein.hpp"
#include "viscolevy/errors.hpp"
#include "viscolevy/materials.hpp"

using namespace viscolevy;

TEST_CASE("canonical form") {
    BernsteinRep rep;
    rep.constant_L = 1.0;
    rep.levy.atoms = {{3.0, 1.0}, {1.0, 0.5}, {3.0, 2.0}, {2.0, 0.0}};
    rep.levy.stable = StableComponent{0.5, 0.0};
    const auto c = canonicalize(rep);
    REQUIRE(c.levy.atoms.size() == 2);
    CHECK(c.levy.atoms[0] == LevyAtom{1.0, 0.5});
    CHECK(c.levy.atoms[1] == LevyAtom{3.0, 3.0});
    CHECK_FALSE(c.levy.stable.has_value());

    auto bad = rep;
    bad.levy.stable = StableComponent{1.0, 1.0};
    CHECK_THROWS_AS(canonicalize(bad), InvalidArgument);
    bad = rep;
    bad.levy.atoms = {{1.0, -1.0}};
    CHECK_THROWS_AS(canonicalize(bad), InvalidArgument);
    bad = rep;
    bad.levy.atoms = {{0.0, 1.0}};
    CHECK_THROWS_AS(canonicalize(bad), InvalidArgument);
    bad = rep;
    bad.drift_K = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(canonicalize(bad), InvalidArgument);
}

TEST_CASE("the zero response is rejected") {
    CHECK_THROWS_AS(Material::analytic(BernsteinRep{}), ZeroMaterial);
    CHECK_THROWS_AS(prony(0.0, 0.0, {{1.0, 0.0}}), ZeroMaterial);
}

TEST_CASE("dictionary impulse responses") {
    CHECK(eval_impulse(spring(4.0), 3.0) == 0.25);
    CHECK(eval_impulse(dashpot(2.0), 3.0) == 6.0);
    CHECK(eval_impulse(maxwell(2.0, 4.0), 2.0) == doctest::Approx(0.5 + 0.5));
    CHECK(eval_impulse(kelvin_voigt(2.0, 1.0), 0.75) ==
          doctest::Approx(0.5 * (1.0 - std::exp(-1.5))).epsilon(1e-15));
    CHECK(eval_impulse(stable_material(0.5, 1.0), 1.0) ==
          doctest::Approx(oracle::stable_half_at_one).epsilon(1e-15));
    CHECK(eval_impulse(kelvin_voigt(1.0, 1.0), 0.0) == 0.0);
    CHECK(eval_impulse(spring(2.0), 0.0) == 0.5);
}

TEST_CASE("derivatives") {
    const auto m = prony(1.0, 2.0, {{3.0, 0.5}});
    CHECK(eval_derivative(m, 0.2) == doctest::Approx(2.0 + 1.5 * std::exp(-0.6)).epsilon(1e-15));
    CHECK(eval_derivative(stable_material(0.5, 1.0), 1.0) ==
          doctest::Approx(oracle::inv_gamma_half).epsilon(1e-15));
    CHECK(std::isinf(eval_derivative(stable_material(0.5, 1.0), 0.0)));
}

TEST_CASE("Laplace transform of f'") {
    CHECK(laplace_fprime(stable_material(0.5, 1.0), 2.0) ==
          doctest::Approx(oracle::inv_sqrt_two).epsilon(1e-15));
    const auto m = prony(0.5, 0.25, {{1.0, 2.0}, {4.0, 0.5}});
    for (double theta : {0.3, 1.0, 7.0}) {
        const double closed = laplace_fprime(m, theta);
        const double by_quadrature = theta * laplace_transform_numeric(
                                                 [&](double t) { return eval_impulse(m, t); },
                                                 theta);
        CHECK(closed == doctest::Approx(by_quadrature).epsilon(1e-11));
        CHECK(laplace_fprime_complex(m, {theta, 0.0}).real() ==
              doctest::Approx(closed).epsilon(1e-15));
    }
    CHECK_THROWS_AS(laplace_fprime(m, -1.0), InvalidArgument);
}

TEST_CASE("composition") {
    const auto s = stable_material(0.5, 1.0);
    const auto c = compose(s, s);
    CHECK(eval_impulse(c, 1.0) == doctest::Approx(oracle::compose_stable_half_at_one).epsilon(1e-14));
    CHECK(check_bernstein_grid(c, TimeGrid::uniform(0.0, 0.01, 500)).ok);
    // Composed materials have no closed-form transform but a numeric one.
    CHECK_FALSE(c.has_closed_form_transform());
    CHECK_THROWS_AS(laplace_fprime(c, 1.0), UnsupportedRepresentation);
    // Stable(1/2) o stable(1/2) is stable(1/4): f = t^{1/4} Gamma(3/2)^{-3/2}.
    const double scale = std::pow(std::tgamma(1.5), -1.5) * std::tgamma(1.25);
    CHECK(laplace_fprime_numeric(c, 2.0) ==
          doctest::Approx(scale * std::pow(2.0, -0.25)).epsilon(1e-8));
    CHECK_THROWS_AS(c.rep(), UnsupportedRepresentation);
}

TEST_CASE("Bernstein grid check") {
    const auto grid = TimeGrid::uniform(0.0, 0.05, 200);
    CHECK(check_bernstein_grid(prony(1.0, 0.5, {{2.0, 1.0}, {0.1, 3.0}}), grid).ok);
    CHECK(check_bernstein_grid(stable_material(0.3, 2.0), grid).ok);
    std::vector<double> convex(200);
    for (std::size_t i = 0; i < convex.size(); ++i) convex[i] = grid[i] * grid[i];
    const auto result = check_bernstein_grid(Material::sampled(grid, convex), grid);
    CHECK_FALSE(result.ok);
    CHECK_FALSE(result.what.empty());
}

TEST_CASE("structural equality") {
    CHECK(prony(1.0, 0.0, {{2.0, 1.0}, {1.0, 1.0}}) == prony(1.0, 0.0, {{1.0, 1.0}, {2.0, 1.0}}));
    CHECK_FALSE(spring(1.0) == spring(2.0));
    CHECK(stable_impulse_coefficient(0.5) == doctest::Approx(1.0 / std::tgamma(1.5)).epsilon(1e-15));
}
