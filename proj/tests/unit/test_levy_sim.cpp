#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "viscolevy/errors.hpp"
#include "viscolevy/levy_sim.hpp"
#include "viscolevy/materials.hpp"

using namespace viscolevy;

namespace {

bool within_sigmas(const McEstimate& e, double k) {
    return std::abs(e.estimate - e.analytic) <= k * e.stderr_;
}

}  // namespace

TEST_CASE("materials and subordinators correspond field by field") {
    const auto m = prony(0.5, 2.0, {{3.0, 1.5}});
    const auto spec = subordinator_from_material(m);
    CHECK(spec.start == 0.5);
    CHECK(spec.drift == 2.0);
    CHECK(spec.levy.atoms == std::vector<LevyAtom>{{3.0, 1.5}});
    CHECK(material_from_subordinator(spec) == m);
    CHECK(material_from_subordinator(subordinator_from_material(stable_material(0.5, 2.0))) ==
          stable_material(0.5, 2.0));
    CHECK_THROWS_AS(subordinator_from_material(compose(spring(1.0), dashpot(1.0))),
                    UnsupportedRepresentation);
    // phi = f - L on the Laplace side.
    CHECK(laplace_exponent(spec, 1.0) == doctest::Approx(2.0 + 1.5 * (1 - std::exp(-3.0))));
}

TEST_CASE("series of materials adds independent subordinators") {
    const auto a = prony(0.0, 1.0, {{2.0, 0.5}});
    const auto b = stable_material(0.5, 1.0);
    const auto s = series(a, b);
    for (double lambda : {0.1, 1.0, 4.0})
        CHECK(laplace_exponent(subordinator_from_material(s), lambda) ==
              doctest::Approx(laplace_exponent(subordinator_from_material(a), lambda) +
                              laplace_exponent(subordinator_from_material(b), lambda))
                  .epsilon(1e-14));
}

TEST_CASE("drift-only paths are deterministic") {
    SubordinatorSpec spec{1.0, 2.0, {}};
    const auto path = sample_path(spec, 3.0, 11, {1, 12});
    CHECK(path.jumps.empty());
    CHECK(path.times.front() == 0.0);
    CHECK(path.horizon() == 3.0);
    for (std::size_t i = 0; i < path.times.size(); ++i)
        CHECK(path.values(0, static_cast<Eigen::Index>(i)) ==
              doctest::Approx(1.0 + 2.0 * path.times[i]).epsilon(1e-15));
    CHECK(path.value_at(1.1)(0) == doctest::Approx(1.0 + 2.0 * 1.0).epsilon(1e-15));

    const auto mc = mc_laplace_check(spec, 0.7, 2.0, 100, 1);
    CHECK(mc.stderr_ == 0.0);
    CHECK(mc.estimate == doctest::Approx(std::exp(-2.0 * 1.4)).epsilon(1e-15));
    CHECK(mc.analytic == doctest::Approx(std::exp(-2.0 * 1.4)).epsilon(1e-15));
    CHECK_THROWS_AS(mc_laplace_check(spec, 0.7, 2.0, 99, 1), InvalidArgument);
    CHECK_THROWS_AS(sample_path(spec, 0.0, 1), InvalidArgument);
}

TEST_CASE("compound Poisson jump counts") {
    // Jumps of size 2 at intensity 3 over tau = 10: N ~ Poisson(30).
    SubordinatorSpec spec{0.0, 0.0, {{{2.0, 3.0}}, std::nullopt}};
    const auto path = sample_path(spec, 10.0, 2024);
    CHECK(std::abs(static_cast<double>(path.jumps.size()) - 30.0) <= 4.0 * std::sqrt(30.0));
    for (const auto& j : path.jumps) CHECK(j.size(0) == 2.0);
    CHECK(path.values(0, path.values.cols() - 1) == 2.0 * static_cast<double>(path.jumps.size()));

    double total = 0.0;
    const int seeds = 400;
    for (int s = 0; s < seeds; ++s) total += static_cast<double>(sample_path(spec, 10.0, s).jumps.size());
    CHECK(std::abs(total / seeds - 30.0) <= 4.0 * std::sqrt(30.0 / seeds));
}

TEST_CASE("jump measure sums") {
    // E sum g(dX) over [0, tau] = tau sum w g(x) for g in {1, x, x^2}.
    SubordinatorSpec spec{0.0, 0.0, {{{0.5, 2.0}, {3.0, 0.25}}, std::nullopt}};
    const double tau = 2.0;
    const int n = 4000;
    double s0 = 0, s1 = 0, s2 = 0, q0 = 0, q1 = 0, q2 = 0;
    for (int k = 0; k < n; ++k) {
        double a0 = 0, a1 = 0, a2 = 0;
        for (const auto& j : sample_path(spec, tau, 1000 + k, {1, 4}).jumps) {
            const double x = j.size(0);
            a0 += 1;
            a1 += x;
            a2 += x * x;
        }
        s0 += a0, s1 += a1, s2 += a2;
        q0 += a0 * a0, q1 += a1 * a1, q2 += a2 * a2;
    }
    auto check = [&](double sum, double sq, double expected) {
        const double mean = sum / n;
        const double se = std::sqrt((sq / n - mean * mean) / n);
        CHECK(std::abs(mean - expected) <= 4.0 * se);
    };
    check(s0, q0, tau * (2.0 + 0.25));
    check(s1, q1, tau * (2.0 * 0.5 + 0.25 * 3.0));
    check(s2, q2, tau * (2.0 * 0.25 + 0.25 * 9.0));
}

TEST_CASE("positive stable sampler") {
    // alpha = 1/2: P(S <= s) = erfc(1 / (2 sqrt s)).
    std::mt19937_64 rng(77);
    const std::size_t n = 4000;
    std::vector<double> xs(n);
    for (auto& x : xs) x = sample_positive_stable(0.5, rng);
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double cdf = std::erfc(1.0 / (2.0 * std::sqrt(xs[i])));
        d = std::max({d, std::abs(cdf - static_cast<double>(i) / n),
                      std::abs(cdf - static_cast<double>(i + 1) / n)});
    }
    // Kolmogorov-Smirnov critical value at the 1% level.
    CHECK(d <= 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("Monte Carlo Laplace checks") {
    SubordinatorSpec poisson{0.0, 0.0, {{{1.0, 1.0}}, std::nullopt}};
    const auto p = mc_laplace_check(poisson, 1.0, 1.0, 20000, 5);
    CHECK(p.analytic == doctest::Approx(oracle::unit_poisson_laplace).epsilon(1e-14));
    CHECK(within_sigmas(p, 4.0));

    // Stable(1/2) with c = Gamma(3/2) has phi(lambda) = sqrt(lambda).
    SubordinatorSpec stable{0.0, 0.0, {{}, StableComponent{0.5, oracle::gamma_three_halves}}};
    const auto s = mc_laplace_check(stable, 4.0, 1.0, 20000, 6);
    CHECK(s.analytic == doctest::Approx(oracle::exp_minus_two).epsilon(1e-14));
    CHECK(within_sigmas(s, 4.0));

    // Everything at once, including a drift and a nonzero start.
    SubordinatorSpec mixed{0.3, 0.5, {{{0.5, 1.0}, {2.0, 0.5}}, StableComponent{0.3, 1.0}}};
    CHECK(within_sigmas(mc_laplace_check(mixed, 0.8, 1.5, 20000, 8), 4.0));
}

TEST_CASE("results do not depend on the worker count") {
    SubordinatorSpec spec{0.0, 0.2, {{{1.0, 2.0}}, StableComponent{0.6, 0.5}}};
    const auto one = mc_laplace_check(spec, 1.0, 1.0, 5000, 42, {1, 64});
    const auto four = mc_laplace_check(spec, 1.0, 1.0, 5000, 42, {4, 64});
    CHECK(one.estimate == four.estimate);
    CHECK(one.stderr_ == four.stderr_);

    PaisCharacteristics c;
    c.start = Eigen::Vector2d(1.0, 0.0);
    c.sigma = Eigen::Matrix2d::Identity();
    c.jump_atoms = {{Eigen::Vector2d(1.0, 2.0), 0.5}};
    const std::vector<double> times{0.0, 0.5, 1.0};
    const auto e1 = estimate_material(c, times, 9000, 3, 4, ContinuousTerm::terminal_square, 1);
    const auto e3 = estimate_material(c, times, 9000, 3, 4, ContinuousTerm::terminal_square, 3);
    for (std::size_t g = 0; g < times.size(); ++g) {
        CHECK(e1.mean[g] == e3.mean[g]);
        CHECK(e1.stderr_[g] == e3.stderr_[g]);
    }
}

TEST_CASE("material of process characteristics") {
    PaisCharacteristics c;
    c.start = Eigen::VectorXd::Constant(1, 2.0);
    c.sigma = Eigen::MatrixXd::Constant(1, 1, 3.0);
    c.jump_atoms = {{Eigen::VectorXd::Constant(1, 2.0), 5.0}};
    const auto m = material_from_characteristics(c);
    CHECK(m.const_K(0, 0) == 4.0);
    CHECK(m.drift_L(0, 0) == 3.0);
    REQUIRE(m.spectral_atoms.size() == 1);
    CHECK(m.spectral_atoms[0].rate == 4.0);
    CHECK(m.spectral_atoms[0].J(0, 0) == 5.0);

    // Jumps of equal length share one rate; their shapes add.
    PaisCharacteristics d;
    d.start = Eigen::Vector2d::Zero();
    d.sigma = Eigen::Matrix2d::Zero();
    d.jump_atoms = {{Eigen::Vector2d(1.0, 0.0), 2.0},
                    {Eigen::Vector2d(0.0, -1.0), 3.0},
                    {Eigen::Vector2d(1.0, 1.0), 4.0}};
    const auto md = material_from_characteristics(d);
    REQUIRE(md.spectral_atoms.size() == 2);
    CHECK(md.spectral_atoms[0].rate == 1.0);
    CHECK(md.spectral_atoms[0].J == Eigen::Matrix2d{{2.0, 0.0}, {0.0, 3.0}});
    CHECK(md.spectral_atoms[1].rate == 2.0);
    CHECK(md.spectral_atoms[1].J == Eigen::Matrix2d{{2.0, 2.0}, {2.0, 2.0}});

    // Round trip through a scalar atoms-only material.
    const auto scalar = prony(4.0, 0.5, {{0.25, 1.0}, {9.0, 2.0}});
    const auto back = material_from_characteristics(characteristics_from_material(scalar));
    const auto rep = scalar_reduction(back);
    CHECK(rep.constant_L == 4.0);
    CHECK(rep.drift_K == 0.5);
    REQUIRE(rep.levy.atoms.size() == 2);
    CHECK(rep.levy.atoms[0].rate == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(rep.levy.atoms[1].weight == 2.0);
    CHECK(characteristics_from_material(scalar).start(0) == 2.0);
    CHECK_THROWS_AS(characteristics_from_material(stable_material(0.5, 1.0)),
                    UnsupportedRepresentation);

    PaisCharacteristics bad = d;
    bad.jump_atoms.push_back({Eigen::Vector2d::Zero(), 1.0});
    CHECK_THROWS_AS(validate(bad), InvalidArgument);
    bad = d;
    bad.sigma(0, 0) = -1.0;
    CHECK_THROWS_AS(validate(bad), InvalidArgument);
}

TEST_CASE("path estimator recovers the material") {
    PaisCharacteristics c;
    c.start = Eigen::Vector2d(1.0, -0.5);
    c.sigma = Eigen::Matrix2d{{1.0, 0.3}, {0.3, 0.5}};
    c.jump_atoms = {{Eigen::Vector2d(1.0, 1.0), 1.5}, {Eigen::Vector2d(0.5, 0.0), 0.5}};
    const auto exact = material_from_characteristics(c);
    const std::vector<double> times{0.0, 0.25, 1.0, 3.0};
    for (auto term : {ContinuousTerm::terminal_square, ContinuousTerm::realized_variance}) {
        const auto est = estimate_material(c, times, 20000, 9, 8, term);
        CHECK(est.paths == 20000);
        for (std::size_t g = 0; g < times.size(); ++g) {
            const Eigen::MatrixXd f = eval_impulse(exact, times[g]);
            for (Eigen::Index i = 0; i < 2; ++i)
                for (Eigen::Index j = 0; j < 2; ++j) {
                    CAPTURE(g);
                    CHECK(std::abs(est.mean[g](i, j) - f(i, j)) <=
                          4.0 * est.stderr_[g](i, j) + 1e-12);
                }
        }
    }
}

TEST_CASE("Gaussian part covariance") {
    PaisCharacteristics c;
    c.start = Eigen::Vector3d::Zero();
    c.sigma = Eigen::Matrix3d::Identity();
    std::vector<Path> paths;
    for (std::uint64_t s = 0; s < 4000; ++s) paths.push_back(sample_pais_path(c, 1.0, 4, s));
    const std::vector<double> times{1.0};
    const auto est = estimate_material_from_paths(paths, times);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
            CHECK(std::abs(est.mean[0](i, j) - (i == j ? 1.0 : 0.0)) <= 4.0 * est.stderr_[0](i, j));
    CHECK(paths.front().values.col(0).isZero());
    CHECK(paths.front().horizon() == 1.0);
}

TEST_CASE("estimator input errors") {
    PaisCharacteristics c;
    c.start = Eigen::VectorXd::Constant(1, 1.0);
    c.sigma = Eigen::MatrixXd::Zero(1, 1);
    c.jump_atoms = {{Eigen::VectorXd::Constant(1, 1.0), 1.0}};
    std::vector<Path> paths{sample_pais_path(c, 1.0, 2, 1)};
    const std::vector<double> times{0.5};
    paths[0].has_jump_records = false;
    CHECK_THROWS_AS(estimate_material_from_paths(paths, times), MissingJumpRecords);
    paths[0] = sample_pais_path(c, 2.0, 2, 1);
    CHECK_THROWS_AS(estimate_material_from_paths(paths, times), InvalidArgument);
    // Scalar subordinator paths carry jump records and feed the same estimator.
    const std::vector<Path> sub{sample_path({1.0, 0.0, {{{4.0, 1.0}}, std::nullopt}}, 1.0, 3)};
    CHECK(estimate_material_from_paths(sub, times).mean[0](0, 0) >= 1.0);
}
