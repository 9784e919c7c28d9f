#include "viscolevy/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "viscolevy/errors.hpp"

namespace viscolevy {

TimeGrid TimeGrid::uniform(double start, double step, std::size_t count) {
    if (!(start >= 0.0) || !std::isfinite(start))
        throw InvalidArgument("time grid start must be finite and >= 0");
    if (!(step > 0.0) || !std::isfinite(step))
        throw InvalidArgument("time grid step must be finite and > 0");
    if (count < 2) throw InvalidArgument("time grid needs at least 2 points");
    return TimeGrid{start, step, count};
}

std::vector<double> TimeGrid::points() const {
    return sample(*this, [](double t) { return t; });
}

std::vector<double> convolve_grid(std::span<const double> f, std::span<const double> g,
                                  const TimeGrid& grid) {
    if (grid.start != 0.0) throw GridMismatch("convolution grid must start at t = 0");
    if (f.size() != grid.count || g.size() != grid.count)
        throw GridMismatch("convolution samples do not match the grid (" +
                           std::to_string(f.size()) + ", " + std::to_string(g.size()) +
                           " vs " + std::to_string(grid.count) + ")");
    const std::size_t n = grid.count;
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        double acc = 0.5 * (f[0] * g[i] + f[i] * g[0]);
        for (std::size_t k = 1; k < i; ++k) acc += f[k] * g[i - k];
        out[i] = grid.step * acc;
    }
    return out;
}

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        correction_ += (sum_ - t) + x;
    else
        correction_ += (x - t) + sum_;
    sum_ = t;
}

double talbot_inverse(const LaplaceFn& transform, double t, int nodes) {
    if (!(t > 0.0)) throw InvalidArgument("inverse Laplace requires t > 0");
    if (nodes < 2) throw InvalidArgument("Talbot inversion needs at least 2 nodes");
    using std::numbers::pi;
    const double m = nodes;
    const double r = 2.0 * m / (5.0 * t);
    double acc = 0.5 * (transform({r, 0.0}) * std::exp(r * t)).real();
    for (int k = 1; k < nodes; ++k) {
        const double phi = k * pi / m;
        const double cot = std::cos(phi) / std::sin(phi);
        const std::complex<double> s = r * phi * std::complex<double>(cot, 1.0);
        const double sigma = phi + (phi * cot - 1.0) * cot;
        acc += (std::exp(t * s) * transform(s) * std::complex<double>(1.0, sigma)).real();
    }
    return r / m * acc;
}

namespace {

std::vector<long double> stehfest_weights(int order) {
    auto factorial = [](int n) {
        long double f = 1.0L;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    const int half = order / 2;
    std::vector<long double> v(order);
    for (int k = 1; k <= order; ++k) {
        long double s = 0.0L;
        for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
            s += std::pow(static_cast<long double>(j), half) * factorial(2 * j) /
                 (factorial(half - j) * factorial(j) * factorial(j - 1) * factorial(k - j) *
                  factorial(2 * j - k));
        }
        v[k - 1] = ((k + half) % 2 == 0) ? s : -s;
    }
    return v;
}

}  // namespace

double stehfest_inverse(const RealFn& transform, double t, int order) {
    if (!(t > 0.0)) throw InvalidArgument("inverse Laplace requires t > 0");
    if (order < 2 || order % 2 != 0) throw InvalidArgument("Stehfest order must be even and >= 2");
    const auto weights = stehfest_weights(order);
    const long double a = std::log(2.0L) / t;
    long double acc = 0.0L;
    for (int k = 1; k <= order; ++k)
        acc += weights[k - 1] * static_cast<long double>(transform(static_cast<double>(k * a)));
    return static_cast<double>(a * acc);
}

bool inversion_agrees(double talbot, double stehfest, double spread, double scale,
                      const InversionOptions& options) {
    if (!std::isfinite(talbot) || !std::isfinite(stehfest)) return false;
    return std::abs(talbot - stehfest) <=
           options.rel_tol * std::abs(talbot) + options.abs_tol * std::abs(scale) + 2.0 * spread;
}

InversionResult inverse_laplace(const LaplaceFn& transform, double t,
                                const InversionOptions& options) {
    InversionResult result;
    result.talbot = talbot_inverse(transform, t, options.talbot_nodes);
    const RealFn real_axis = [&](double theta) { return transform({theta, 0.0}).real(); };
    result.stehfest = stehfest_inverse(real_axis, t, options.stehfest_order);
    result.stehfest_spread =
        std::abs(result.stehfest - stehfest_inverse(real_axis, t, options.stehfest_order - 2));
    result.value = result.talbot;
    result.agreed =
        inversion_agrees(result.talbot, result.stehfest, result.stehfest_spread, options.scale,
                         options);
    return result;
}

double integrate_half_line(const RealFn& g, double rel_tol) {
    using std::numbers::pi;
    constexpr double kSpan = 6.0;
    auto term = [&](double s) {
        const double x = std::exp(0.5 * pi * std::sinh(s));
        if (x == 0.0 || !std::isfinite(x)) return 0.0;
        const double w = x * 0.5 * pi * std::cosh(s);
        const double v = g(x) * w;
        return std::isfinite(v) ? v : 0.0;
    };
    double h = 0.5;
    CompensatedSum sum;
    for (double s = -kSpan; s <= kSpan + 1e-12; s += h) sum.add(term(s));
    double estimate = h * sum.value();
    for (int level = 0; level < 10; ++level) {
        // add the midpoints of the current level
        CompensatedSum mid;
        for (double s = -kSpan + 0.5 * h; s < kSpan; s += h) mid.add(term(s));
        sum.add(mid.value());
        h *= 0.5;
        const double next = h * sum.value();
        if (level >= 2 && std::abs(next - estimate) <= rel_tol * std::abs(next)) return next;
        estimate = next;
    }
    return estimate;
}

double laplace_transform_numeric(const RealFn& f, double theta) {
    if (!(theta > 0.0)) throw InvalidArgument("numeric Laplace transform needs theta > 0");
    // substitute t = u / theta so the decay scale is O(1)
    const double integral =
        integrate_half_line([&](double u) { return std::exp(-u) * f(u / theta); });
    return integral / theta;
}

std::vector<double> isolate_real_roots(const RealFn& fn,
                                       std::span<const std::pair<double, double>> brackets,
                                       double rel_tol) {
    std::vector<double> roots;
    roots.reserve(brackets.size());
    for (auto [lo, hi] : brackets) {
        if (!(lo < hi)) throw StructuralError("root bracket is empty or reversed");
        double flo = fn(lo);
        const double fhi = fn(hi);
        if (flo == 0.0) {
            roots.push_back(lo);
            continue;
        }
        if (fhi == 0.0) {
            roots.push_back(hi);
            continue;
        }
        if ((flo < 0.0) == (fhi < 0.0))
            throw StructuralError("no sign change in bracket [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
        while (hi - lo > rel_tol * std::max(std::abs(lo), std::abs(hi))) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double fmid = fn(mid);
            if (fmid == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fmid < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace viscolevy
