#pragma once

// Shared numeric kernels: uniform time grids, trapezoid convolution,
// numeric Laplace transform and inversion, bracketed root isolation.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace viscolevy {

/// Uniform grid t_i = start + i * step, i = 0 .. count-1.
struct TimeGrid {
    double start = 0.0;
    double step = 1.0;
    std::size_t count = 2;

    /// Validating constructor: start >= 0, step > 0, count >= 2.
    static TimeGrid uniform(double start, double step, std::size_t count);

    double operator[](std::size_t i) const { return start + static_cast<double>(i) * step; }
    double back() const { return (*this)[count - 1]; }
    std::vector<double> points() const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

/// Samples `fn` at every grid point.
template <typename Fn>
std::vector<double> sample(const TimeGrid& grid, Fn&& fn) {
    std::vector<double> out(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) out[i] = fn(grid[i]);
    return out;
}

/// Trapezoid discretisation of (f * g)(t_i) = int_0^{t_i} f(s) g(t_i - s) ds.
/// Both sample vectors must live on `grid`, which must start at 0.
std::vector<double> convolve_grid(std::span<const double> f, std::span<const double> g,
                                  const TimeGrid& grid);

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + correction_; }

private:
    double sum_ = 0.0;
    double correction_ = 0.0;
};

using LaplaceFn = std::function<std::complex<double>(std::complex<double>)>;
using RealFn = std::function<double(double)>;

struct InversionOptions {
    int talbot_nodes = 24;
    int stehfest_order = 16;
    double rel_tol = 1e-6;
    double abs_tol = 1e-5;
    /// Magnitude of the curve being inverted; scales `abs_tol`.
    double scale = 1.0;
};

struct InversionResult {
    double value = 0.0;  ///< Talbot value (the one callers should use)
    double talbot = 0.0;
    double stehfest = 0.0;
    /// |S_N - S_{N-2}|: Stehfest's own error estimate.
    double stehfest_spread = 0.0;
    bool agreed = false;
};

/// Agreement rule for the Talbot value and its Stehfest cross-check:
///   |T - S| <= rel_tol |T| + abs_tol * scale + 2 spread.
/// The spread term keeps the check meaningful where Stehfest itself is the
/// weaker route (rounding amplification on power laws, truncation on fast
/// exponentials); a Talbot failure still shows as a self-consistent miss.
bool inversion_agrees(double talbot, double stehfest, double spread, double scale,
                      const InversionOptions& options = {});

/// Fixed-Talbot contour inversion (Abate-Valko parameterisation, r = 2M/(5t)).
double talbot_inverse(const LaplaceFn& transform, double t, int nodes = 24);

/// Gaver-Stehfest inversion; `order` must be even. Coefficients and the
/// weighted sum are carried in long double.
double stehfest_inverse(const RealFn& transform, double t, int order = 16);

/// Talbot value cross-checked by Gaver-Stehfest (orders N and N-2). Requires t > 0.
InversionResult inverse_laplace(const LaplaceFn& transform, double t,
                                const InversionOptions& options = {});

/// int_0^inf g(x) dx by exp-sinh quadrature with step halving. Tolerates
/// integrable endpoint singularities at 0.
double integrate_half_line(const RealFn& g, double rel_tol = 1e-13);

/// int_0^inf e^{-theta t} f(t) dt for real theta > 0.
double laplace_transform_numeric(const RealFn& f, double theta);

/// Bisects each bracket [lo, hi] (fn(lo), fn(hi) of opposite sign) until the
/// width is below rel_tol * max(|lo|, |hi|). Throws StructuralError if a
/// bracket has no sign change. Output is sorted ascending.
std::vector<double> isolate_real_roots(const RealFn& fn,
                                       std::span<const std::pair<double, double>> brackets,
                                       double rel_tol = 1e-13);

}  // namespace viscolevy
