#pragma once

// Creep <-> relaxation duality. With h(theta) the Laplace transform of f',
// the relaxation function satisfies r-hat'(theta) = 1 / h(theta), and the
// conjugate material (primitive of r) has transform 1 / (theta h(theta)).
// For Prony-type materials this is a rational function whose poles and
// zeros interlace on the negative real axis, so the conjugate is found
// exactly by bracketed bisection and residues.

#include <string>
#include <vector>

#include "viscolevy/bernstein.hpp"
#include "viscolevy/matrix_material.hpp"
#include "viscolevy/numerics.hpp"

namespace viscolevy {

struct StieltjesAtom {
    double location = 0.0;
    double mass = 0.0;

    friend bool operator==(const StieltjesAtom&, const StieltjesAtom&) = default;
};

/// h(theta) = a + mu({0}) / theta + sum_j mass_j / (theta + location_j).
struct StieltjesRep {
    double a = 0.0;
    double mu_at_zero = 0.0;
    std::vector<StieltjesAtom> mu_atoms;

    double operator()(double theta) const;

    friend bool operator==(const StieltjesRep&, const StieltjesRep&) = default;
};

/// r(t) = alpha + beta delta_0 + sum_j mass_j e^{-rate_j t} [+ tail].
/// `rho.atoms` holds (rate, mass) pairs. A stable-type tail (only produced
/// for pure stable inputs) contributes scale * t^{-alpha} / Gamma(1 - alpha).
struct RelaxationRep {
    double alpha = 0.0;
    double beta = 0.0;
    LevyMeasure rho;

    /// Regular part alpha + int e^{-tx} d rho(x) for t > 0 (t = 0 gives r(0+)).
    double regular(double t) const;
};

/// (a, mu) = (L, K delta_0 + x nu(dx)). Rejects a stable component.
StieltjesRep stieltjes_of(const BernsteinRep& rep);

/// Exact conjugate of an analytic atoms-only material:
/// f1 * f2 = t^2 / 2. Involutive up to rounding.
Material conjugate_exact(const Material& material);

/// c t^alpha / Gamma(1 + alpha)  ->  (1/c) t^{1-alpha} / Gamma(2 - alpha).
Material conjugate_stable(const Material& material);

/// Dispatches to conjugate_stable or conjugate_exact.
Material conjugate(const Material& material);

RelaxationRep relaxation_rep(const Material& material);

/// Mass of delta_0 in r, from the small-time behaviour of f.
double instantaneous_relaxation_mass(const Material& material);

/// Transform of the regular part of r: 1 / (z h(z)) - beta, for materials
/// with a closed-form transform. When beta > 0 (no constant, no stable part)
/// S - z h(z) = sum w lambda^2 / (z + lambda) with S = 1 / beta, and the
/// difference is formed without cancellation.
std::complex<double> regular_relaxation_transform(const Material& material,
                                                  std::complex<double> z, double beta);

struct RelaxationCurve {
    TimeGrid grid;
    std::vector<double> regular;  ///< r(t) without the delta_0 term
    double beta = 0.0;            ///< delta_0 mass, never put on the grid
    std::string method;           ///< "talbot+stehfest" or "stehfest"
};

/// Samples r by numeric inversion of 1 / (theta h(theta)). Grid points must
/// be > 0. Throws InversionDivergence when the two inversion routes disagree.
RelaxationCurve relaxation_curve_numeric(const Material& material, const TimeGrid& grid);

/// max_i |(f1 * f2)(t_i) - t_i^2 / 2| with the trapezoid convolution.
/// Grid must start at 0.
double verify_conjugation(const Material& first, const Material& second, const TimeGrid& grid);

struct MatrixRelaxationCurve {
    TimeGrid grid;
    std::vector<Eigen::MatrixXd> regular;
    Eigen::MatrixXd beta;
};

/// Entrywise numeric inversion of (theta h(theta))^{-1} for a matrix material.
/// Throws SingularMatrix (naming theta) if h(theta) is not invertible.
MatrixRelaxationCurve matrix_relaxation_numeric(const MatrixMaterialD& material,
                                                const TimeGrid& grid);

}  // namespace viscolevy
