#pragma once

// Scalar viscoelastic materials as Bernstein functions
//
//   f(t) = L + K t + sum_i w_i (1 - exp(-lambda_i t)) + c t^alpha / (alpha Gamma(alpha))
//
// The optional one-sided stable term corresponds to the Levy density
// c sin(pi alpha)/pi x^{-1-alpha} dx, which integrates (1 - e^{-tx}) to the
// closed form above. Its Laplace exponent contribution to the Stieltjes
// form of f' is c theta^{-alpha}.

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "viscolevy/numerics.hpp"

namespace viscolevy {

struct LevyAtom {
    double rate = 0.0;    ///< relaxation rate lambda > 0 (jump size of the subordinator)
    double weight = 0.0;  ///< mass nu({lambda}) > 0 (jump intensity)

    friend bool operator==(const LevyAtom&, const LevyAtom&) = default;
};

struct StableComponent {
    double alpha = 0.5;  ///< index in (0, 1)
    double scale = 1.0;  ///< c > 0 in f(t) = c t^alpha / (alpha Gamma(alpha))

    friend bool operator==(const StableComponent&, const StableComponent&) = default;
};

struct LevyMeasure {
    std::vector<LevyAtom> atoms;
    std::optional<StableComponent> stable;

    friend bool operator==(const LevyMeasure&, const LevyMeasure&) = default;
};

struct BernsteinRep {
    double constant_L = 0.0;  ///< instantaneous compliance f(0+)
    double drift_K = 0.0;     ///< long-time flow rate
    LevyMeasure levy;

    bool atoms_only() const { return !levy.stable.has_value(); }
    bool pure_stable() const {
        return levy.stable.has_value() && levy.atoms.empty() && constant_L == 0.0 &&
               drift_K == 0.0;
    }
    bool is_zero() const {
        return constant_L == 0.0 && drift_K == 0.0 && levy.atoms.empty() && !levy.stable;
    }

    friend bool operator==(const BernsteinRep&, const BernsteinRep&) = default;
};

/// Sorts atoms by rate, merges duplicate rates, drops zero weights and a
/// zero-scale stable part. Rejects negative or non-finite fields and
/// alpha outside (0, 1) with InvalidArgument.
BernsteinRep canonicalize(BernsteinRep rep);

/// 1 / (alpha Gamma(alpha)) = 1 / Gamma(1 + alpha).
double stable_impulse_coefficient(double alpha);

/// sin(pi alpha) / pi, the Levy density constant of the normalised stable part.
double stable_levy_density_constant(double alpha);

/// A scalar material. Immutable; copies share their children.
class Material {
public:
    struct Composed {
        std::shared_ptr<const Material> outer;
        std::shared_ptr<const Material> inner;
    };
    /// Pointwise sum of impulse responses (series coupling that has no single
    /// Bernstein triple in the supported representation).
    struct Sum {
        std::vector<std::shared_ptr<const Material>> terms;
    };
    /// Impulse response known only on a grid (linear interpolation inside it).
    struct Sampled {
        TimeGrid grid;
        std::vector<double> values;
    };

    /// Canonicalizes `rep`; throws ZeroMaterial for the identically zero response.
    static Material analytic(BernsteinRep rep);
    static Material composed(Material outer, Material inner);
    static Material sum(std::vector<Material> terms);
    static Material sampled(TimeGrid grid, std::vector<double> values);

    bool is_analytic() const { return std::holds_alternative<BernsteinRep>(node_); }
    /// Throws UnsupportedRepresentation unless analytic.
    const BernsteinRep& rep() const;

    const Composed* as_composed() const { return std::get_if<Composed>(&node_); }
    const Sum* as_sum() const { return std::get_if<Sum>(&node_); }
    const Sampled* as_sampled() const { return std::get_if<Sampled>(&node_); }

    /// True when the Laplace transform of f' is available in closed form
    /// (analytic, or a sum of such).
    bool has_closed_form_transform() const;

    /// Structural equality (analytic reps compared field by field).
    friend bool operator==(const Material& a, const Material& b);

private:
    using Node = std::variant<BernsteinRep, Composed, Sum, Sampled>;
    explicit Material(Node node) : node_(std::move(node)) {}
    Node node_;
};

/// f(t) for t >= 0; f(0) is the right limit L. Composed values are
/// outer(inner(t)).
double eval_impulse(const Material& material, double t);

/// f'(t) for an analytic material. t = 0 is read as the right limit (which
/// is +inf when a stable part is present).
double eval_derivative(const Material& material, double t);

/// Stieltjes form of the Laplace transform of f':
///   L + K/theta + sum_i w_i lambda_i / (theta + lambda_i) + c theta^{-alpha}.
/// Valid for any theta off the closed negative real axis (principal branch).
template <typename Scalar>
Scalar stieltjes_value(const BernsteinRep& rep, Scalar theta) {
    Scalar value = Scalar(rep.constant_L) + Scalar(rep.drift_K) / theta;
    for (const auto& atom : rep.levy.atoms)
        value += Scalar(atom.weight * atom.rate) / (theta + Scalar(atom.rate));
    if (rep.levy.stable)
        value += Scalar(rep.levy.stable->scale) * std::pow(theta, Scalar(-rep.levy.stable->alpha));
    return value;
}

/// Closed-form transform of f' for materials where
/// has_closed_form_transform() holds; UnsupportedRepresentation otherwise.
std::complex<double> laplace_fprime_complex(const Material& material, std::complex<double> theta);

/// Real-axis transform of f' (theta > 0). Analytic materials only.
double laplace_fprime(const Material& material, double theta);

/// Real-axis transform of f' for any material whose impulse response is
/// defined on [0, inf): closed form when available, otherwise
/// theta * int_0^inf e^{-theta t} f(t) dt by quadrature.
double laplace_fprime_numeric(const Material& material, double theta);

/// f_outer(f_inner(t)); Bernstein functions are closed under composition.
Material compose(const Material& outer, const Material& inner);

struct BernsteinCheck {
    bool ok = true;
    std::size_t index = 0;  ///< grid index of the first violation
    std::string what;
};

/// Numeric Bernstein property on a uniform grid: f >= 0, forward
/// differences >= 0, second differences <= 0 (with a rounding allowance).
BernsteinCheck check_bernstein_grid(const Material& material, const TimeGrid& grid);

}  // namespace viscolevy
