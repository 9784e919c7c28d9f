#include "viscolevy/conjugation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "viscolevy/errors.hpp"

namespace viscolevy {

double StieltjesRep::operator()(double theta) const {
    double value = a + mu_at_zero / theta;
    for (const auto& atom : mu_atoms) value += atom.mass / (theta + atom.location);
    return value;
}

double RelaxationRep::regular(double t) const {
    double value = alpha;
    for (const auto& atom : rho.atoms) value += atom.weight * std::exp(-atom.rate * t);
    if (rho.stable) {
        const auto& s = *rho.stable;
        if (t == 0.0) return std::numeric_limits<double>::infinity();
        value += s.scale * std::pow(t, -s.alpha) / std::tgamma(1.0 - s.alpha);
    }
    return value;
}

StieltjesRep stieltjes_of(const BernsteinRep& rep) {
    if (!rep.atoms_only())
        throw UnsupportedRepresentation("Stieltjes pair of a stable component has no atom form");
    StieltjesRep out;
    out.a = rep.constant_L;
    out.mu_at_zero = rep.drift_K;
    for (const auto& atom : rep.levy.atoms)
        out.mu_atoms.push_back({atom.rate, atom.weight * atom.rate});
    return out;
}

namespace {

const BernsteinRep& atoms_only_rep(const Material& material) {
    const auto& rep = material.rep();
    if (!rep.atoms_only())
        throw UnsupportedRepresentation(
            "exact conjugation needs an atoms-only representation (stable part present)");
    if (rep.is_zero()) throw ZeroMaterial("conjugate of the zero material");
    return rep;
}

// theta h(theta) = L theta + K + sum_i w_i lambda_i theta / (theta + lambda_i),
// written in the offset x = theta + anchor where the anchor is a pole (or 0).
// Zeros that crowd a pole then keep full relative precision in their distance
// to it, which is what the residues 1 / (mu g'(-mu)) are sensitive to.
struct AnchoredTransform {
    const BernsteinRep& rep;
    double anchor = 0.0;

    double gap(double x, double rate) const { return rate == anchor ? x : x + (rate - anchor); }
    double operator()(double x) const {
        const double theta = x - anchor;
        double value = rep.constant_L * theta + rep.drift_K;
        for (const auto& a : rep.levy.atoms) value += a.weight * a.rate * theta / gap(x, a.rate);
        return value;
    }
    double derivative(double x) const {
        double value = rep.constant_L;
        for (const auto& a : rep.levy.atoms) {
            const double d = gap(x, a.rate);
            value += a.weight * a.rate * a.rate / (d * d);
        }
        return value;
    }
};

/// Zero of an increasing function with fn(lo) < 0 <= fn(hi), bisected until
/// the bracket cannot be split further.
template <typename Fn>
double increasing_zero(const Fn& fn, double lo, double hi) {
    for (int it = 0; it < 4096; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (!(mid > lo && mid < hi)) break;
        (fn(mid) < 0.0 ? lo : hi) = mid;
    }
    return std::abs(fn(lo)) <= std::abs(fn(hi)) ? lo : hi;
}

struct ConjugateAtom {
    double rate;
    double weight;
};

/// The zero of theta h in (-left, -right), anchored at whichever end it is
/// closer to. `right` may be 0 (no pole, g(0) = K > 0); `left` may be
/// infinite (g -> -inf through the L theta term).
ConjugateAtom zero_between(const BernsteinRep& rep, double left, double right) {
    constexpr double tiny = std::numeric_limits<double>::min();
    const bool right_is_pole = right > 0.0;
    auto at = [&](double anchor) { return AnchoredTransform{rep, anchor}; };
    auto finish = [&](const AnchoredTransform& g, double x) {
        const double rate = g.anchor - x;
        return ConjugateAtom{rate, 1.0 / (rate * g.derivative(x))};
    };

    if (std::isinf(left)) {
        const AnchoredTransform g = at(right);
        double lo = -(right + 1.0);
        while (g(lo) >= 0.0) lo *= 2.0;
        return finish(g, increasing_zero(g, lo, -tiny));
    }
    const double mid_theta = -0.5 * (left + right);
    const AnchoredTransform plain = at(0.0);
    if (plain(mid_theta) >= 0.0) {
        // zero in (-left, mid]: offset from the left pole
        const AnchoredTransform g = at(left);
        return finish(g, increasing_zero(g, tiny, mid_theta + left));
    }
    if (right_is_pole) {
        const AnchoredTransform g = at(right);
        return finish(g, increasing_zero(g, mid_theta + right, -tiny));
    }
    return finish(plain, increasing_zero(plain, mid_theta, 0.0));
}

}  // namespace

Material conjugate_exact(const Material& material) {
    const auto& rep = atoms_only_rep(material);
    const auto& atoms = rep.levy.atoms;
    const double L = rep.constant_L;
    const double K = rep.drift_K;

    BernsteinRep out;
    if (atoms.empty()) {
        // theta h = L theta + K: spring <-> dashpot, Maxwell <-> Kelvin-Voigt
        if (L > 0.0 && K > 0.0)
            out.levy.atoms.push_back({K / L, 1.0 / K});
        else if (L > 0.0)
            out.drift_K = 1.0 / L;
        else
            out.constant_L = 1.0 / K;
        return Material::analytic(std::move(out));
    }

    const auto n = atoms.size();
    double strength = K;  // K + sum w lambda = lim_{theta -> -inf} g when L = 0
    double mass = L;      // L + sum w = g'(0)
    for (const auto& a : atoms) {
        strength += a.weight * a.rate;
        mass += a.weight;
    }

    // One zero between consecutive poles, one in (-lambda_1, 0) when K > 0,
    // one below -lambda_n when L > 0.
    if (K > 0.0) {
        const auto z = zero_between(rep, atoms.front().rate, 0.0);
        out.levy.atoms.push_back({z.rate, z.weight});
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto z = zero_between(rep, atoms[i + 1].rate, atoms[i].rate);
        out.levy.atoms.push_back({z.rate, z.weight});
    }
    if (L > 0.0) {
        const auto z =
            zero_between(rep, std::numeric_limits<double>::infinity(), atoms.back().rate);
        out.levy.atoms.push_back({z.rate, z.weight});
    }
    out.constant_L = (L > 0.0) ? 0.0 : 1.0 / strength;
    out.drift_K = (K > 0.0) ? 0.0 : 1.0 / mass;
    return Material::analytic(std::move(out));
}

Material conjugate_stable(const Material& material) {
    const auto& rep = material.rep();
    if (!rep.pure_stable())
        throw UnsupportedRepresentation("stable conjugation needs a pure stable material");
    const auto& s = *rep.levy.stable;
    BernsteinRep out;
    out.levy.stable = StableComponent{1.0 - s.alpha, 1.0 / s.scale};
    return Material::analytic(std::move(out));
}

Material conjugate(const Material& material) {
    const auto& rep = material.rep();
    if (rep.pure_stable()) return conjugate_stable(material);
    if (rep.atoms_only()) return conjugate_exact(material);
    throw UnsupportedRepresentation(
        "no exact conjugate for mixed stable + atom materials; use the numeric relaxation curve");
}

RelaxationRep relaxation_rep(const Material& material) {
    const auto& rep = material.rep();
    RelaxationRep out;
    if (rep.pure_stable()) {
        const auto& s = *rep.levy.stable;
        out.rho.stable = StableComponent{s.alpha, 1.0 / s.scale};
        return out;
    }
    const auto conj = conjugate_exact(material).rep();
    out.alpha = conj.drift_K;
    out.beta = conj.constant_L;
    for (const auto& a : conj.levy.atoms) out.rho.atoms.push_back({a.rate, a.weight * a.rate});
    return out;
}

namespace {

double derivative_at(const Material& m, double t) {
    if (m.has_closed_form_transform()) return eval_derivative(m, t);
    if (const auto* c = m.as_composed())
        return derivative_at(*c->outer, eval_impulse(*c->inner, t)) * derivative_at(*c->inner, t);
    if (const auto* s = m.as_sum()) {
        double d = 0.0;
        for (const auto& term : s->terms) d += derivative_at(*term, t);
        return d;
    }
    const auto& sampled = *m.as_sampled();
    const double x = (t - sampled.grid.start) / sampled.grid.step;
    const auto i = std::min(static_cast<std::size_t>(std::max(x, 0.0)), sampled.grid.count - 2);
    return (sampled.values[i + 1] - sampled.values[i]) / sampled.grid.step;
}

struct ClosedFormLimits {
    double constant = 0.0;
    double strength = 0.0;
    bool stable = false;
};

void collect_limits(const Material& m, ClosedFormLimits& out) {
    if (const auto* s = m.as_sum()) {
        for (const auto& term : s->terms) collect_limits(*term, out);
        return;
    }
    const auto& rep = m.rep();
    out.constant += rep.constant_L;
    out.strength += rep.drift_K;
    for (const auto& a : rep.levy.atoms) out.strength += a.weight * a.rate;
    out.stable = out.stable || rep.levy.stable.has_value();
}

}  // namespace

double instantaneous_relaxation_mass(const Material& material) {
    if (material.has_closed_form_transform()) {
        ClosedFormLimits limits;
        collect_limits(material, limits);
        if (limits.constant > 0.0 || limits.stable) return 0.0;
        return 1.0 / limits.strength;
    }
    if (eval_impulse(material, 0.0) > 0.0) return 0.0;
    const double slope = derivative_at(material, 0.0);
    return (std::isfinite(slope) && slope > 0.0) ? 1.0 / slope : 0.0;
}

namespace {

void collect_tail(const Material& m, std::complex<double> z, std::complex<double>& tail) {
    if (const auto* s = m.as_sum()) {
        for (const auto& term : s->terms) collect_tail(*term, z, tail);
        return;
    }
    for (const auto& a : m.rep().levy.atoms) tail += a.weight * a.rate * a.rate / (z + a.rate);
}

}  // namespace

std::complex<double> regular_relaxation_transform(const Material& m, std::complex<double> z,
                                                  double beta) {
    const std::complex<double> zh = z * laplace_fprime_complex(m, z);
    if (beta == 0.0) return 1.0 / zh;
    std::complex<double> tail = 0.0;
    collect_tail(m, z, tail);
    return tail * beta / zh;
}

RelaxationCurve relaxation_curve_numeric(const Material& material, const TimeGrid& grid) {
    if (!(grid.start > 0.0))
        throw InvalidArgument("relaxation curve grid must start at t > 0 (delta_0 is kept apart)");
    RelaxationCurve curve;
    curve.grid = grid;
    curve.beta = instantaneous_relaxation_mass(material);
    curve.regular.resize(grid.count);
    const double beta = curve.beta;

    if (material.has_closed_form_transform()) {
        curve.method = "talbot+stehfest";
        const LaplaceFn transform = [&](std::complex<double> z) {
            return regular_relaxation_transform(material, z, beta);
        };
        const InversionOptions options;
        std::vector<InversionResult> results(grid.count);
        double scale = std::abs(beta);
        for (std::size_t i = 0; i < grid.count; ++i) {
            results[i] = inverse_laplace(transform, grid[i], options);
            curve.regular[i] = results[i].value;
            scale = std::max(scale, std::abs(curve.regular[i]));
        }
        for (std::size_t i = 0; i < grid.count; ++i) {
            const auto& r = results[i];
            if (!inversion_agrees(r.talbot, r.stehfest, r.stehfest_spread, scale, options))
                throw InversionDivergence("inverse Laplace routes disagree at t = " +
                                          std::to_string(grid[i]) + " (talbot " +
                                          std::to_string(r.talbot) + ", stehfest " +
                                          std::to_string(r.stehfest) + ")");
        }
        return curve;
    }

    curve.method = "stehfest";
    const RealFn transform = [&](double theta) {
        return 1.0 / (theta * laplace_fprime_numeric(material, theta)) - beta;
    };
    std::vector<double> coarse(grid.count);
    double scale = std::abs(beta);
    for (std::size_t i = 0; i < grid.count; ++i) {
        curve.regular[i] = stehfest_inverse(transform, grid[i], 16);
        coarse[i] = stehfest_inverse(transform, grid[i], 14);
        scale = std::max(scale, std::abs(curve.regular[i]));
    }
    for (std::size_t i = 0; i < grid.count; ++i) {
        if (!std::isfinite(curve.regular[i]) ||
            std::abs(curve.regular[i] - coarse[i]) > 1e-3 * scale)
            throw InversionDivergence("Stehfest orders 14 and 16 disagree at t = " +
                                      std::to_string(grid[i]));
    }
    return curve;
}

double verify_conjugation(const Material& first, const Material& second, const TimeGrid& grid) {
    const auto f1 = sample(grid, [&](double t) { return eval_impulse(first, t); });
    const auto f2 = sample(grid, [&](double t) { return eval_impulse(second, t); });
    const auto conv = convolve_grid(f1, f2, grid);
    double residual = 0.0;
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double t = grid[i];
        residual = std::max(residual, std::abs(conv[i] - 0.5 * t * t));
    }
    return residual;
}

namespace {

using ComplexMatrix = Eigen::MatrixXcd;

// With theta H = theta C + S - N(theta), C the constant part, S = D + sum lambda J
// and N = sum lambda^2 J / (theta + lambda), the regular transform solves
//   (theta H) X = (I - S beta) + N beta,   X = (theta H)^{-1} - beta,
// which avoids the cancellation (theta H)^{-1} ~ beta at large theta.
struct RelaxationSplit {
    Eigen::MatrixXd beta;
    Eigen::MatrixXd range_part;  // I - S beta (lies in the range of C)
};

RelaxationSplit instantaneous_relaxation_split(const MatrixMaterialD& material) {
    const auto m = material.dim;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(material.const_K);
    const double scale = std::max(1.0, material.const_K.cwiseAbs().maxCoeff());
    std::vector<Eigen::Index> null_cols;
    for (Eigen::Index k = 0; k < m; ++k)
        if (es.eigenvalues()(k) <= 1e-12 * scale) null_cols.push_back(k);
    RelaxationSplit split;
    split.beta = Eigen::MatrixXd::Zero(m, m);
    split.range_part = Eigen::MatrixXd::Identity(m, m);
    if (null_cols.empty()) return split;
    Eigen::MatrixXd basis(m, static_cast<Eigen::Index>(null_cols.size()));
    for (std::size_t j = 0; j < null_cols.size(); ++j)
        basis.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(null_cols[j]);
    Eigen::MatrixXd strength = material.drift_L;
    for (const auto& atom : material.spectral_atoms) strength += atom.rate * atom.J;
    const Eigen::MatrixXd reduced = basis.transpose() * strength * basis;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(reduced);
    if (!lu.isInvertible())
        throw SingularMatrix("impulse-response transform is singular as theta -> inf");
    split.beta = basis * lu.inverse() * basis.transpose();
    const Eigen::MatrixXd complement =
        Eigen::MatrixXd::Identity(m, m) - basis * basis.transpose();
    split.range_part = complement * (Eigen::MatrixXd::Identity(m, m) - strength * split.beta);
    return split;
}

ComplexMatrix relaxation_transform(const MatrixMaterialD& material, std::complex<double> theta,
                                   const RelaxationSplit& split) {
    const ComplexMatrix h = laplace_fprime(material, theta);
    Eigen::PartialPivLU<ComplexMatrix> lu(theta * h);
    if (!(lu.rcond() > 1e-14))
        throw SingularMatrix("transform matrix h(theta) is singular at theta = (" +
                             std::to_string(theta.real()) + ", " + std::to_string(theta.imag()) +
                             ")");
    ComplexMatrix rhs = split.range_part.cast<std::complex<double>>();
    if (split.beta.cwiseAbs().maxCoeff() > 0.0) {
        ComplexMatrix tail = ComplexMatrix::Zero(material.dim, material.dim);
        for (const auto& atom : material.spectral_atoms)
            tail += (atom.rate * atom.rate / (theta + atom.rate)) * atom.J.cast<std::complex<double>>();
        rhs += tail * split.beta.cast<std::complex<double>>();
    }
    return lu.solve(rhs);
}

}  // namespace

MatrixRelaxationCurve matrix_relaxation_numeric(const MatrixMaterialD& material,
                                                const TimeGrid& grid) {
    if (!(grid.start > 0.0))
        throw InvalidArgument("relaxation curve grid must start at t > 0 (delta_0 is kept apart)");
    validate(material);
    using std::numbers::pi;
    MatrixRelaxationCurve curve;
    curve.grid = grid;
    const auto split = instantaneous_relaxation_split(material);
    curve.beta = split.beta;
    const auto m = material.dim;
    const InversionOptions options;
    const int nodes = options.talbot_nodes;

    std::vector<Eigen::MatrixXd> stehfest, spreads;
    double scale = curve.beta.cwiseAbs().maxCoeff();
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double t = grid[i];
        // fixed Talbot, entrywise
        const double r = 2.0 * nodes / (5.0 * t);
        Eigen::MatrixXd acc =
            0.5 * (relaxation_transform(material, {r, 0.0}, split) * std::exp(r * t)).real();
        for (int k = 1; k < nodes; ++k) {
            const double phi = k * pi / nodes;
            const double cot = std::cos(phi) / std::sin(phi);
            const std::complex<double> s = r * phi * std::complex<double>(cot, 1.0);
            const double sigma = phi + (phi * cot - 1.0) * cot;
            acc += (relaxation_transform(material, s, split) *
                    (std::exp(t * s) * std::complex<double>(1.0, sigma)))
                       .real();
        }
        Eigen::MatrixXd value = (r / nodes) * acc;
        value = 0.5 * (value + value.transpose()).eval();
        scale = std::max(scale, value.cwiseAbs().maxCoeff());
        curve.regular.push_back(std::move(value));

        Eigen::MatrixXd cross(m, m), spread(m, m);
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b) {
                const RealFn entry = [&](double theta) {
                    return relaxation_transform(material, {theta, 0.0}, split)(a, b).real();
                };
                cross(a, b) = stehfest_inverse(entry, t, options.stehfest_order);
                spread(a, b) =
                    std::abs(cross(a, b) - stehfest_inverse(entry, t, options.stehfest_order - 2));
            }
        stehfest.push_back(std::move(cross));
        spreads.push_back(std::move(spread));
    }
    for (std::size_t i = 0; i < grid.count; ++i)
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b)
                if (!inversion_agrees(curve.regular[i](a, b), stehfest[i](a, b), spreads[i](a, b),
                                      scale, options))
                    throw InversionDivergence("matrix inverse Laplace routes disagree at t = " +
                                              std::to_string(grid[i]));
    return curve;
}

MatrixMaterialD as_matrix_material(const BernsteinRep& rep) {
    if (!rep.atoms_only())
        throw UnsupportedRepresentation("matrix materials carry no stable component");
    auto out = MatrixMaterialD::zero(1);
    out.const_K(0, 0) = rep.constant_L;
    out.drift_L(0, 0) = rep.drift_K;
    for (const auto& a : rep.levy.atoms)
        out.spectral_atoms.push_back({a.rate, Eigen::MatrixXd::Constant(1, 1, a.weight)});
    return out;
}

}  // namespace viscolevy
