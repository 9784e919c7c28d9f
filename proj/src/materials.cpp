#include "viscolevy/materials.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "viscolevy/conjugation.hpp"
#include "viscolevy/errors.hpp"

namespace viscolevy {

namespace {

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw InvalidArgument(std::string(what) + " must be finite and > 0");
}

}  // namespace

Material spring(double a) {
    require_positive(a, "spring modulus a");
    BernsteinRep rep;
    rep.constant_L = 1.0 / a;
    return Material::analytic(rep);
}

Material dashpot(double a) {
    require_positive(a, "dashpot rate a");
    BernsteinRep rep;
    rep.drift_K = a;
    return Material::analytic(rep);
}

Material maxwell(double modulus, double viscosity) {
    require_positive(modulus, "Maxwell modulus G");
    require_positive(viscosity, "Maxwell viscosity eta");
    BernsteinRep rep;
    rep.constant_L = 1.0 / modulus;
    rep.drift_K = 1.0 / viscosity;
    return Material::analytic(rep);
}

Material kelvin_voigt(double a, double b) {
    require_positive(a, "Kelvin-Voigt a");
    require_positive(b, "Kelvin-Voigt b");
    BernsteinRep rep;
    rep.levy.atoms.push_back({a / b, 1.0 / a});
    return Material::analytic(rep);
}

Material stable_material(double alpha, double c) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidArgument("stable index alpha must lie strictly inside (0, 1)");
    require_positive(c, "stable scale c");
    BernsteinRep rep;
    rep.levy.stable = StableComponent{alpha, c};
    return Material::analytic(rep);
}

Material prony(double constant_L, double drift_K, std::vector<LevyAtom> atoms) {
    BernsteinRep rep;
    rep.constant_L = constant_L;
    rep.drift_K = drift_K;
    rep.levy.atoms = std::move(atoms);
    return Material::analytic(std::move(rep));
}

namespace {

void flatten_into(const Material& m, std::vector<Material>& out) {
    if (const auto* s = m.as_sum()) {
        for (const auto& term : s->terms) out.push_back(*term);
        return;
    }
    out.push_back(m);
}

bool exactly_conjugable(const Material& m) {
    if (!m.is_analytic()) return false;
    const auto& rep = m.rep();
    return rep.atoms_only() || rep.pure_stable();
}

}  // namespace

Material series(const Material& first, const Material& second) {
    if (first.is_analytic() && second.is_analytic()) {
        const auto& a = first.rep();
        const auto& b = second.rep();
        const bool stable_clash = a.levy.stable && b.levy.stable &&
                                  a.levy.stable->alpha != b.levy.stable->alpha;
        if (!stable_clash) {
            BernsteinRep rep;
            rep.constant_L = a.constant_L + b.constant_L;
            rep.drift_K = a.drift_K + b.drift_K;
            rep.levy.atoms = a.levy.atoms;
            rep.levy.atoms.insert(rep.levy.atoms.end(), b.levy.atoms.begin(), b.levy.atoms.end());
            if (a.levy.stable && b.levy.stable)
                rep.levy.stable =
                    StableComponent{a.levy.stable->alpha, a.levy.stable->scale + b.levy.stable->scale};
            else
                rep.levy.stable = a.levy.stable ? a.levy.stable : b.levy.stable;
            return Material::analytic(std::move(rep));
        }
    }
    std::vector<Material> terms;
    flatten_into(first, terms);
    flatten_into(second, terms);
    return Material::sum(std::move(terms));
}

Material parallel(const Material& first, const Material& second) {
    if (!exactly_conjugable(first) || !exactly_conjugable(second))
        throw UnsupportedRepresentation(
            "exact parallel coupling needs atoms-only or pure stable materials; pass a grid");
    const auto coupled = series(conjugate(first), conjugate(second));
    if (!exactly_conjugable(coupled))
        throw UnsupportedRepresentation(
            "conjugates do not combine into an exactly conjugable material; pass a grid");
    return conjugate(coupled);
}

Material parallel(const Material& first, const Material& second, const TimeGrid& grid) {
    if (exactly_conjugable(first) && exactly_conjugable(second)) {
        const auto coupled = series(conjugate(first), conjugate(second));
        if (exactly_conjugable(coupled)) return conjugate(coupled);
    }
    const double f1 = eval_impulse(first, 0.0);
    const double f2 = eval_impulse(second, 0.0);
    const double f0 = (f1 > 0.0 && f2 > 0.0) ? f1 * f2 / (f1 + f2) : 0.0;
    std::vector<double> values(grid.count);

    if (first.has_closed_form_transform() && second.has_closed_form_transform()) {
        const LaplaceFn transform = [&](std::complex<double> z) {
            const auto h = 1.0 / (1.0 / laplace_fprime_complex(first, z) +
                                  1.0 / laplace_fprime_complex(second, z));
            return h / z;
        };
        std::vector<InversionResult> results(grid.count);
        double scale = std::abs(f0);
        for (std::size_t i = 0; i < grid.count; ++i) {
            if (grid[i] == 0.0) continue;
            results[i] = inverse_laplace(transform, grid[i]);
            scale = std::max(scale, std::abs(results[i].value));
        }
        const InversionOptions options;
        for (std::size_t i = 0; i < grid.count; ++i) {
            if (grid[i] == 0.0) {
                values[i] = f0;
                continue;
            }
            const auto& r = results[i];
            if (!inversion_agrees(r.talbot, r.stehfest, r.stehfest_spread, scale, options))
                throw InversionDivergence("parallel coupling: inversion routes disagree at t = " +
                                          std::to_string(grid[i]));
            values[i] = r.value;
        }
    } else {
        const RealFn transform = [&](double theta) {
            const double h = 1.0 / (1.0 / laplace_fprime_numeric(first, theta) +
                                    1.0 / laplace_fprime_numeric(second, theta));
            return h / theta;
        };
        for (std::size_t i = 0; i < grid.count; ++i)
            values[i] = grid[i] == 0.0 ? f0 : stehfest_inverse(transform, grid[i]);
    }
    return Material::sampled(grid, std::move(values));
}

LoadHistory::LoadHistory(std::vector<LoadStep> steps, std::vector<LoadRamp> ramps)
    : steps_(std::move(steps)), ramps_(std::move(ramps)) {
    for (const auto& s : steps_) {
        if (!(s.time >= 0.0) || !std::isfinite(s.time) || !std::isfinite(s.jump))
            throw InvalidArgument("load step needs a finite time >= 0 and a finite jump");
    }
    for (const auto& r : ramps_) {
        if (!(r.start >= 0.0) || !(r.start < r.end) || !std::isfinite(r.end) ||
            !std::isfinite(r.rate))
            throw InvalidArgument("load ramp needs 0 <= start < end and a finite rate");
    }
    std::stable_sort(steps_.begin(), steps_.end(),
                     [](const LoadStep& a, const LoadStep& b) { return a.time < b.time; });
    std::stable_sort(ramps_.begin(), ramps_.end(),
                     [](const LoadRamp& a, const LoadRamp& b) { return a.start < b.start; });
}

double LoadHistory::value(double t) const {
    double q = 0.0;
    for (const auto& s : steps_)
        if (t >= s.time) q += s.jump;
    for (const auto& r : ramps_)
        if (t > r.start) q += r.rate * (std::min(t, r.end) - r.start);
    return q;
}

double LoadHistory::rate(double t) const {
    double q = 0.0;
    for (const auto& r : ramps_)
        if (t >= r.start && t < r.end) q += r.rate;
    return q;
}

LoadHistory LoadHistory::scaled(double factor) const {
    auto steps = steps_;
    auto ramps = ramps_;
    for (auto& s : steps) s.jump *= factor;
    for (auto& r : ramps) r.rate *= factor;
    return LoadHistory(std::move(steps), std::move(ramps));
}

LoadHistory LoadHistory::operator+(const LoadHistory& other) const {
    auto steps = steps_;
    auto ramps = ramps_;
    steps.insert(steps.end(), other.steps_.begin(), other.steps_.end());
    ramps.insert(ramps.end(), other.ramps_.begin(), other.ramps_.end());
    return LoadHistory(std::move(steps), std::move(ramps));
}

namespace {

// Grid times are compared with a small slack so a jump that sits on a grid
// point is seen there despite rounding in start + i * step.
bool reached(double t, double event, double step) { return t >= event - 1e-9 * step; }

template <typename Value, typename Fn>
Value trapezoid(Fn&& fn, double a, double b, double max_width, Value zero) {
    const double length = b - a;
    if (!(length > 0.0)) return zero;
    const auto panels =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / max_width - 1e-9)));
    const double h = length / static_cast<double>(panels);
    Value acc = 0.5 * (fn(a) + fn(b));
    for (std::size_t k = 1; k < panels; ++k) acc += fn(a + static_cast<double>(k) * h);
    return h * acc;
}

}  // namespace

std::vector<double> respond_creep(const Material& material, const LoadHistory& load,
                                  const TimeGrid& grid) {
    auto f = [&](double u) { return eval_impulse(material, std::max(u, 0.0)); };
    std::vector<double> q(grid.count, 0.0);
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double t = grid[i];
        double acc = 0.0;
        for (const auto& s : load.steps())
            if (reached(t, s.time, grid.step)) acc += s.jump * f(t - s.time);
        for (const auto& r : load.ramps()) {
            if (!(t > r.start)) continue;
            const double upper = std::min(r.end, t);
            acc += r.rate * trapezoid(f, t - upper, t - r.start, grid.step, 0.0);
        }
        q[i] = acc;
    }
    return q;
}

std::vector<Eigen::VectorXd> respond_creep(const MatrixMaterialD& material,
                                           std::span<const LoadHistory> loads,
                                           const TimeGrid& grid) {
    const auto m = material.dim;
    if (static_cast<Eigen::Index>(loads.size()) != m)
        throw InvalidArgument("need one load history per observable");
    auto f = [&](double u) { return eval_impulse(material, std::max(u, 0.0)); };
    std::vector<Eigen::VectorXd> q(grid.count, Eigen::VectorXd::Zero(m));
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double t = grid[i];
        for (Eigen::Index j = 0; j < m; ++j) {
            const auto& load = loads[static_cast<std::size_t>(j)];
            for (const auto& s : load.steps())
                if (reached(t, s.time, grid.step)) q[i] += s.jump * f(t - s.time).col(j);
            for (const auto& r : load.ramps()) {
                if (!(t > r.start)) continue;
                const double upper = std::min(r.end, t);
                const Eigen::VectorXd integral = trapezoid(
                    [&](double u) -> Eigen::VectorXd { return f(u).col(j); }, t - upper,
                    t - r.start, grid.step, Eigen::VectorXd(Eigen::VectorXd::Zero(m)));
                q[i] += r.rate * integral;
            }
        }
    }
    return q;
}

namespace {

struct RelaxationKernel {
    std::function<double(double)> regular;    // r(u) without delta_0, u >= 0
    std::function<double(double)> primitive;  // int_0^u regular
    double beta = 0.0;
};

RelaxationKernel exact_kernel(const Material& material) {
    const auto rep = relaxation_rep(material);
    RelaxationKernel kernel;
    kernel.beta = rep.beta;
    kernel.regular = [rep](double u) { return rep.regular(u); };
    kernel.primitive = [rep](double u) {
        double value = rep.alpha * u;
        for (const auto& a : rep.rho.atoms) value += a.weight / a.rate * -std::expm1(-a.rate * u);
        if (rep.rho.stable) {
            const auto& s = *rep.rho.stable;
            value += s.scale * std::pow(u, 1.0 - s.alpha) / std::tgamma(2.0 - s.alpha);
        }
        return value;
    };
    return kernel;
}

RelaxationKernel numeric_kernel(const Material& material) {
    RelaxationKernel kernel;
    kernel.beta = instantaneous_relaxation_mass(material);
    const double beta = kernel.beta;
    const double f0 = eval_impulse(material, 0.0);
    const double r0 = f0 > 0.0 ? 1.0 / f0 : std::numeric_limits<double>::infinity();
    if (material.has_closed_form_transform()) {
        auto invert = [material, beta](double u, int power) {
            const LaplaceFn transform = [&](std::complex<double> z) {
                auto r = regular_relaxation_transform(material, z, beta);
                return power == 0 ? r : r / z;
            };
            const auto result = inverse_laplace(transform, u);
            if (!result.agreed)
                throw InversionDivergence("relaxation kernel: inversion routes disagree at t = " +
                                          std::to_string(u));
            return result.value;
        };
        kernel.regular = [invert, r0](double u) { return u == 0.0 ? r0 : invert(u, 0); };
        kernel.primitive = [invert](double u) { return u == 0.0 ? 0.0 : invert(u, 1); };
    } else {
        auto invert = [material, beta](double u, int power) {
            return stehfest_inverse(
                [&](double theta) {
                    const double r = 1.0 / (theta * laplace_fprime_numeric(material, theta)) - beta;
                    return power == 0 ? r : r / theta;
                },
                u);
        };
        kernel.regular = [invert, r0](double u) { return u == 0.0 ? r0 : invert(u, 0); };
        kernel.primitive = [invert](double u) { return u == 0.0 ? 0.0 : invert(u, 1); };
    }
    return kernel;
}

}  // namespace

RelaxationResponse respond_relaxation(const Material& material, const LoadHistory& strain,
                                      const TimeGrid& grid) {
    const bool exact = material.is_analytic() &&
                       (material.rep().atoms_only() || material.rep().pure_stable());
    const auto kernel = exact ? exact_kernel(material) : numeric_kernel(material);

    RelaxationResponse out;
    out.beta = kernel.beta;
    out.values.assign(grid.count, 0.0);
    if (kernel.beta > 0.0)
        for (const auto& s : strain.steps()) out.impulses.push_back({s.time, kernel.beta * s.jump});

    for (std::size_t i = 0; i < grid.count; ++i) {
        const double t = grid[i];
        double acc = 0.0;
        for (const auto& s : strain.steps())
            if (reached(t, s.time, grid.step)) acc += s.jump * kernel.regular(std::max(t - s.time, 0.0));
        for (const auto& r : strain.ramps()) {
            if (t >= r.start && t < r.end) acc += kernel.beta * r.rate;
            if (!(t > r.start)) continue;
            const double upper = std::min(r.end, t);
            acc += r.rate * (kernel.primitive(t - r.start) - kernel.primitive(t - upper));
        }
        out.values[i] = acc;
    }
    return out;
}

}  // namespace viscolevy
