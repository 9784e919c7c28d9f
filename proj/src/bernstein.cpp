#include "viscolevy/bernstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "viscolevy/errors.hpp"

namespace viscolevy {

namespace {

void require_nonneg(double x, const char* field) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw InvalidArgument(std::string(field) + " must be finite and >= 0");
}

}  // namespace

BernsteinRep canonicalize(BernsteinRep rep) {
    require_nonneg(rep.constant_L, "constant L");
    require_nonneg(rep.drift_K, "drift K");
    for (const auto& atom : rep.levy.atoms) {
        if (!(atom.rate > 0.0) || !std::isfinite(atom.rate))
            throw InvalidArgument("Levy atom rate must be finite and > 0");
        require_nonneg(atom.weight, "Levy atom weight");
    }
    auto& atoms = rep.levy.atoms;
    std::erase_if(atoms, [](const LevyAtom& a) { return a.weight == 0.0; });
    std::sort(atoms.begin(), atoms.end(),
              [](const LevyAtom& a, const LevyAtom& b) { return a.rate < b.rate; });
    std::vector<LevyAtom> merged;
    merged.reserve(atoms.size());
    for (const auto& atom : atoms) {
        if (!merged.empty() && merged.back().rate == atom.rate)
            merged.back().weight += atom.weight;
        else
            merged.push_back(atom);
    }
    atoms = std::move(merged);

    if (rep.levy.stable) {
        const auto& s = *rep.levy.stable;
        if (!(s.alpha > 0.0 && s.alpha < 1.0))
            throw InvalidArgument("stable index alpha must lie strictly inside (0, 1)");
        require_nonneg(s.scale, "stable scale");
        if (s.scale == 0.0) rep.levy.stable.reset();
    }
    return rep;
}

double stable_impulse_coefficient(double alpha) { return 1.0 / std::tgamma(1.0 + alpha); }

double stable_levy_density_constant(double alpha) {
    return std::sin(std::numbers::pi * alpha) / std::numbers::pi;
}

Material Material::analytic(BernsteinRep rep) {
    rep = canonicalize(std::move(rep));
    if (rep.is_zero()) throw ZeroMaterial("material has identically zero impulse response");
    return Material(Node(std::move(rep)));
}

Material Material::composed(Material outer, Material inner) {
    return Material(Node(Composed{std::make_shared<const Material>(std::move(outer)),
                                  std::make_shared<const Material>(std::move(inner))}));
}

Material Material::sum(std::vector<Material> terms) {
    if (terms.empty()) throw ZeroMaterial("empty sum of materials");
    Sum s;
    for (auto& term : terms) s.terms.push_back(std::make_shared<const Material>(std::move(term)));
    return Material(Node(std::move(s)));
}

Material Material::sampled(TimeGrid grid, std::vector<double> values) {
    if (values.size() != grid.count)
        throw GridMismatch("sampled material: value count does not match grid");
    if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; }))
        throw ZeroMaterial("sampled material is identically zero");
    return Material(Node(Sampled{grid, std::move(values)}));
}

const BernsteinRep& Material::rep() const {
    if (const auto* rep = std::get_if<BernsteinRep>(&node_)) return *rep;
    throw UnsupportedRepresentation("operation needs an analytic (L, K, nu) representation");
}

bool Material::has_closed_form_transform() const {
    if (is_analytic()) return true;
    if (const auto* s = as_sum())
        return std::all_of(s->terms.begin(), s->terms.end(),
                           [](const auto& t) { return t->has_closed_form_transform(); });
    return false;
}

bool operator==(const Material& a, const Material& b) {
    if (a.node_.index() != b.node_.index()) return false;
    if (a.is_analytic()) return a.rep() == b.rep();
    if (const auto* ca = a.as_composed()) {
        const auto* cb = b.as_composed();
        return *ca->outer == *cb->outer && *ca->inner == *cb->inner;
    }
    if (const auto* sa = a.as_sum()) {
        const auto* sb = b.as_sum();
        if (sa->terms.size() != sb->terms.size()) return false;
        for (std::size_t i = 0; i < sa->terms.size(); ++i)
            if (!(*sa->terms[i] == *sb->terms[i])) return false;
        return true;
    }
    const auto* pa = a.as_sampled();
    const auto* pb = b.as_sampled();
    return pa->grid == pb->grid && pa->values == pb->values;
}

namespace {

double eval_rep(const BernsteinRep& rep, double t) {
    double value = rep.constant_L + rep.drift_K * t;
    for (const auto& atom : rep.levy.atoms) value += atom.weight * -std::expm1(-atom.rate * t);
    if (rep.levy.stable) {
        const auto& s = *rep.levy.stable;
        value += s.scale * std::pow(t, s.alpha) * stable_impulse_coefficient(s.alpha);
    }
    return value;
}

double eval_sampled(const Material::Sampled& s, double t) {
    const double lo = s.grid.start;
    const double hi = s.grid.back();
    const double slack = 1e-9 * s.grid.step;
    if (t < lo - slack || t > hi + slack)
        throw InvalidArgument("t = " + std::to_string(t) + " outside the sampled range [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
    const double x = std::clamp((t - lo) / s.grid.step, 0.0, double(s.grid.count - 1));
    const auto i = std::min(static_cast<std::size_t>(x), s.grid.count - 2);
    const double frac = x - static_cast<double>(i);
    return s.values[i] + frac * (s.values[i + 1] - s.values[i]);
}

}  // namespace

double eval_impulse(const Material& material, double t) {
    if (!(t >= 0.0)) throw InvalidArgument("impulse response needs t >= 0");
    if (material.is_analytic()) return eval_rep(material.rep(), t);
    if (const auto* c = material.as_composed())
        return eval_impulse(*c->outer, eval_impulse(*c->inner, t));
    if (const auto* s = material.as_sum()) {
        double value = 0.0;
        for (const auto& term : s->terms) value += eval_impulse(*term, t);
        return value;
    }
    return eval_sampled(*material.as_sampled(), t);
}

double eval_derivative(const Material& material, double t) {
    if (!(t >= 0.0)) throw InvalidArgument("derivative needs t >= 0");
    if (const auto* s = material.as_sum()) {
        double value = 0.0;
        for (const auto& term : s->terms) value += eval_derivative(*term, t);
        return value;
    }
    const auto& rep = material.rep();
    double value = rep.drift_K;
    for (const auto& atom : rep.levy.atoms)
        value += atom.weight * atom.rate * std::exp(-atom.rate * t);
    if (rep.levy.stable) {
        const auto& s = *rep.levy.stable;
        if (t == 0.0) return std::numeric_limits<double>::infinity();
        value += s.scale * std::pow(t, s.alpha - 1.0) / std::tgamma(s.alpha);
    }
    return value;
}

std::complex<double> laplace_fprime_complex(const Material& material, std::complex<double> theta) {
    if (material.is_analytic()) return stieltjes_value(material.rep(), theta);
    if (const auto* s = material.as_sum()) {
        std::complex<double> value = 0.0;
        for (const auto& term : s->terms) value += laplace_fprime_complex(*term, theta);
        return value;
    }
    throw UnsupportedRepresentation("no closed-form Laplace transform for this material");
}

double laplace_fprime(const Material& material, double theta) {
    if (!(theta > 0.0)) throw InvalidArgument("Laplace argument theta must be > 0");
    const auto& rep = material.rep();
    if (rep.is_zero()) throw ZeroMaterial("Laplace transform of a zero material");
    return stieltjes_value(rep, theta);
}

double laplace_fprime_numeric(const Material& material, double theta) {
    if (!(theta > 0.0)) throw InvalidArgument("Laplace argument theta must be > 0");
    if (material.has_closed_form_transform())
        return laplace_fprime_complex(material, {theta, 0.0}).real();
    if (material.as_sampled())
        throw UnsupportedRepresentation("sampled materials have no transform beyond their grid");
    return theta *
           laplace_transform_numeric([&](double t) { return eval_impulse(material, t); }, theta);
}

Material compose(const Material& outer, const Material& inner) {
    return Material::composed(outer, inner);
}

BernsteinCheck check_bernstein_grid(const Material& material, const TimeGrid& grid) {
    const auto f = sample(grid, [&](double t) { return eval_impulse(material, t); });
    double scale = 0.0;
    for (double v : f) scale = std::max(scale, std::abs(v));
    const double tol = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(f[i] >= -tol)) return {false, i, "negative value"};
        if (i + 1 < f.size() && !(f[i + 1] - f[i] >= -tol))
            return {false, i, "decreasing (first difference < 0)"};
        if (i + 2 < f.size() && !(f[i + 2] - 2.0 * f[i + 1] + f[i] <= tol))
            return {false, i, "convex (second difference > 0)"};
    }
    return {};
}

}  // namespace viscolevy
