#include "viscolevy/levy_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "viscolevy/errors.hpp"

namespace viscolevy {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

double uniform01(Rng& rng) { return std::generate_canonical<double, 53>(rng); }

double exponential(Rng& rng, double rate) { return -std::log1p(-uniform01(rng)) / rate; }

/// Runs body(begin, end) over contiguous chunks of [0, n).
template <typename Body>
void parallel_chunks(std::size_t n, unsigned workers, Body&& body) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(n, w * chunk);
        const std::size_t end = std::min(n, begin + chunk);
        if (begin < end) pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& t : pool) t.join();
}

/// Running mean/variance (Welford), entrywise for matrices.
struct MatrixWelford {
    std::size_t n = 0;
    Eigen::MatrixXd mean;
    Eigen::MatrixXd m2;

    void add(const Eigen::MatrixXd& x) {
        if (n == 0) {
            mean = Eigen::MatrixXd::Zero(x.rows(), x.cols());
            m2 = Eigen::MatrixXd::Zero(x.rows(), x.cols());
        }
        ++n;
        const Eigen::MatrixXd delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta.cwiseProduct(x - mean);
    }
    Eigen::MatrixXd standard_error() const {
        if (n < 2) return Eigen::MatrixXd::Zero(mean.rows(), mean.cols());
        const double nn = static_cast<double>(n);
        return (m2.cwiseMax(0.0) / ((nn - 1.0) * nn)).cwiseSqrt();
    }
};

void validate_spec(const SubordinatorSpec& spec) {
    canonicalize(BernsteinRep{spec.start, spec.drift, spec.levy});
}

double total_intensity(const std::vector<LevyAtom>& atoms) {
    double total = 0.0;
    for (const auto& a : atoms) total += a.weight;
    return total;
}

template <typename Weights>
std::size_t pick_atom(Rng& rng, const Weights& weights, double total) {
    const double target = uniform01(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        acc += weights[i];
        if (target < acc) return i;
    }
    return weights.size() - 1;
}

struct SubordinatorDraw {
    std::vector<std::pair<double, double>> jumps;  // (time, size)
    std::vector<double> stable_increments;         // per recording step
};

SubordinatorDraw draw_subordinator(const SubordinatorSpec& spec, double horizon, std::size_t steps,
                                   Rng& rng) {
    SubordinatorDraw draw;
    const double total = total_intensity(spec.levy.atoms);
    if (total > 0.0) {
        std::vector<double> weights;
        for (const auto& a : spec.levy.atoms) weights.push_back(a.weight);
        for (double t = exponential(rng, total); t < horizon; t += exponential(rng, total))
            draw.jumps.emplace_back(t, spec.levy.atoms[pick_atom(rng, weights, total)].rate);
    }
    if (spec.levy.stable) {
        const double alpha = spec.levy.stable->alpha;
        const double kappa = spec.levy.stable->scale * stable_impulse_coefficient(alpha);
        const double dt = horizon / static_cast<double>(steps);
        const double factor = std::pow(kappa * dt, 1.0 / alpha);
        draw.stable_increments.resize(steps);
        for (auto& x : draw.stable_increments) x = factor * sample_positive_stable(alpha, rng);
    }
    return draw;
}

void check_horizon(double horizon) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw InvalidArgument("horizon must be positive and finite");
}

}  // namespace

std::uint64_t path_stream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

Eigen::VectorXd Path::value_at(double t) const {
    if (times.empty() || t < times.front())
        throw InvalidArgument("time outside the recorded path");
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    return values.col(std::distance(times.begin(), it) - 1);
}

void validate(const PaisCharacteristics& c) {
    const auto m = c.start.size();
    if (m == 0) throw InvalidArgument("characteristics need dimension >= 1");
    if (c.sigma.rows() != m || c.sigma.cols() != m)
        throw InvalidArgument("sigma must be m x m with m = dim(start)");
    if (!c.start.allFinite() || !c.sigma.allFinite())
        throw InvalidArgument("characteristics must be finite");
    if (!is_symmetric_psd(c.sigma, 1e-12 * std::max(1.0, c.sigma.cwiseAbs().maxCoeff())))
        throw InvalidArgument("sigma must be symmetric positive semi-definite");
    for (const auto& atom : c.jump_atoms) {
        if (atom.point.size() != m) throw InvalidArgument("jump point has the wrong dimension");
        if (!atom.point.allFinite() || atom.point.squaredNorm() == 0.0)
            throw InvalidArgument("jump points must be nonzero and finite");
        if (!(atom.intensity > 0.0) || !std::isfinite(atom.intensity))
            throw InvalidArgument("jump intensities must be positive and finite");
    }
}

SubordinatorSpec subordinator_from_material(const Material& material) {
    const auto& rep = material.rep();
    return {rep.constant_L, rep.drift_K, rep.levy};
}

Material material_from_subordinator(const SubordinatorSpec& spec) {
    return Material::analytic(BernsteinRep{spec.start, spec.drift, spec.levy});
}

double laplace_exponent(const SubordinatorSpec& spec, double lambda) {
    if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be non-negative");
    double phi = spec.drift * lambda;
    for (const auto& a : spec.levy.atoms) phi += a.weight * -std::expm1(-lambda * a.rate);
    if (spec.levy.stable)
        phi += spec.levy.stable->scale * stable_impulse_coefficient(spec.levy.stable->alpha) *
               std::pow(lambda, spec.levy.stable->alpha);
    return phi;
}

Path sample_path(const SubordinatorSpec& spec, double horizon, std::uint64_t seed,
                 const SimulationOptions& options) {
    validate_spec(spec);
    check_horizon(horizon);
    const std::size_t steps = std::max<std::size_t>(1, options.record_steps);
    Rng rng(path_stream_seed(seed, 0));
    const auto draw = draw_subordinator(spec, horizon, steps, rng);

    std::vector<double> times;
    for (std::size_t k = 0; k <= steps; ++k)
        times.push_back(k == steps ? horizon : horizon * static_cast<double>(k) / steps);
    for (const auto& [t, x] : draw.jumps) times.push_back(t);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    Path path;
    path.times = times;
    path.values.resize(1, static_cast<Eigen::Index>(times.size()));
    std::size_t next_jump = 0, next_step = 1;
    double jump_sum = 0.0, stable_sum = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        while (next_jump < draw.jumps.size() && draw.jumps[next_jump].first <= t)
            jump_sum += draw.jumps[next_jump++].second;
        while (!draw.stable_increments.empty() && next_step <= steps &&
               horizon * static_cast<double>(next_step) / steps <= t)
            stable_sum += draw.stable_increments[next_step++ - 1];
        path.values(0, static_cast<Eigen::Index>(i)) =
            spec.start + spec.drift * t + jump_sum + stable_sum;
    }
    for (const auto& [t, x] : draw.jumps) path.jumps.push_back({t, Eigen::VectorXd::Constant(1, x)});
    path.continuous_terminal = Eigen::VectorXd::Zero(1);
    path.continuous_realized_qv = Eigen::MatrixXd::Zero(1, 1);
    return path;
}

McEstimate mc_laplace_check(const SubordinatorSpec& spec, double lambda, double tau,
                            std::size_t n_paths, std::uint64_t seed,
                            const SimulationOptions& options) {
    validate_spec(spec);
    check_horizon(tau);
    if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be non-negative");
    if (n_paths < 100) throw InvalidArgument("mc_laplace_check needs at least 100 paths");

    // The terminal increment is drawn directly: one stable draw over [0, tau]
    // has the same law as the sum over any recording grid.
    const double drift_exponent = tau * (spec.drift * lambda);
    std::vector<double> samples(n_paths);
    parallel_chunks(n_paths, options.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            Rng rng(path_stream_seed(seed, k));
            const auto draw = draw_subordinator(spec, tau, 1, rng);
            double random_part = 0.0;
            for (const auto& [t, x] : draw.jumps) random_part += x;
            for (double x : draw.stable_increments) random_part += x;
            samples[k] = std::exp(-(drift_exponent + lambda * random_part));
        }
    });

    MatrixWelford acc;
    Eigen::MatrixXd x(1, 1);
    for (double s : samples) {
        x(0, 0) = s;
        acc.add(x);
    }
    McEstimate out;
    out.estimate = acc.mean(0, 0);
    out.stderr_ = acc.standard_error()(0, 0);
    out.analytic = std::exp(-tau * laplace_exponent(spec, lambda));
    out.paths = n_paths;
    return out;
}

MatrixMaterialD material_from_characteristics(const PaisCharacteristics& c) {
    validate(c);
    auto out = MatrixMaterialD::zero(c.dim());
    out.const_K = c.start * c.start.transpose();
    out.drift_L = (c.sigma + c.sigma.transpose()) / 2.0;
    for (const auto& atom : c.jump_atoms) {
        const double rate = atom.point.squaredNorm();
        const Eigen::MatrixXd J = atom.intensity * atom.point * atom.point.transpose() / rate;
        auto same = std::find_if(out.spectral_atoms.begin(), out.spectral_atoms.end(),
                                 [rate](const auto& a) { return a.rate == rate; });
        if (same != out.spectral_atoms.end())
            same->J += J;
        else
            out.spectral_atoms.push_back({rate, J});
    }
    std::sort(out.spectral_atoms.begin(), out.spectral_atoms.end(),
              [](const auto& a, const auto& b) { return a.rate < b.rate; });
    return out;
}

PaisCharacteristics characteristics_from_material(const Material& material) {
    const auto& rep = material.rep();
    if (rep.levy.stable)
        throw UnsupportedRepresentation(
            "characteristics_from_material needs a finite-activity (atoms-only) material");
    PaisCharacteristics c;
    c.start = Eigen::VectorXd::Constant(1, std::sqrt(rep.constant_L));
    c.sigma = Eigen::MatrixXd::Constant(1, 1, rep.drift_K);
    for (const auto& atom : rep.levy.atoms)
        c.jump_atoms.push_back({Eigen::VectorXd::Constant(1, std::sqrt(atom.rate)), atom.weight});
    return c;
}

namespace {

Path sample_pais_with(const PaisCharacteristics& c, double horizon, std::size_t n_gauss_steps,
                      const Eigen::MatrixXd& factor, bool gaussian, Rng& rng) {
    const auto m = c.dim();
    const std::size_t steps = std::max<std::size_t>(1, n_gauss_steps);

    std::vector<std::pair<double, std::size_t>> jumps;
    double total = 0.0;
    std::vector<double> weights;
    for (const auto& a : c.jump_atoms) {
        total += a.intensity;
        weights.push_back(a.intensity);
    }
    if (total > 0.0)
        for (double t = exponential(rng, total); t < horizon; t += exponential(rng, total))
            jumps.emplace_back(t, pick_atom(rng, weights, total));

    std::vector<Eigen::VectorXd> increments;
    Eigen::VectorXd terminal = Eigen::VectorXd::Zero(m);
    Eigen::MatrixXd qv = Eigen::MatrixXd::Zero(m, m);
    if (gaussian) {
        std::normal_distribution<double> normal;
        const double sqrt_dt = std::sqrt(horizon / static_cast<double>(steps));
        Eigen::VectorXd z(m);
        for (std::size_t k = 0; k < steps; ++k) {
            for (Eigen::Index i = 0; i < m; ++i) z(i) = normal(rng);
            increments.push_back(sqrt_dt * (factor * z));
            terminal += increments.back();
            qv += increments.back() * increments.back().transpose();
        }
    }

    std::vector<double> times;
    for (std::size_t k = 0; k <= steps; ++k)
        times.push_back(k == steps ? horizon : horizon * static_cast<double>(k) / steps);
    for (const auto& [t, i] : jumps) times.push_back(t);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    Path path;
    path.times = times;
    path.values.resize(m, static_cast<Eigen::Index>(times.size()));
    Eigen::VectorXd level = c.start;
    std::size_t next_jump = 0, next_step = 1;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        while (next_jump < jumps.size() && jumps[next_jump].first <= t)
            level += c.jump_atoms[jumps[next_jump++].second].point;
        while (gaussian && next_step <= steps && horizon * static_cast<double>(next_step) / steps <= t)
            level += increments[next_step++ - 1];
        path.values.col(static_cast<Eigen::Index>(i)) = level;
    }
    for (const auto& [t, i] : jumps) path.jumps.push_back({t, c.jump_atoms[i].point});
    path.continuous_terminal = terminal;
    path.continuous_realized_qv = qv;
    return path;
}

Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& sigma) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig((sigma + sigma.transpose()) / 2.0);
    return eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

void path_contribution(const Path& path, std::span<const double> times, ContinuousTerm term,
                       std::vector<Eigen::MatrixXd>& out) {
    if (!path.has_jump_records)
        throw MissingJumpRecords("path has no jump records; the estimator needs them");
    if (path.times.empty() || std::abs(path.horizon() - 1.0) > 1e-12)
        throw InvalidArgument("the material estimator needs paths on [0, 1]");
    const auto m = path.dim();
    const Eigen::VectorXd y0 = path.values.col(0);
    Eigen::MatrixXd continuous;
    if (term == ContinuousTerm::terminal_square) {
        if (path.continuous_terminal.size() != m)
            throw InvalidArgument("path lacks its continuous terminal value");
        continuous = path.continuous_terminal * path.continuous_terminal.transpose();
    } else {
        if (path.continuous_realized_qv.rows() != m)
            throw InvalidArgument("path lacks its realized quadratic variation");
        continuous = path.continuous_realized_qv;
    }
    const Eigen::MatrixXd base = y0 * y0.transpose();
    out.resize(times.size());
    for (std::size_t g = 0; g < times.size(); ++g) out[g] = base + times[g] * continuous;
    for (const auto& jump : path.jumps) {
        const double norm2 = jump.size.squaredNorm();
        if (norm2 == 0.0) continue;
        const Eigen::MatrixXd shape = jump.size * jump.size.transpose() / norm2;
        for (std::size_t g = 0; g < times.size(); ++g)
            out[g] += -std::expm1(-times[g] * norm2) * shape;
    }
}

/// Block-wise parallel evaluation, aggregated in path-index order.
template <typename Contribution>
MaterialEstimate aggregate(std::size_t n_paths, std::span<const double> times, unsigned workers,
                           Contribution&& contribution) {
    constexpr std::size_t block = 4096;
    std::vector<MatrixWelford> acc(times.size());
    std::vector<std::vector<Eigen::MatrixXd>> buffer(std::min(block, n_paths));
    for (std::size_t first = 0; first < n_paths; first += block) {
        const std::size_t count = std::min(block, n_paths - first);
        parallel_chunks(count, workers, [&](std::size_t begin, std::size_t end) {
            for (std::size_t k = begin; k < end; ++k) contribution(first + k, buffer[k]);
        });
        for (std::size_t k = 0; k < count; ++k)
            for (std::size_t g = 0; g < times.size(); ++g) acc[g].add(buffer[k][g]);
    }
    MaterialEstimate out;
    out.times.assign(times.begin(), times.end());
    out.paths = n_paths;
    for (const auto& a : acc) {
        out.mean.push_back(a.mean);
        out.stderr_.push_back(a.standard_error());
    }
    return out;
}

void check_estimate_inputs(std::size_t n_paths, std::span<const double> times) {
    if (n_paths == 0) throw InvalidArgument("the estimator needs at least one path");
    for (double t : times)
        if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("estimate times must be >= 0");
}

}  // namespace

Path sample_pais_path(const PaisCharacteristics& c, double horizon, std::size_t n_gauss_steps,
                      std::uint64_t seed) {
    validate(c);
    check_horizon(horizon);
    Rng rng(path_stream_seed(seed, 0));
    const bool gaussian = c.sigma.cwiseAbs().maxCoeff() > 0.0;
    return sample_pais_with(c, horizon, n_gauss_steps, covariance_factor(c.sigma), gaussian, rng);
}

MaterialEstimate estimate_material_from_paths(std::span<const Path> paths,
                                              std::span<const double> times, ContinuousTerm term,
                                              unsigned workers) {
    check_estimate_inputs(paths.size(), times);
    const auto m = paths.front().dim();
    for (const auto& p : paths)
        if (p.dim() != m) throw InvalidArgument("paths must share one dimension");
    return aggregate(paths.size(), times, workers,
                     [&](std::size_t k, std::vector<Eigen::MatrixXd>& out) {
                         path_contribution(paths[k], times, term, out);
                     });
}

MaterialEstimate estimate_material(const PaisCharacteristics& c, std::span<const double> times,
                                   std::size_t n_paths, std::uint64_t seed,
                                   std::size_t n_gauss_steps, ContinuousTerm term,
                                   unsigned workers) {
    validate(c);
    check_estimate_inputs(n_paths, times);
    const Eigen::MatrixXd factor = covariance_factor(c.sigma);
    const bool gaussian = c.sigma.cwiseAbs().maxCoeff() > 0.0;
    return aggregate(n_paths, times, workers, [&](std::size_t k, std::vector<Eigen::MatrixXd>& out) {
        Rng rng(path_stream_seed(seed, k));
        const Path path = sample_pais_with(c, 1.0, n_gauss_steps, factor, gaussian, rng);
        path_contribution(path, times, term, out);
    });
}

}  // namespace viscolevy
