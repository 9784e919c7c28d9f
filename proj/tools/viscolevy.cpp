// viscolevy: command-line front end.
//
// Exit codes: 0 success / verification passed, 1 input or numeric error,
// 2 verification failed.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "viscolevy/conjugation.hpp"
#include "viscolevy/errors.hpp"
#include "viscolevy/finite_network.hpp"
#include "viscolevy/levy_sim.hpp"
#include "viscolevy/materials.hpp"
#include "viscolevy/spec_io.hpp"

using namespace viscolevy;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitVerification = 2;

struct Options {
    std::vector<std::string> materials;
    std::string grid;
    std::uint64_t seed = 1;
    std::size_t paths = 10000;
    std::string out;
    std::string format = "csv";
    unsigned workers = 1;
    double tolerance = -1.0;  // < 0: command default

    std::string load;
    std::string network;
    std::string process;
    std::string mode = "creep";
    double lambda = 1.0;
    double tau = 1.0;
    double horizon = 1.0;
    std::size_t steps = 64;
    std::size_t gauss_steps = 8;
    std::string term = "terminal_square";
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw InvalidArgument("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::vector<Material> materials_of(const Options& o, std::size_t min_count, std::size_t max_count) {
    if (o.materials.size() < min_count || o.materials.size() > max_count) {
        const std::string expected =
            min_count == max_count ? std::to_string(min_count)
                                   : std::to_string(min_count) + (max_count == SIZE_MAX
                                                                      ? " or more"
                                                                      : " to " + std::to_string(max_count));
        throw InvalidArgument("expected " + expected + " --material file(s), got " +
                              std::to_string(o.materials.size()));
    }
    std::vector<Material> out;
    for (const auto& path : o.materials) out.push_back(load_material(path));
    return out;
}

TimeGrid grid_of(const Options& o) {
    if (o.grid.empty()) throw InvalidArgument("--grid start:step:count is required");
    return parse_grid(o.grid);
}

double tolerance_or(const Options& o, double fallback) {
    return o.tolerance >= 0.0 ? o.tolerance : fallback;
}

void require_format(const Options& o, std::initializer_list<std::string_view> allowed) {
    for (auto f : allowed)
        if (o.format == f) return;
    throw InvalidArgument("--format " + o.format + " is not available for this command");
}

void write_json(const Options& o, const json& doc) {
    Output out(o.out);
    out.stream() << doc.dump(2) << '\n';
}

void write_curve(const Options& o, const std::vector<double>& t, const std::vector<double>& v,
                 json extra = json::object()) {
    Output out(o.out);
    if (o.format == "json") {
        extra["t"] = t;
        extra["value"] = v;
        out.stream() << extra.dump(2) << '\n';
    } else {
        write_curve_csv(out.stream(), t, v);
    }
}

/// {op, residual, tolerance, pass}; returns the exit code.
int report(const Options& o, const std::string& op, double residual, double tolerance,
           json extra = json::object()) {
    const bool pass = std::isfinite(residual) && residual <= tolerance;
    json doc = {{"op", op}, {"residual", residual}, {"tolerance", tolerance}, {"pass", pass}};
    doc.update(extra);
    write_json(o, doc);
    return pass ? 0 : kExitVerification;
}

// --- commands ---------------------------------------------------------------

int cmd_eval(const Options& o) {
    require_format(o, {"csv", "json"});
    const auto m = materials_of(o, 1, 1).front();
    const auto grid = grid_of(o);
    write_curve(o, grid.points(), sample(grid, [&](double t) { return eval_impulse(m, t); }));
    return 0;
}

int cmd_conjugate(const Options& o) {
    require_format(o, {"csv", "json"});
    write_json(o, material_to_json(conjugate(materials_of(o, 1, 1).front())));
    return 0;
}

int cmd_relax(const Options& o) {
    require_format(o, {"csv", "json"});
    const auto m = materials_of(o, 1, 1).front();
    const auto grid = grid_of(o);
    std::vector<double> values;
    double beta = 0.0;
    const bool exact = m.is_analytic() && (m.rep().atoms_only() || m.rep().pure_stable());
    if (exact) {
        const auto r = relaxation_rep(m);
        beta = r.beta;
        values = sample(grid, [&](double t) { return r.regular(t); });
    } else {
        const auto curve = relaxation_curve_numeric(m, grid);
        beta = curve.beta;
        values = curve.regular;
    }
    if (o.format == "csv" && beta != 0.0)
        std::cerr << "note: instantaneous relaxation mass beta = " << format_number(beta)
                  << " (a beta delta_0 term not shown in the curve)\n";
    write_curve(o, grid.points(), values, {{"beta", beta}, {"exact", exact}});
    return 0;
}

int cmd_series(const Options& o) {
    const auto ms = materials_of(o, 2, SIZE_MAX);
    Material out = ms.front();
    for (std::size_t i = 1; i < ms.size(); ++i) out = series(out, ms[i]);
    write_json(o, material_to_json(out));
    return 0;
}

int cmd_parallel(const Options& o) {
    const auto ms = materials_of(o, 2, SIZE_MAX);
    std::optional<TimeGrid> grid;
    if (!o.grid.empty()) grid = grid_of(o);
    Material out = ms.front();
    for (std::size_t i = 1; i < ms.size(); ++i)
        out = grid ? parallel(out, ms[i], *grid) : parallel(out, ms[i]);
    write_json(o, material_to_json(out));
    return 0;
}

int cmd_compose(const Options& o) {
    const auto ms = materials_of(o, 2, 2);
    write_json(o, material_to_json(compose(ms[0], ms[1])));
    return 0;
}

int cmd_respond(const Options& o) {
    require_format(o, {"csv", "json"});
    const auto m = materials_of(o, 1, 1).front();
    const auto grid = grid_of(o);
    if (o.load.empty()) throw InvalidArgument("--load FILE is required");
    const auto loads = load_loads(o.load);
    if (loads.size() != 1) throw InvalidArgument("respond takes a single load history");
    if (o.mode == "creep") {
        write_curve(o, grid.points(), respond_creep(m, loads.front(), grid));
    } else if (o.mode == "relaxation") {
        const auto r = respond_relaxation(m, loads.front(), grid);
        json impulses = json::array();
        for (const auto& i : r.impulses) impulses.push_back({{"time", i.time}, {"mass", i.mass}});
        if (o.format == "csv")
            for (const auto& i : r.impulses)
                std::cerr << "note: impulse of mass " << format_number(i.mass) << " at t = "
                          << format_number(i.time) << '\n';
        write_curve(o, grid.points(), r.values, {{"beta", r.beta}, {"impulses", impulses}});
    } else {
        throw InvalidArgument("--mode must be creep or relaxation");
    }
    return 0;
}

int cmd_network(const Options& o) {
    if (o.network.empty()) throw InvalidArgument("--network FILE is required");
    const auto pair = load_network(o.network);
    const auto material = material_from_quadratic_forms(pair);
    const auto grid = grid_of(o);
    if (!o.load.empty()) {
        const auto loads = load_loads(o.load);
        const double residual = verify_evolution(pair, material, loads, grid);
        return report(o, "network", residual, tolerance_or(o, 1e-4));
    }
    require_format(o, {"csv", "json"});
    std::vector<Eigen::MatrixXd> values;
    for (double t : grid.points()) values.push_back(eval_impulse(material, t));
    Output out(o.out);
    if (o.format == "csv") {
        write_matrix_csv(out.stream(), grid.points(), values);
    } else {
        json atoms = json::array();
        auto rows = [](const Eigen::MatrixXd& m) {
            json r = json::array();
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                json row = json::array();
                for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
                r.push_back(row);
            }
            return r;
        };
        for (const auto& a : material.spectral_atoms) atoms.push_back({{"rate", a.rate}, {"J", rows(a.J)}});
        out.stream() << json{{"const_K", rows(material.const_K)},
                             {"drift_L", rows(material.drift_L)},
                             {"atoms", atoms}}
                            .dump(2)
                     << '\n';
    }
    return 0;
}

int cmd_simulate(const Options& o) {
    require_format(o, {"csv"});
    Output out(o.out);
    if (!o.process.empty()) {
        if (!o.materials.empty()) throw InvalidArgument("give either --material or --process");
        write_path_csv(out.stream(), sample_pais_path(load_process(o.process), o.horizon,
                                                      o.gauss_steps, o.seed));
        return 0;
    }
    const auto spec = subordinator_from_material(materials_of(o, 1, 1).front());
    write_path_csv(out.stream(), sample_path(spec, o.horizon, o.seed, {o.workers, o.steps}));
    return 0;
}

int cmd_mc_check(const Options& o) {
    const auto spec = subordinator_from_material(materials_of(o, 1, 1).front());
    const auto e = mc_laplace_check(spec, o.lambda, o.tau, o.paths, o.seed, {o.workers, o.steps});
    const double k = tolerance_or(o, 4.0);
    return report(o, "mc-check", std::abs(e.estimate - e.analytic), k * e.stderr_,
                  {{"estimate", e.estimate},
                   {"stderr", e.stderr_},
                   {"analytic", e.analytic},
                   {"paths", e.paths},
                   {"seed", o.seed}});
}

int cmd_estimate(const Options& o) {
    if (o.process.empty()) throw InvalidArgument("--process FILE is required");
    const auto c = load_process(o.process);
    const auto times = grid_of(o).points();
    ContinuousTerm term;
    if (o.term == "terminal_square")
        term = ContinuousTerm::terminal_square;
    else if (o.term == "realized_variance")
        term = ContinuousTerm::realized_variance;
    else
        throw InvalidArgument("--term must be terminal_square or realized_variance");
    const auto est = estimate_material(c, times, o.paths, o.seed, o.gauss_steps, term, o.workers);
    if (o.format == "csv") {
        Output out(o.out);
        write_matrix_csv(out.stream(), times, est.mean);
        return 0;
    }
    require_format(o, {"json"});
    // Largest deviation from the closed form, in standard errors.
    const auto exact = material_from_characteristics(c);
    double worst = 0.0;
    for (std::size_t g = 0; g < times.size(); ++g) {
        const Eigen::MatrixXd f = eval_impulse(exact, times[g]);
        for (Eigen::Index i = 0; i < f.rows(); ++i)
            for (Eigen::Index j = 0; j < f.cols(); ++j) {
                const double diff = std::abs(est.mean[g](i, j) - f(i, j));
                const double se = est.stderr_[g](i, j);
                worst = std::max(worst, se > 0.0 ? diff / se : (diff <= 1e-12 ? 0.0 : INFINITY));
            }
    }
    return report(o, "estimate", worst, tolerance_or(o, 4.0),
                  {{"paths", est.paths}, {"seed", o.seed}, {"unit", "standard errors"}});
}

int cmd_verify(const Options& o) {
    const auto ms = materials_of(o, 1, 2);
    const Material partner = ms.size() == 2 ? ms[1] : conjugate(ms[0]);
    const double residual = verify_conjugation(ms[0], partner, grid_of(o));
    return report(o, "verify", residual, tolerance_or(o, 1e-4));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Viscoelastic materials and their Levy processes."};
    app.require_subcommand(1);
    Options o;

    auto material = [&](CLI::App* c, const char* help) {
        c->add_option("--material,-m", o.materials, help)->check(CLI::ExistingFile);
    };
    auto grid = [&](CLI::App* c, bool required) {
        auto* opt = c->add_option("--grid,-g", o.grid, "time grid start:step:count");
        if (required) opt->required();
    };
    auto out = [&](CLI::App* c) { c->add_option("--out,-o", o.out, "output file (default stdout)"); };
    auto format = [&](CLI::App* c) {
        c->add_option("--format", o.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
    };
    auto tolerance = [&](CLI::App* c, const char* help) { c->add_option("--tolerance", o.tolerance, help); };
    auto sim = [&](CLI::App* c) {
        c->add_option("--seed", o.seed, "random seed")->capture_default_str();
        c->add_option("--workers", o.workers, "worker threads (0 = all cores); results do not depend on it")
            ->capture_default_str();
    };

    std::vector<std::pair<CLI::App*, std::function<int(const Options&)>>> commands;
    auto command = [&](const char* name, const char* help, std::function<int(const Options&)> run) {
        auto* c = app.add_subcommand(name, help);
        commands.emplace_back(c, std::move(run));
        return c;
    };

    auto* eval = command("eval", "impulse response f(t) on a grid", cmd_eval);
    material(eval, "material spec (JSON)");
    grid(eval, true);
    out(eval);
    format(eval);

    auto* conj = command("conjugate", "conjugate material (f1 * f2 = t^2/2) as a spec", cmd_conjugate);
    material(conj, "material spec (JSON)");
    out(conj);

    auto* relax = command("relax", "relaxation function r(t) on a grid", cmd_relax);
    material(relax, "material spec (JSON)");
    grid(relax, true);
    out(relax);
    format(relax);

    auto* ser = command("series", "series coupling of two or more materials", cmd_series);
    material(ser, "material specs, repeat the flag");
    out(ser);

    auto* par = command("parallel", "parallel coupling of two or more materials", cmd_parallel);
    material(par, "material specs, repeat the flag");
    grid(par, false);
    out(par);

    auto* comp = command("compose", "composition outer(inner(t))", cmd_compose);
    material(comp, "outer then inner material spec");
    out(comp);

    auto* respond = command("respond", "response to a load history", cmd_respond);
    material(respond, "material spec (JSON)");
    grid(respond, true);
    respond->add_option("--load,-l", o.load, "load history (JSON)")->check(CLI::ExistingFile);
    respond->add_option("--mode", o.mode, "creep (force in) or relaxation (strain in)")
        ->check(CLI::IsMember({"creep", "relaxation"}))
        ->capture_default_str();
    out(respond);
    format(respond);

    auto* net = command("network", "matrix impulse response of a finite network", cmd_network);
    net->add_option("--network,-n", o.network, "quadratic forms A, B and observables (JSON)")
        ->check(CLI::ExistingFile);
    net->add_option("--load,-l", o.load, "loads per observable; runs the time-stepping check")
        ->check(CLI::ExistingFile);
    grid(net, true);
    tolerance(net, "time-stepping tolerance (default 1e-4)");
    out(net);
    format(net);

    auto* simulate = command("simulate", "one sample path as CSV (time, value, is_jump)", cmd_simulate);
    material(simulate, "material spec: simulates its subordinator");
    simulate->add_option("--process", o.process, "process characteristics (JSON)")
        ->check(CLI::ExistingFile);
    simulate->add_option("--horizon", o.horizon, "path length")->capture_default_str();
    simulate->add_option("--steps", o.steps, "recording steps (subordinator)")->capture_default_str();
    simulate->add_option("--gauss-steps", o.gauss_steps, "Gaussian increments (process)")
        ->capture_default_str();
    sim(simulate);
    out(simulate);
    format(simulate);

    auto* mc = command("mc-check", "Monte Carlo check of E exp(-lambda (X_tau - X_0))", cmd_mc_check);
    material(mc, "material spec (JSON)");
    mc->add_option("--lambda", o.lambda, "Laplace variable")->capture_default_str();
    mc->add_option("--tau", o.tau, "time")->capture_default_str();
    mc->add_option("--paths", o.paths, "number of paths (>= 100)")->capture_default_str();
    tolerance(mc, "pass band in standard errors (default 4)");
    sim(mc);
    out(mc);

    auto* est = command("estimate", "material of a process estimated from paths", cmd_estimate);
    est->add_option("--process", o.process, "process characteristics (JSON)")->check(CLI::ExistingFile);
    grid(est, true);
    est->add_option("--paths", o.paths, "number of paths")->capture_default_str();
    est->add_option("--gauss-steps", o.gauss_steps, "Gaussian increments per path")
        ->capture_default_str();
    est->add_option("--term", o.term, "continuous term: terminal_square or realized_variance")
        ->capture_default_str();
    tolerance(est, "json report: pass band in standard errors (default 4)");
    sim(est);
    out(est);
    format(est);

    auto* verify = command("verify", "residual of f1 * f2 against t^2/2", cmd_verify);
    material(verify, "material, and optionally its claimed conjugate");
    grid(verify, true);
    tolerance(verify, "pass threshold (default 1e-4)");
    out(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        for (const auto& [sub, run] : commands)
            if (sub->parsed()) return run(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.name() << ": " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
