#include "viscolevy/spec_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "viscolevy/errors.hpp"

namespace viscolevy {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// JSON pointer -> source line, for diagnostics. Runs only on text that
// already parsed, so it can be lenient.

class LineIndex {
public:
    explicit LineIndex(std::string_view text) : text_(text) {
        skip_ws();
        value("");
    }

    int line_of(std::string pointer) const {
        for (;;) {
            if (auto it = lines_.find(pointer); it != lines_.end()) return it->second;
            if (pointer.empty()) return 1;
            pointer.erase(pointer.rfind('/'));
        }
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    std::map<std::string, int> lines_;

    bool done() const { return pos_ >= text_.size(); }
    char peek() const { return done() ? '\0' : text_[pos_]; }
    void advance() {
        if (text_[pos_] == '\n') ++line_;
        ++pos_;
    }
    void skip_ws() {
        while (!done() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    std::string string() {
        std::string out;
        advance();  // opening quote
        while (!done() && peek() != '"') {
            if (peek() == '\\') {
                advance();
                if (done()) break;
            }
            out.push_back(peek());
            advance();
        }
        if (!done()) advance();
        return out;
    }

    static std::string escape(const std::string& key) {
        std::string out;
        for (char c : key) {
            if (c == '~')
                out += "~0";
            else if (c == '/')
                out += "~1";
            else
                out.push_back(c);
        }
        return out;
    }

    void value(const std::string& pointer) {
        lines_.emplace(pointer, line_);
        const char c = peek();
        if (c == '{') {
            advance();
            skip_ws();
            while (!done() && peek() != '}') {
                const std::string key = string();
                skip_ws();
                if (peek() == ':') advance();
                skip_ws();
                value(pointer + "/" + escape(key));
                skip_ws();
                if (peek() == ',') advance();
                skip_ws();
            }
            if (!done()) advance();
        } else if (c == '[') {
            advance();
            skip_ws();
            for (std::size_t i = 0; !done() && peek() != ']'; ++i) {
                value(pointer + "/" + std::to_string(i));
                skip_ws();
                if (peek() == ',') advance();
                skip_ws();
            }
            if (!done()) advance();
        } else if (c == '"') {
            string();
        } else {
            while (!done() && peek() != ',' && peek() != '}' && peek() != ']' &&
                   !std::isspace(static_cast<unsigned char>(peek())))
                advance();
        }
    }
};

// ---------------------------------------------------------------------------

class Reader {
public:
    Reader(std::string_view text, std::string source) : source_(std::move(source)), lines_(text) {}

    [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
        throw SpecError(source_ + ":" + std::to_string(lines_.line_of(pointer)) + ": " +
                        (pointer.empty() ? std::string("/") : pointer) + ": " + message);
    }

    void expect_object(const json& j, const std::string& ptr) const {
        if (!j.is_object()) fail(ptr, "expected an object");
    }

    void allow_keys(const json& j, const std::string& ptr,
                    std::initializer_list<std::string_view> keys) const {
        for (const auto& [key, _] : j.items())
            if (std::find(keys.begin(), keys.end(), key) == keys.end())
                fail(ptr + "/" + key, "unknown field \"" + key + "\"");
    }

    void check_version(const json& j, const std::string& ptr, bool required) const {
        if (!j.contains("version")) {
            if (required) fail(ptr, "missing field \"version\" (expected " +
                                        std::to_string(kSpecVersion) + ")");
            return;
        }
        const auto& v = j.at("version");
        if (!v.is_number_integer() || v.get<long long>() != kSpecVersion)
            fail(ptr + "/version", "unsupported version (expected " +
                                       std::to_string(kSpecVersion) + ")");
    }

    const json& field(const json& j, const std::string& ptr, const char* key) const {
        if (!j.contains(key)) fail(ptr, std::string("missing field \"") + key + "\"");
        return j.at(key);
    }

    double number(const json& j, const std::string& ptr) const {
        if (!j.is_number()) fail(ptr, "expected a number");
        const double x = j.get<double>();
        if (!std::isfinite(x)) fail(ptr, "expected a finite number");
        return x;
    }

    double number(const json& obj, const std::string& ptr, const char* key) const {
        return number(field(obj, ptr, key), ptr + "/" + key);
    }

    double positive(const json& obj, const std::string& ptr, const char* key) const {
        const double x = number(obj, ptr, key);
        if (!(x > 0.0)) fail(ptr + "/" + key, std::string(key) + " must be > 0");
        return x;
    }

    double stable_index(const json& obj, const std::string& ptr) const {
        const double x = number(obj, ptr, "alpha");
        if (!(x > 0.0 && x < 1.0)) fail(ptr + "/alpha", "alpha must lie in (0, 1)");
        return x;
    }

    double number_or(const json& obj, const std::string& ptr, const char* key, double fallback) const {
        return obj.contains(key) ? number(obj.at(key), ptr + "/" + key) : fallback;
    }

    Eigen::VectorXd vector(const json& j, const std::string& ptr) const {
        if (!j.is_array() || j.empty()) fail(ptr, "expected a non-empty array of numbers");
        Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
        for (std::size_t i = 0; i < j.size(); ++i)
            v(static_cast<Eigen::Index>(i)) = number(j[i], ptr + "/" + std::to_string(i));
        return v;
    }

    Eigen::MatrixXd matrix(const json& j, const std::string& ptr) const {
        if (!j.is_array() || j.empty()) fail(ptr, "expected a non-empty array of rows");
        const std::size_t rows = j.size();
        if (!j[0].is_array()) fail(ptr + "/0", "expected a row array");
        const std::size_t cols = j[0].size();
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (std::size_t r = 0; r < rows; ++r) {
            const std::string row_ptr = ptr + "/" + std::to_string(r);
            if (!j[r].is_array() || j[r].size() != cols)
                fail(row_ptr, "rows must all have " + std::to_string(cols) + " entries");
            for (std::size_t c = 0; c < cols; ++c)
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    number(j[r][c], row_ptr + "/" + std::to_string(c));
        }
        return m;
    }

    TimeGrid grid(const json& j, const std::string& ptr) const {
        try {
            if (j.is_string()) return parse_grid(j.get<std::string>());
            expect_object(j, ptr);
            allow_keys(j, ptr, {"start", "step", "count"});
            const auto& count = field(j, ptr, "count");
            if (!count.is_number_unsigned()) fail(ptr + "/count", "expected a positive integer");
            return TimeGrid::uniform(number(j, ptr, "start"), number(j, ptr, "step"),
                                     count.get<std::size_t>());
        } catch (const SpecError&) {
            throw;
        } catch (const Error& e) {
            fail(ptr, e.what());
        }
    }

    Material material(const json& j, const std::string& ptr) const {
        expect_object(j, ptr);
        check_version(j, ptr, ptr.empty());
        const auto& kind_json = field(j, ptr, "kind");
        if (!kind_json.is_string()) fail(ptr + "/kind", "expected a string");
        const std::string kind = kind_json.get<std::string>();
        try {
            return build(j, ptr, kind);
        } catch (const SpecError&) {
            throw;
        } catch (const Error& e) {
            fail(ptr, e.name() + ": " + e.what());
        }
    }

    LoadHistory load(const json& j, const std::string& ptr) const {
        expect_object(j, ptr);
        allow_keys(j, ptr, {"version", "steps", "ramps"});
        std::vector<LoadStep> steps;
        std::vector<LoadRamp> ramps;
        if (j.contains("steps")) {
            const auto& arr = j.at("steps");
            if (!arr.is_array()) fail(ptr + "/steps", "expected an array");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const std::string p = ptr + "/steps/" + std::to_string(i);
                expect_object(arr[i], p);
                allow_keys(arr[i], p, {"time", "jump"});
                steps.push_back({number(arr[i], p, "time"), number(arr[i], p, "jump")});
            }
        }
        if (j.contains("ramps")) {
            const auto& arr = j.at("ramps");
            if (!arr.is_array()) fail(ptr + "/ramps", "expected an array");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const std::string p = ptr + "/ramps/" + std::to_string(i);
                expect_object(arr[i], p);
                allow_keys(arr[i], p, {"start", "end", "rate"});
                ramps.push_back(
                    {number(arr[i], p, "start"), number(arr[i], p, "end"), number(arr[i], p, "rate")});
            }
        }
        try {
            return LoadHistory(std::move(steps), std::move(ramps));
        } catch (const Error& e) {
            fail(ptr, e.what());
        }
    }

private:
    std::string source_;
    LineIndex lines_;

    std::vector<Material> children(const json& j, const std::string& ptr, std::size_t min_count,
                                   std::size_t max_count) const {
        const auto& arr = field(j, ptr, "children");
        if (!arr.is_array() || arr.size() < min_count || arr.size() > max_count)
            fail(ptr + "/children",
                 min_count == max_count
                     ? "expected exactly " + std::to_string(min_count) + " children"
                     : "expected at least " + std::to_string(min_count) + " children");
        std::vector<Material> out;
        for (std::size_t i = 0; i < arr.size(); ++i)
            out.push_back(material(arr[i], ptr + "/children/" + std::to_string(i)));
        return out;
    }

    std::optional<StableComponent> stable_part(const json& j, const std::string& ptr) const {
        expect_object(j, ptr);
        allow_keys(j, ptr, {"alpha", "c"});
        return StableComponent{stable_index(j, ptr), positive(j, ptr, "c")};
    }

    Material build(const json& j, const std::string& ptr, const std::string& kind) const {
        if (kind == "spring") {
            allow_keys(j, ptr, {"version", "kind", "a"});
            return spring(positive(j, ptr, "a"));
        }
        if (kind == "dashpot") {
            allow_keys(j, ptr, {"version", "kind", "a"});
            return dashpot(positive(j, ptr, "a"));
        }
        if (kind == "maxwell") {
            allow_keys(j, ptr, {"version", "kind", "modulus", "viscosity"});
            return maxwell(positive(j, ptr, "modulus"), positive(j, ptr, "viscosity"));
        }
        if (kind == "kelvin_voigt") {
            allow_keys(j, ptr, {"version", "kind", "a", "b"});
            return kelvin_voigt(positive(j, ptr, "a"), positive(j, ptr, "b"));
        }
        if (kind == "stable") {
            allow_keys(j, ptr, {"version", "kind", "alpha", "c"});
            return stable_material(stable_index(j, ptr), positive(j, ptr, "c"));
        }
        if (kind == "prony") {
            allow_keys(j, ptr, {"version", "kind", "L", "K", "atoms", "stable"});
            BernsteinRep rep;
            rep.constant_L = number_or(j, ptr, "L", 0.0);
            rep.drift_K = number_or(j, ptr, "K", 0.0);
            if (j.contains("atoms")) {
                const auto& arr = j.at("atoms");
                if (!arr.is_array()) fail(ptr + "/atoms", "expected an array");
                for (std::size_t i = 0; i < arr.size(); ++i) {
                    const std::string p = ptr + "/atoms/" + std::to_string(i);
                    expect_object(arr[i], p);
                    allow_keys(arr[i], p, {"rate", "weight"});
                    const double rate = number(arr[i], p, "rate");
                    const double weight = number(arr[i], p, "weight");
                    if (!(rate > 0.0)) fail(p + "/rate", "rate must be > 0");
                    if (!(weight > 0.0)) fail(p + "/weight", "weight must be > 0");
                    rep.levy.atoms.push_back({rate, weight});
                }
            }
            if (j.contains("stable")) rep.levy.stable = stable_part(j.at("stable"), ptr + "/stable");
            if (rep.constant_L < 0.0) fail(ptr + "/L", "L must be >= 0");
            if (rep.drift_K < 0.0) fail(ptr + "/K", "K must be >= 0");
            return Material::analytic(std::move(rep));
        }
        if (kind == "series") {
            allow_keys(j, ptr, {"version", "kind", "children"});
            const auto parts = children(j, ptr, 2, SIZE_MAX);
            Material out = parts.front();
            for (std::size_t i = 1; i < parts.size(); ++i) out = series(out, parts[i]);
            return out;
        }
        if (kind == "parallel") {
            allow_keys(j, ptr, {"version", "kind", "children", "grid"});
            const auto parts = children(j, ptr, 2, SIZE_MAX);
            std::optional<TimeGrid> fallback;
            if (j.contains("grid")) fallback = grid(j.at("grid"), ptr + "/grid");
            Material out = parts.front();
            for (std::size_t i = 1; i < parts.size(); ++i)
                out = fallback ? parallel(out, parts[i], *fallback) : parallel(out, parts[i]);
            return out;
        }
        if (kind == "compose") {
            allow_keys(j, ptr, {"version", "kind", "children"});
            const auto parts = children(j, ptr, 2, 2);
            return compose(parts[0], parts[1]);
        }
        if (kind == "sampled") {
            allow_keys(j, ptr, {"version", "kind", "grid", "values"});
            const TimeGrid g = grid(field(j, ptr, "grid"), ptr + "/grid");
            const Eigen::VectorXd v = vector(field(j, ptr, "values"), ptr + "/values");
            if (static_cast<std::size_t>(v.size()) != g.count)
                fail(ptr + "/values", "expected " + std::to_string(g.count) + " values");
            return Material::sampled(g, std::vector<double>(v.data(), v.data() + v.size()));
        }
        fail(ptr + "/kind", "unknown kind \"" + kind +
                                "\" (expected spring, dashpot, maxwell, kelvin_voigt, stable, "
                                "prony, series, parallel, compose or sampled)");
    }
};

json parse_document(std::string_view text, const std::string& source) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto upto = text.substr(0, std::min<std::size_t>(e.byte, text.size()));
        const auto line = 1 + std::count(upto.begin(), upto.end(), '\n');
        throw SpecError(source + ":" + std::to_string(line) + ": invalid JSON: " + e.what());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError(path.string() + ": cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

ordered grid_to_json(const TimeGrid& g) {
    return {{"start", g.start}, {"step", g.step}, {"count", g.count}};
}

template <typename Candidate>
bool reproduces(const BernsteinRep& rep, Candidate&& make) {
    try {
        return make().rep() == rep;
    } catch (const Error&) {
        return false;
    }
}

ordered analytic_to_json(const BernsteinRep& rep) {
    const double L = rep.constant_L, K = rep.drift_K;
    const auto& atoms = rep.levy.atoms;
    if (rep.pure_stable() && reproduces(rep, [&] {
            return stable_material(rep.levy.stable->alpha, rep.levy.stable->scale);
        }))
        return {{"kind", "stable"}, {"alpha", rep.levy.stable->alpha}, {"c", rep.levy.stable->scale}};
    if (rep.atoms_only()) {
        if (atoms.empty() && K == 0.0 && reproduces(rep, [&] { return spring(1.0 / L); }))
            return {{"kind", "spring"}, {"a", 1.0 / L}};
        if (atoms.empty() && L == 0.0 && reproduces(rep, [&] { return dashpot(K); }))
            return {{"kind", "dashpot"}, {"a", K}};
        if (atoms.empty() && reproduces(rep, [&] { return maxwell(1.0 / L, 1.0 / K); }))
            return {{"kind", "maxwell"}, {"modulus", 1.0 / L}, {"viscosity", 1.0 / K}};
        if (atoms.size() == 1 && L == 0.0 && K == 0.0) {
            const double a = 1.0 / atoms[0].weight;
            const double b = a / atoms[0].rate;
            if (reproduces(rep, [&] { return kelvin_voigt(a, b); }))
                return {{"kind", "kelvin_voigt"}, {"a", a}, {"b", b}};
        }
    }
    ordered out = {{"kind", "prony"}, {"L", L}, {"K", K}, {"atoms", ordered::array()}};
    for (const auto& a : atoms) out["atoms"].push_back({{"rate", a.rate}, {"weight", a.weight}});
    if (rep.levy.stable)
        out["stable"] = {{"alpha", rep.levy.stable->alpha}, {"c", rep.levy.stable->scale}};
    return out;
}

ordered node_to_json(const Material& m) {
    if (m.is_analytic()) return analytic_to_json(m.rep());
    if (const auto* c = m.as_composed())
        return {{"kind", "compose"},
                {"children", {node_to_json(*c->outer), node_to_json(*c->inner)}}};
    if (const auto* s = m.as_sum()) {
        ordered out = {{"kind", "series"}, {"children", ordered::array()}};
        for (const auto& t : s->terms) out["children"].push_back(node_to_json(*t));
        return out;
    }
    const auto* s = m.as_sampled();
    return {{"kind", "sampled"}, {"grid", grid_to_json(s->grid)}, {"values", s->values}};
}

template <typename T, typename Parse>
T with_document(std::string_view text, const std::string& source, Parse&& parse) {
    const json doc = parse_document(text, source);
    const Reader reader(text, source);
    return parse(reader, doc);
}

}  // namespace

TimeGrid parse_grid(std::string_view text) {
    const std::string s(text);
    const auto first = s.find(':');
    const auto second = first == std::string::npos ? first : s.find(':', first + 1);
    if (second == std::string::npos || s.find(':', second + 1) != std::string::npos)
        throw InvalidArgument("grid must be \"start:step:count\", got \"" + s + "\"");
    auto parse_double = [&](std::string_view part) {
        double x = 0.0;
        const auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), x);
        if (ec != std::errc() || end != part.data() + part.size() || part.empty())
            throw InvalidArgument("grid field \"" + std::string(part) + "\" is not a number");
        return x;
    };
    const std::string_view all(s);
    const double start = parse_double(all.substr(0, first));
    const double step = parse_double(all.substr(first + 1, second - first - 1));
    const auto count_part = all.substr(second + 1);
    std::size_t count = 0;
    const auto [end, ec] =
        std::from_chars(count_part.data(), count_part.data() + count_part.size(), count);
    if (ec != std::errc() || end != count_part.data() + count_part.size() || count_part.empty())
        throw InvalidArgument("grid count \"" + std::string(count_part) + "\" is not an integer");
    return TimeGrid::uniform(start, step, count);
}

Material parse_material(std::string_view text, const std::string& source) {
    return with_document<Material>(text, source, [](const Reader& r, const json& doc) {
        return r.material(doc, "");
    });
}

Material load_material(const std::filesystem::path& path) {
    return parse_material(read_file(path), path.string());
}

nlohmann::ordered_json material_to_json(const Material& material) {
    const ordered node = node_to_json(material);
    ordered out = {{"version", kSpecVersion}};
    for (const auto& [key, value] : node.items()) out[key] = value;
    return out;
}

std::string dump_material(const Material& material) { return material_to_json(material).dump(2); }

std::vector<LoadHistory> parse_loads(std::string_view text, const std::string& source) {
    return with_document<std::vector<LoadHistory>>(
        text, source, [](const Reader& r, const json& doc) {
            r.expect_object(doc, "");
            r.check_version(doc, "", true);
            std::vector<LoadHistory> out;
            if (doc.contains("loads")) {
                r.allow_keys(doc, "", {"version", "loads"});
                const auto& arr = doc.at("loads");
                if (!arr.is_array() || arr.empty()) r.fail("/loads", "expected a non-empty array");
                for (std::size_t i = 0; i < arr.size(); ++i)
                    out.push_back(r.load(arr[i], "/loads/" + std::to_string(i)));
            } else {
                out.push_back(r.load(doc, ""));
            }
            return out;
        });
}

std::vector<LoadHistory> load_loads(const std::filesystem::path& path) {
    return parse_loads(read_file(path), path.string());
}

QuadraticFormPairD parse_network(std::string_view text, const std::string& source) {
    return with_document<QuadraticFormPairD>(text, source, [](const Reader& r, const json& doc) {
        r.expect_object(doc, "");
        r.check_version(doc, "", true);
        r.allow_keys(doc, "", {"version", "A", "B", "observables"});
        QuadraticFormPairD pair;
        pair.A = r.matrix(r.field(doc, "", "A"), "/A");
        pair.B = r.matrix(r.field(doc, "", "B"), "/B");
        const auto& obs = r.field(doc, "", "observables");
        if (!obs.is_array()) r.fail("/observables", "expected an array of indices");
        for (std::size_t i = 0; i < obs.size(); ++i) {
            if (!obs[i].is_number_unsigned())
                r.fail("/observables/" + std::to_string(i), "expected a non-negative integer");
            pair.observables.push_back(obs[i].get<Eigen::Index>());
        }
        try {
            validate(pair);
        } catch (const Error& e) {
            r.fail("", e.what());
        }
        return pair;
    });
}

QuadraticFormPairD load_network(const std::filesystem::path& path) {
    return parse_network(read_file(path), path.string());
}

PaisCharacteristics parse_process(std::string_view text, const std::string& source) {
    return with_document<PaisCharacteristics>(text, source, [](const Reader& r, const json& doc) {
        r.expect_object(doc, "");
        r.check_version(doc, "", true);
        r.allow_keys(doc, "", {"version", "start", "sigma", "jumps"});
        PaisCharacteristics c;
        c.start = r.vector(r.field(doc, "", "start"), "/start");
        c.sigma = doc.contains("sigma") ? r.matrix(doc.at("sigma"), "/sigma")
                                        : Eigen::MatrixXd::Zero(c.dim(), c.dim());
        if (doc.contains("jumps")) {
            const auto& arr = doc.at("jumps");
            if (!arr.is_array()) r.fail("/jumps", "expected an array");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const std::string p = "/jumps/" + std::to_string(i);
                r.expect_object(arr[i], p);
                r.allow_keys(arr[i], p, {"point", "intensity"});
                c.jump_atoms.push_back(
                    {r.vector(r.field(arr[i], p, "point"), p + "/point"), r.number(arr[i], p, "intensity")});
            }
        }
        try {
            validate(c);
        } catch (const Error& e) {
            r.fail("", e.what());
        }
        return c;
    });
}

PaisCharacteristics load_process(const std::filesystem::path& path) {
    return parse_process(read_file(path), path.string());
}

std::string format_number(double x) {
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, x);
    return ec == std::errc() ? std::string(buffer, end) : std::string("nan");
}

void write_curve_csv(std::ostream& out, std::span<const double> times,
                     std::span<const double> values) {
    if (times.size() != values.size()) throw InvalidArgument("curve columns differ in length");
    out << "t,value\n";
    for (std::size_t i = 0; i < times.size(); ++i)
        out << format_number(times[i]) << ',' << format_number(values[i]) << '\n';
}

void write_matrix_csv(std::ostream& out, std::span<const double> times,
                      std::span<const Eigen::MatrixXd> values) {
    if (times.size() != values.size()) throw InvalidArgument("curve columns differ in length");
    const Eigen::Index m = values.empty() ? 0 : values.front().rows();
    out << 't';
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = i; j < m; ++j) out << ",f_" << i + 1 << '_' << j + 1;
    out << '\n';
    for (std::size_t k = 0; k < times.size(); ++k) {
        out << format_number(times[k]);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = i; j < m; ++j) out << ',' << format_number(values[k](i, j));
        out << '\n';
    }
}

void write_path_csv(std::ostream& out, const Path& path) {
    const Eigen::Index m = path.dim();
    out << "time";
    if (m == 1)
        out << ",value";
    else
        for (Eigen::Index i = 0; i < m; ++i) out << ",y_" << i + 1;
    out << ",is_jump\n";
    std::set<double> jump_times;
    for (const auto& j : path.jumps) jump_times.insert(j.time);
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        out << format_number(path.times[k]);
        for (Eigen::Index i = 0; i < m; ++i)
            out << ',' << format_number(path.values(i, static_cast<Eigen::Index>(k)));
        out << ',' << (jump_times.count(path.times[k]) ? 1 : 0) << '\n';
    }
}

}  // namespace viscolevy
