#include "doctest.h"

#include <sstream>

#include "viscolevy/conjugation.hpp"
#include "viscolevy/errors.hpp"
#include "viscolevy/spec_io.hpp"

using namespace viscolevy;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_material(text, "m.json");
    } catch (const SpecError& e) {
        return e.what();
    }
    return "";
}

void check_round_trip(const Material& m) {
    const std::string once = dump_material(m);
    const Material back = parse_material(once);
    CHECK(back == m);
    CHECK(dump_material(back) == once);
}

}  // namespace

TEST_CASE("grid strings") {
    const auto g = parse_grid("0:0.25:5");
    CHECK(g == TimeGrid::uniform(0.0, 0.25, 5));
    CHECK(parse_grid("1e-3:1e-3:10").step == 1e-3);
    CHECK_THROWS_AS(parse_grid("0:1"), InvalidArgument);
    CHECK_THROWS_AS(parse_grid("0:1:2:3"), InvalidArgument);
    CHECK_THROWS_AS(parse_grid("0:x:4"), InvalidArgument);
    CHECK_THROWS_AS(parse_grid("0:1:4.5"), InvalidArgument);
    CHECK_THROWS_AS(parse_grid("0:0:4"), InvalidArgument);
}

TEST_CASE("dictionary kinds parse") {
    CHECK(parse_material(R"({"version": 1, "kind": "spring", "a": 4})") == spring(4.0));
    CHECK(parse_material(R"({"version": 1, "kind": "maxwell", "modulus": 2, "viscosity": 4})") ==
          maxwell(2.0, 4.0));
    CHECK(parse_material(R"({"version": 1, "kind": "kelvin_voigt", "a": 1, "b": 2})") ==
          kelvin_voigt(1.0, 2.0));
    CHECK(parse_material(R"({"version": 1, "kind": "stable", "alpha": 0.5, "c": 1})") ==
          stable_material(0.5, 1.0));
    const auto p = parse_material(R"({"version": 1, "kind": "prony", "L": 1,
        "atoms": [{"rate": 2, "weight": 0.5}], "stable": {"alpha": 0.3, "c": 2}})");
    CHECK(p.rep().constant_L == 1.0);
    CHECK(p.rep().levy.stable->alpha == 0.3);
    const auto s = parse_material(R"({"version": 1, "kind": "series", "children": [
        {"kind": "spring", "a": 2}, {"kind": "dashpot", "a": 4}]})");
    CHECK(s == maxwell(2.0, 0.25));
    const auto par = parse_material(R"({"version": 1, "kind": "parallel", "children": [
        {"kind": "spring", "a": 2}, {"kind": "dashpot", "a": 4}]})");
    CHECK(par == kelvin_voigt(2.0, 0.25));
}

TEST_CASE("serialization picks the most specific kind") {
    CHECK(material_to_json(spring(4.0))["kind"] == "spring");
    CHECK(material_to_json(dashpot(3.0))["kind"] == "dashpot");
    CHECK(material_to_json(conjugate(kelvin_voigt(0.25, 0.5)))["kind"] == "maxwell");
    CHECK(material_to_json(conjugate(maxwell(2.0, 4.0)))["kind"] == "kelvin_voigt");
    CHECK(material_to_json(stable_material(0.5, 1.0))["kind"] == "stable");
    CHECK(material_to_json(prony(1.0, 0.0, {{1.0, 1.0}}))["kind"] == "prony");
    CHECK(material_to_json(spring(3.0))["version"] == 1);
    CHECK(dump_material(spring(4.0)).rfind("{\n  \"version\": 1,\n  \"kind\": \"spring\"", 0) == 0);
}

TEST_CASE("spec round trips") {
    check_round_trip(spring(3.0));
    check_round_trip(maxwell(3.0, 7.0));
    check_round_trip(kelvin_voigt(3.0, 0.7));
    check_round_trip(prony(0.1, 0.2, {{0.3, 0.4}, {5.0, 6.0}}));
    check_round_trip(stable_material(0.3, 1.7));
    check_round_trip(compose(stable_material(0.5, 1.0), kelvin_voigt(1.0, 1.0)));
    check_round_trip(series(stable_material(0.3, 1.0), stable_material(0.6, 1.0)));
    BernsteinRep rep;
    rep.constant_L = 1.0;
    rep.levy.stable = StableComponent{0.5, 1.0};
    check_round_trip(parallel(Material::analytic(rep), spring(1.0), TimeGrid::uniform(0, 0.5, 5)));
}

TEST_CASE("diagnostics carry line and pointer") {
    const auto missing = error_of("{\n  \"version\": 1,\n  \"kind\": \"maxwell\",\n  \"modulus\": 2\n}");
    CHECK(missing.find("m.json:1: /: missing field \"viscosity\"") != std::string::npos);

    const auto bad_child = error_of(R"({
  "version": 1,
  "kind": "series",
  "children": [
    {"kind": "spring", "a": 1},
    {"kind": "spring",
     "a": -2}
  ]
})");
    CHECK(bad_child.find("m.json:7: /children/1/a: a must be > 0") != std::string::npos);
    CHECK(error_of(R"({"version": 1, "kind": "stable", "alpha": 1, "c": 1})")
              .find("/alpha: alpha must lie in (0, 1)") != std::string::npos);

    const auto wrong_type = error_of("{\"version\": 1, \"kind\": \"spring\",\n \"a\": \"x\"}");
    CHECK(wrong_type.find("m.json:2: /a: expected a number") != std::string::npos);

    CHECK(error_of(R"({"kind": "spring", "a": 1})").find("missing field \"version\"") !=
          std::string::npos);
    CHECK(error_of(R"({"version": 2, "kind": "spring", "a": 1})").find("/version") !=
          std::string::npos);
    CHECK(error_of(R"({"version": 1, "kind": "spring", "a": 1, "b": 2})").find("/b: unknown field") !=
          std::string::npos);
    CHECK(error_of(R"({"version": 1, "kind": "rubber"})").find("/kind: unknown kind") !=
          std::string::npos);
    CHECK(error_of("{\"version\": 1,\n\n \"kind\": }").find("m.json:3: invalid JSON") !=
          std::string::npos);
    CHECK(error_of(R"({"version": 1, "kind": "prony"})").find("ZeroMaterial") != std::string::npos);
}

TEST_CASE("loads, networks and processes") {
    const auto one = parse_loads(R"({"version": 1, "steps": [{"time": 0, "jump": 1}],
        "ramps": [{"start": 1, "end": 2, "rate": 3}]})");
    REQUIRE(one.size() == 1);
    CHECK(one[0].value(5.0) == 4.0);
    const auto two = parse_loads(R"({"version": 1, "loads": [{"steps": [{"time": 0, "jump": 1}]}, {}]})");
    CHECK(two.size() == 2);
    CHECK_THROWS_AS(parse_loads(R"({"version": 1, "ramps": [{"start": 2, "end": 1, "rate": 1}]})"),
                    SpecError);

    const auto net = parse_network(
        R"({"version": 1, "A": [[2, -2], [-2, 2]], "B": [[0, 0], [0, 4]], "observables": [0]})");
    CHECK(net.A(0, 1) == -2.0);
    CHECK(net.observables == std::vector<Eigen::Index>{0});
    CHECK_THROWS_AS(parse_network(R"({"version": 1, "A": [[1, 2], [0, 1]], "B": [[1, 0], [0, 1]],
        "observables": [0]})"),
                    SpecError);
    CHECK_THROWS_AS(parse_network(R"({"version": 1, "A": [[1, 0], [0]], "B": [[1]], "observables": [0]})"),
                    SpecError);

    const auto proc = parse_process(R"({"version": 1, "start": [1, 0], "sigma": [[1, 0], [0, 1]],
        "jumps": [{"point": [1, 1], "intensity": 0.5}]})");
    CHECK(proc.dim() == 2);
    CHECK(proc.jump_atoms.size() == 1);
    CHECK_THROWS_AS(parse_process(R"({"version": 1, "start": [1], "jumps": [{"point": [0], "intensity": 1}]})"),
                    SpecError);
}

TEST_CASE("CSV output") {
    std::ostringstream curve;
    const std::vector<double> t{0.0, 0.5}, v{0.1, 1e-20};
    write_curve_csv(curve, t, v);
    CHECK(curve.str() == "t,value\n0,0.1\n0.5,1e-20\n");

    std::ostringstream mat;
    const std::vector<double> times{1.0};
    const std::vector<Eigen::MatrixXd> values{Eigen::Matrix2d{{1.0, 2.0}, {2.0, 3.5}}};
    write_matrix_csv(mat, times, values);
    CHECK(mat.str() == "t,f_1_1,f_1_2,f_2_2\n1,1,2,3.5\n");

    Path path;
    path.times = {0.0, 0.5, 1.0};
    path.values = Eigen::MatrixXd{{0.0, 2.0, 2.0}};
    path.jumps = {{0.5, Eigen::VectorXd::Constant(1, 2.0)}};
    std::ostringstream p;
    write_path_csv(p, path);
    CHECK(p.str() == "time,value,is_jump\n0,0,0\n0.5,2,1\n1,2,0\n");
    CHECK(format_number(0.1 + 0.2) == "0.30000000000000004");
}
