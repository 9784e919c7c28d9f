#pragma once

// File formats: JSON specs for materials, loads, networks and processes;
// CSV for curves. Every top-level JSON document carries "version": 1.
// Parse failures throw SpecError with "<source>:<line>: <json pointer>: ...".

#include <Eigen/Dense>
#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "viscolevy/bernstein.hpp"
#include "viscolevy/finite_network.hpp"
#include "viscolevy/levy_sim.hpp"
#include "viscolevy/materials.hpp"

namespace viscolevy {

inline constexpr int kSpecVersion = 1;

/// "start:step:count"
TimeGrid parse_grid(std::string_view text);

Material parse_material(std::string_view text, const std::string& source = "<input>");
Material load_material(const std::filesystem::path& path);

/// Most specific dictionary kind whose constructor reproduces the material
/// bit for bit; "prony" otherwise. parse(serialize(m)) == m.
nlohmann::ordered_json material_to_json(const Material& material);
std::string dump_material(const Material& material);

/// A single history {"steps": [...], "ramps": [...]}, or {"loads": [h, ...]}
/// for one history per observable.
std::vector<LoadHistory> parse_loads(std::string_view text, const std::string& source = "<input>");
std::vector<LoadHistory> load_loads(const std::filesystem::path& path);

/// {"A": [[...]], "B": [[...]], "observables": [...]}, row-major.
QuadraticFormPairD parse_network(std::string_view text, const std::string& source = "<input>");
QuadraticFormPairD load_network(const std::filesystem::path& path);

/// {"start": [...], "sigma": [[...]], "jumps": [{"point": [...], "intensity": x}]}
PaisCharacteristics parse_process(std::string_view text, const std::string& source = "<input>");
PaisCharacteristics load_process(const std::filesystem::path& path);

/// Shortest round-trip decimal, independent of the locale.
std::string format_number(double x);

/// Header `t,value`.
void write_curve_csv(std::ostream& out, std::span<const double> times,
                     std::span<const double> values);
/// Header `t,f_1_1,f_1_2,...` (row-major upper triangle).
void write_matrix_csv(std::ostream& out, std::span<const double> times,
                      std::span<const Eigen::MatrixXd> values);
/// Header `time,value` or `time,y_1,...`, then `is_jump`.
void write_path_csv(std::ostream& out, const Path& path);

}  // namespace viscolevy
