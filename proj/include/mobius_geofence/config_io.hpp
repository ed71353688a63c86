#pragma once

// JSON configs, trajectory CSV and summary JSON.

#include "mobius_geofence/simulator.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace mgf {

inline constexpr int kSchemaVersion = 1;

inline constexpr const char* kCsvHeader =
    "t,x,y,theta,rho_x,rho_y,gamma,e_abs,E_abs,S,omega,Omega,contained,in_bounds";

/// Throws GeofenceError(BadInput) on malformed or out-of-range input.
SimConfig parse_config(const nlohmann::json& j);
SimConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const SimConfig& config);

/// Reads a JSON file, mapping I/O and syntax errors to BadInput.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// %.12g formatting shared by every numeric text output.
std::string format_number(double x);

void write_csv(std::ostream& os, const TrajectoryRecord& rec);
void write_csv_file(const std::filesystem::path& path, const TrajectoryRecord& rec);

nlohmann::json bounds_to_json(const BoundsReport& b);
nlohmann::json feasibility_to_json(const FeasibilityReport& f);
nlohmann::json summary_json(const SimConfig& config, const TrajectoryRecord& rec);

/// Column-major view of a trajectory CSV.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  // data[column][row]

    std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
    /// Throws BadInput when the column is missing.
    const std::vector<double>& column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

struct SweepPoint {
    std::string label;
    nlohmann::json params;
    SimConfig config;
};

/// Cartesian product over the optional grid keys kappa, theta0_deg, r0
/// ([[x, y], ...]), dt and root (["smaller", "larger"]). Keys that are
/// absent keep the base value.
std::vector<SweepPoint> expand_grid(const SimConfig& base, const nlohmann::json& grid);

}  // namespace mgf
