#pragma once

// Hand-written SVG figures built from a trajectory CSV. The only extra input
// is the circle geometry, which comes from the scene, never from the
// simulator.

#include "mobius_geofence/config_io.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace mgf {

struct PlotCircle {
    Complex center{};
    double radius = 0.0;
    std::string color;
    std::string label;
};

struct PlotSeries {
    std::string label;
    std::vector<double> values;
    std::string color;
};

std::string plane_svg(const std::string& title, const std::vector<double>& x, const std::vector<double>& y,
                      const std::vector<PlotCircle>& circles);

std::string time_series_svg(const std::string& title, const std::vector<double>& t,
                            const std::vector<PlotSeries>& series, const std::string& y_label);

/// Writes actual_plane.svg, transformed_plane.svg, errors.svg and
/// turn_rates.svg into out_dir and returns their paths.
std::vector<std::filesystem::path> write_plots(const CsvTable& table, const SceneSpec& scene, bool desired_is_inner,
                                               RootKind kind, const std::filesystem::path& out_dir);

}  // namespace mgf
