#include "mobius_geofence/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace mgf {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 60.0;
constexpr std::size_t kMaxPoints = 4000;

struct Box {
    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -std::numeric_limits<double>::infinity();
    double y0 = std::numeric_limits<double>::infinity();
    double y1 = -std::numeric_limits<double>::infinity();

    void add(double x, double y) {
        if (!std::isfinite(x) || !std::isfinite(y)) return;
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    }
    void pad(double frac) {
        if (!std::isfinite(x0)) *this = Box{0.0, 1.0, 0.0, 1.0};
        if (x1 - x0 < 1e-12) { x0 -= 0.5; x1 += 0.5; }
        if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
        const double dx = (x1 - x0) * frac, dy = (y1 - y0) * frac;
        x0 -= dx; x1 += dx; y0 -= dy; y1 += dy;
    }
    // Grow the shorter side so one data unit has the same length on both axes.
    void equalize() {
        const double sx = (x1 - x0) / (kWidth - 2 * kMargin);
        const double sy = (y1 - y0) / (kHeight - 2 * kMargin);
        if (sx > sy) {
            const double extra = (sx * (kHeight - 2 * kMargin) - (y1 - y0)) / 2;
            y0 -= extra; y1 += extra;
        } else {
            const double extra = (sy * (kWidth - 2 * kMargin) - (x1 - x0)) / 2;
            x0 -= extra; x1 += extra;
        }
    }
    double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); }
    double py(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

void header(std::ostringstream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
       << "</text>\n";
}

void axes(std::ostringstream& os, const Box& b, const std::string& x_label, const std::string& y_label) {
    os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin
       << "\" height=\"" << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = b.x0 + (b.x1 - b.x0) * i / 4.0;
        const double yv = b.y0 + (b.y1 - b.y0) * i / 4.0;
        os << "<text x=\"" << num(b.px(xv)) << "\" y=\"" << kHeight - kMargin + 16
           << "\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
        os << "<text x=\"" << kMargin - 6 << "\" y=\"" << num(b.py(yv) + 4) << "\" text-anchor=\"end\">"
           << tick(yv) << "</text>\n";
    }
    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\">"
       << escape(x_label) << "</text>\n";
    os << "<text x=\"16\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << kHeight / 2 << ")\">" << escape(y_label) << "</text>\n";
}

void polyline(std::ostringstream& os, const Box& b, const std::vector<double>& x, const std::vector<double>& y,
              const std::string& color) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n == 0) return;
    const std::size_t stride = std::max<std::size_t>(1, n / kMaxPoints);
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < n; i += stride) os << num(b.px(x[i])) << ',' << num(b.py(y[i])) << ' ';
    os << num(b.px(x[n - 1])) << ',' << num(b.py(y[n - 1])) << "\"/>\n";
}

void legend(std::ostringstream& os, const std::vector<std::pair<std::string, std::string>>& entries) {
    double y = kMargin + 14;
    for (const auto& [label, color] : entries) {
        os << "<line x1=\"" << kWidth - kMargin - 110 << "\" y1=\"" << y - 4 << "\" x2=\"" << kWidth - kMargin - 90
           << "\" y2=\"" << y - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << kWidth - kMargin - 86 << "\" y=\"" << y << "\">" << escape(label) << "</text>\n";
        y += 14;
    }
}

void save(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GeofenceError(ErrorCode::BadInput, "cannot write " + path.string());
    out << text;
}

}  // namespace

std::string plane_svg(const std::string& title, const std::vector<double>& x, const std::vector<double>& y,
                      const std::vector<PlotCircle>& circles) {
    Box b;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) b.add(x[i], y[i]);
    for (const auto& c : circles) {
        b.add(c.center.real() - c.radius, c.center.imag() - c.radius);
        b.add(c.center.real() + c.radius, c.center.imag() + c.radius);
    }
    b.pad(0.05);
    b.equalize();

    std::ostringstream os;
    header(os, title);
    axes(os, b, "x", "y");
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& c : circles) {
        const double rx = b.px(c.center.real() + c.radius) - b.px(c.center.real());
        os << "<circle cx=\"" << num(b.px(c.center.real())) << "\" cy=\"" << num(b.py(c.center.imag()))
           << "\" r=\"" << num(rx) << "\" fill=\"none\" stroke=\"" << c.color
           << "\" stroke-dasharray=\"5,3\"/>\n";
        entries.emplace_back(c.label, c.color);
    }
    polyline(os, b, x, y, "#1f77b4");
    entries.emplace_back("trajectory", "#1f77b4");
    if (!x.empty() && !y.empty()) {
        os << "<circle cx=\"" << num(b.px(x.front())) << "\" cy=\"" << num(b.py(y.front()))
           << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    }
    legend(os, entries);
    os << "</svg>\n";
    return os.str();
}

std::string time_series_svg(const std::string& title, const std::vector<double>& t,
                            const std::vector<PlotSeries>& series, const std::string& y_label) {
    Box b;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < std::min(t.size(), s.values.size()); ++i) b.add(t[i], s.values[i]);
    }
    b.pad(0.03);

    std::ostringstream os;
    header(os, title);
    axes(os, b, "t [s]", y_label);
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& s : series) {
        polyline(os, b, t, s.values, s.color);
        entries.emplace_back(s.label, s.color);
    }
    legend(os, entries);
    os << "</svg>\n";
    return os.str();
}

std::vector<std::filesystem::path> write_plots(const CsvTable& table, const SceneSpec& scene, bool desired_is_inner,
                                               RootKind kind, const std::filesystem::path& out_dir) {
    const StandardScene std_scene = normalize_scene(scene, desired_is_inner);
    const MobiusMap map = build_map(std_scene, kind);

    const Complex desired_c = desired_is_inner ? scene.inner_center : scene.outer_center;
    const double desired_r = desired_is_inner ? scene.inner_radius : scene.outer_radius;
    const Complex boundary_c = desired_is_inner ? scene.outer_center : scene.inner_center;
    const double boundary_r = desired_is_inner ? scene.outer_radius : scene.inner_radius;

    const auto& t = table.column("t");
    std::vector<std::filesystem::path> paths;

    auto emit = [&](const std::string& name, const std::string& svg) {
        const auto path = out_dir / name;
        save(path, svg);
        paths.push_back(path);
    };

    emit("actual_plane.svg",
         plane_svg("Actual plane", table.column("x"), table.column("y"),
                   {{desired_c, desired_r, "#2ca02c", "desired orbit"},
                    {boundary_c, boundary_r, "#d62728", "geofence"}}));
    emit("transformed_plane.svg",
         plane_svg("Transformed plane", table.column("rho_x"), table.column("rho_y"),
                   {{Complex{}, map.radius_fC, "#2ca02c", "desired orbit image"},
                    {Complex{}, map.radius_fCp, "#d62728", "geofence image"}}));
    emit("errors.svg", time_series_svg("Error magnitudes", t,
                                       {{"|e|", table.column("e_abs"), "#1f77b4"},
                                        {"|E|", table.column("E_abs"), "#ff7f0e"}},
                                       "magnitude"));
    emit("turn_rates.svg", time_series_svg("Turn rates", t,
                                           {{"omega", table.column("omega"), "#1f77b4"},
                                            {"Omega", table.column("Omega"), "#ff7f0e"}},
                                           "rad/s"));
    return paths;
}

}  // namespace mgf
