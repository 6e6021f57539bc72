#include "dfbench/cli/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

#include "dfbench/error.hpp"

namespace dfbench::cli {

namespace {

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_scatter_svg(const Eigen::MatrixXd& coordinates, std::span<const int> labels,
                               const std::vector<std::string>& class_names, const std::string& title) {
    if (coordinates.cols() < 2) throw DataError("scatter plot needs at least two coordinate columns");
    if (static_cast<std::size_t>(coordinates.rows()) != labels.size()) {
        throw DataError("scatter plot: label count does not match point count");
    }
    constexpr double width = 640.0;
    constexpr double height = 520.0;
    constexpr double margin = 40.0;
    constexpr double legend_width = 180.0;
    const double plot_w = width - 2 * margin - legend_width;
    const double plot_h = height - 2 * margin;

    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    if (coordinates.rows() > 0) {
        x_min = coordinates.col(0).minCoeff();
        x_max = coordinates.col(0).maxCoeff();
        y_min = coordinates.col(1).minCoeff();
        y_max = coordinates.col(1).maxCoeff();
    }
    const double x_span = x_max > x_min ? x_max - x_min : 1.0;
    const double y_span = y_max > y_min ? y_max - y_min : 1.0;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << margin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << escape(title)
        << "</text>\n";
    svg << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"#999\"/>\n";
    svg << "<g class=\"points\">\n";
    for (Eigen::Index i = 0; i < coordinates.rows(); ++i) {
        const double px = margin + (coordinates(i, 0) - x_min) / x_span * plot_w;
        const double py = margin + plot_h - (coordinates(i, 1) - y_min) / y_span * plot_h;
        const auto colour = kPalette[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)]) % kPalette.size()];
        svg << "<circle cx=\"" << fmt(px) << "\" cy=\"" << fmt(py) << "\" r=\"2.5\" fill=\"" << colour
            << "\" fill-opacity=\"0.8\"/>\n";
    }
    svg << "</g>\n<g class=\"legend\">\n";
    for (std::size_t k = 0; k < class_names.size(); ++k) {
        const double ly = margin + 10.0 + 20.0 * static_cast<double>(k);
        const double lx = width - legend_width - margin / 2;
        svg << "<g class=\"legend-entry\"><circle cx=\"" << fmt(lx) << "\" cy=\"" << fmt(ly) << "\" r=\"5\" fill=\""
            << kPalette[k % kPalette.size()] << "\"/><text x=\"" << fmt(lx + 12) << "\" y=\"" << fmt(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(class_names[k]) << "</text></g>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

}  // namespace dfbench::cli
