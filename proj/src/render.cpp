#include "frontier_lab/render.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "frontier_lab/errors.hpp"

namespace frontier_lab {

namespace {

// Fixed palette; curves cycle through it in descending-budget order.
constexpr const char* kPalette[] = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
};
constexpr int kPaletteSize = 8;

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

// Curve indices in descending-budget order; ties keep insertion order.
std::vector<std::size_t> descending_budget_order(const std::vector<FrontierCurve>& curves) {
    std::vector<std::size_t> order(curves.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&curves](std::size_t a, std::size_t b) {
        return curves[a].budget > curves[b].budget;
    });
    return order;
}

// Points of one curve sorted by (branch, risk ascending), upper branch first.
std::vector<FrontierPoint> branch_sorted_points(const FrontierCurve& curve) {
    std::vector<FrontierPoint> points = curve.points;
    std::stable_sort(points.begin(), points.end(),
                     [](const FrontierPoint& a, const FrontierPoint& b) {
                         if (a.branch != b.branch) {
                             return a.branch == Branch::Upper;
                         }
                         return a.risk < b.risk;
                     });
    return points;
}

struct PlotRange {
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = -1.0;
    double y_max = 1.0;
};

PlotRange compute_range(const FrontierFamily& family) {
    double max_risk = 0.0;
    double lo_ret = 0.0;
    double hi_ret = 0.0;
    for (const FrontierCurve& curve : family.curves) {
        for (const FrontierPoint& point : curve.points) {
            max_risk = std::max(max_risk, point.risk);
            lo_ret = std::min(lo_ret, point.ret);
            hi_ret = std::max(hi_ret, point.ret);
        }
    }
    if (family.guide_return) {
        lo_ret = std::min(lo_ret, *family.guide_return);
        hi_ret = std::max(hi_ret, *family.guide_return);
    }
    PlotRange range;
    range.x_min = 0.0;
    range.x_max = max_risk > 0.0 ? 1.05 * max_risk : 1.0;
    double span = hi_ret - lo_ret;
    if (span > 0.0) {
        range.y_min = lo_ret - 0.05 * span;
        range.y_max = hi_ret + 0.05 * span;
    } else {
        range.y_min = lo_ret - 1.0;
        range.y_max = hi_ret + 1.0;
    }
    return range;
}

}  // namespace

std::string format_number(double value) {
    if (value == 0.0) {
        return "0";  // collapses negative zero
    }
    char buffer[48];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

FrontierFamily make_frontier_family(std::string universe_label,
                                    std::vector<FrontierCurve> curves,
                                    std::optional<double> guide_return) {
    FrontierFamily family;
    family.universe_label = std::move(universe_label);
    family.curves = std::move(curves);
    family.guide_return = guide_return;
    std::stable_sort(family.curves.begin(), family.curves.end(),
                     [](const FrontierCurve& a, const FrontierCurve& b) {
                         return a.budget > b.budget;
                     });
    return family;
}

std::string family_to_csv(const FrontierFamily& family) {
    std::string out = "budget,branch,risk,ret\n";
    for (std::size_t index : descending_budget_order(family.curves)) {
        const FrontierCurve& curve = family.curves[index];
        const std::string budget_text = format_number(curve.budget);
        for (const FrontierPoint& point : branch_sorted_points(curve)) {
            out += budget_text;
            out += ',';
            out += to_string(point.branch);
            out += ',';
            out += format_number(point.risk);
            out += ',';
            out += format_number(point.ret);
            out += '\n';
        }
    }
    return out;
}

std::string family_to_svg(const FrontierFamily& family, int width, int height) {
    if (width < 100 || height < 100) {
        throw std::invalid_argument("svg canvas must be at least 100x100");
    }
    std::size_t total_points = 0;
    for (const FrontierCurve& curve : family.curves) {
        total_points += curve.points.size();
    }
    if (total_points == 0) {
        throw std::invalid_argument("frontier family has no points to plot");
    }
    {
        const FrontierPoint* first = nullptr;
        bool all_same = true;
        for (const FrontierCurve& curve : family.curves) {
            for (const FrontierPoint& point : curve.points) {
                if (first == nullptr) {
                    first = &point;
                } else if (point.risk != first->risk || point.ret != first->ret) {
                    all_same = false;
                }
            }
        }
        if (all_same) {
            throw DegenerateRange("all frontier points coincide; nothing to scale");
        }
    }

    const PlotRange range = compute_range(family);
    const double w = static_cast<double>(width);
    const double h = static_cast<double>(height);
    const double margin_left = 0.11 * w;
    const double margin_right = 0.04 * w;
    const double margin_top = 0.08 * h;
    const double margin_bottom = 0.12 * h;
    const double plot_w = w - margin_left - margin_right;
    const double plot_h = h - margin_top - margin_bottom;

    const auto map_x = [&](double x) {
        return margin_left + (x - range.x_min) / (range.x_max - range.x_min) * plot_w;
    };
    const auto map_y = [&](double y) {
        return margin_top + (range.y_max - y) / (range.y_max - range.y_min) * plot_h;
    };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"";
    svg += std::to_string(width);
    svg += "\" height=\"";
    svg += std::to_string(height);
    svg += "\" viewBox=\"0 0 " + std::to_string(width) + " " + std::to_string(height) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) + "\" height=\"" +
           std::to_string(height) + "\" fill=\"#ffffff\"/>\n";

    // Plot frame and zero-return gridline.
    svg += "<rect x=\"" + format_number(margin_left) + "\" y=\"" + format_number(margin_top) +
           "\" width=\"" + format_number(plot_w) + "\" height=\"" + format_number(plot_h) +
           "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    const double zero_y = map_y(0.0);
    svg += "<line x1=\"" + format_number(margin_left) + "\" y1=\"" + format_number(zero_y) +
           "\" x2=\"" + format_number(margin_left + plot_w) + "\" y2=\"" + format_number(zero_y) +
           "\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n";

    // Axis tick labels and axis names.
    svg += "<text x=\"" + format_number(margin_left) + "\" y=\"" +
           format_number(h - 0.03 * h) +
           "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">0</text>\n";
    svg += "<text x=\"" + format_number(margin_left + plot_w) + "\" y=\"" +
           format_number(h - 0.03 * h) +
           "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">" +
           format_number(range.x_max) + "</text>\n";
    svg += "<text x=\"" + format_number(margin_left - 4.0) + "\" y=\"" +
           format_number(map_y(range.y_min) - 2.0) +
           "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">" +
           format_number(range.y_min) + "</text>\n";
    svg += "<text x=\"" + format_number(margin_left - 4.0) + "\" y=\"" +
           format_number(map_y(range.y_max) + 10.0) +
           "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">" +
           format_number(range.y_max) + "</text>\n";
    svg += "<text x=\"" + format_number(margin_left - 4.0) + "\" y=\"" +
           format_number(zero_y + 4.0) +
           "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">0</text>\n";
    svg += "<text x=\"" + format_number(margin_left + plot_w / 2.0) + "\" y=\"" +
           format_number(h - 0.01 * h) +
           "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">&#931;</text>\n";
    svg += "<text x=\"" + format_number(0.02 * w) + "\" y=\"" +
           format_number(margin_top + plot_h / 2.0) +
           "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">R</text>\n";

    // Title.
    svg += "<text x=\"" + format_number(w / 2.0) + "\" y=\"" + format_number(0.05 * h) +
           "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">" +
           xml_escape(family.universe_label) + "</text>\n";

    // Guide line: dotted horizontal at the requested return level.
    if (family.guide_return) {
        const double gy = map_y(*family.guide_return);
        svg += "<line x1=\"" + format_number(margin_left) + "\" y1=\"" + format_number(gy) +
               "\" x2=\"" + format_number(margin_left + plot_w) + "\" y2=\"" +
               format_number(gy) +
               "\" stroke=\"#000000\" stroke-width=\"1\" stroke-dasharray=\"2,4\"/>\n";
    }

    // One polyline per (budget, branch); lower branches dashed.
    const std::vector<std::size_t> order = descending_budget_order(family.curves);
    for (std::size_t slot = 0; slot < order.size(); ++slot) {
        const FrontierCurve& curve = family.curves[order[slot]];
        const char* color = kPalette[slot % kPaletteSize];
        const std::vector<FrontierPoint> points = branch_sorted_points(curve);
        for (Branch branch : {Branch::Upper, Branch::Lower}) {
            std::string coords;
            for (const FrontierPoint& point : points) {
                if (point.branch != branch) {
                    continue;
                }
                if (!coords.empty()) {
                    coords += ' ';
                }
                coords += format_number(map_x(point.risk));
                coords += ',';
                coords += format_number(map_y(point.ret));
            }
            if (coords.empty()) {
                continue;
            }
            svg += "<polyline points=\"" + coords + "\" fill=\"none\" stroke=\"";
            svg += color;
            svg += "\" stroke-width=\"1.5\"";
            if (branch == Branch::Lower) {
                svg += " stroke-dasharray=\"6,3\"";
            }
            svg += "/>\n";
        }
    }

    // Legend: one swatch per budget, plus the guide line when present.
    double legend_y = margin_top + 14.0;
    const double legend_x = margin_left + 8.0;
    for (std::size_t slot = 0; slot < order.size(); ++slot) {
        const FrontierCurve& curve = family.curves[order[slot]];
        const char* color = kPalette[slot % kPaletteSize];
        svg += "<line x1=\"" + format_number(legend_x) + "\" y1=\"" +
               format_number(legend_y - 4.0) + "\" x2=\"" + format_number(legend_x + 18.0) +
               "\" y2=\"" + format_number(legend_y - 4.0) + "\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\"/>\n";
        svg += "<text x=\"" + format_number(legend_x + 24.0) + "\" y=\"" +
               format_number(legend_y) +
               "\" font-family=\"monospace\" font-size=\"11\">B = " +
               format_number(curve.budget) + "</text>\n";
        legend_y += 14.0;
    }
    if (family.guide_return) {
        svg += "<line x1=\"" + format_number(legend_x) + "\" y1=\"" +
               format_number(legend_y - 4.0) + "\" x2=\"" + format_number(legend_x + 18.0) +
               "\" y2=\"" + format_number(legend_y - 4.0) +
               "\" stroke=\"#000000\" stroke-width=\"1\" stroke-dasharray=\"2,4\"/>\n";
        svg += "<text x=\"" + format_number(legend_x + 24.0) + "\" y=\"" +
               format_number(legend_y) +
               "\" font-family=\"monospace\" font-size=\"11\">R = " +
               format_number(*family.guide_return) + "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

}  // namespace frontier_lab
