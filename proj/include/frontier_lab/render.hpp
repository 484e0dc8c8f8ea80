#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frontier_lab/frontier_core.hpp"

namespace frontier_lab {

/// A family of efficient frontiers over several budgets, ready for export.
/// Curves are kept sorted by descending budget and share one risk axis.
struct FrontierCurve {
    double budget = 0.0;
    std::vector<FrontierPoint> points;
};

struct FrontierFamily {
    std::string universe_label;
    std::vector<FrontierCurve> curves;
    std::optional<double> guide_return;  ///< horizontal constant-return guide line
};

/// Assemble a family, sorting curves by descending budget.
FrontierFamily make_frontier_family(std::string universe_label,
                                    std::vector<FrontierCurve> curves,
                                    std::optional<double> guide_return = std::nullopt);

/// CSV export: header "budget,branch,risk,ret", rows ordered by
/// (budget descending, branch, risk ascending), 12 significant digits.
/// Byte-deterministic for identical inputs.
std::string family_to_csv(const FrontierFamily& family);

/// Standalone SVG 1.1 plot: one polyline per (budget, branch), axes labeled
/// &#931; (risk) and R (return), legend keyed by budget, dotted guide line when guide_return
/// is set. The risk axis starts at 0 and the return axis always includes the
/// origin, so a critical curve renders as two straight segments through it.
/// Byte-deterministic; throws DegenerateRange if all points coincide.
std::string family_to_svg(const FrontierFamily& family, int width, int height);

/// Fixed 12-significant-digit decimal formatting shared by CSV and SVG.
std::string format_number(double value);

}  // namespace frontier_lab
