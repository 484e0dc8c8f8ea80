#pragma once

#include <iosfwd>
#include <string>

#include "frontier_lab/frontier_core.hpp"
#include "frontier_lab/market_data.hpp"

namespace frontier_lab {

// JSON interchange. Universe schema:
//   {"labels": [...], "expected_returns": [...], "covariance": [[...], ...]}
// with the covariance row-major. Allocation output adds the budget class and
// realized statistics, plus relative weights for critical portfolios.

std::string universe_to_json(const AssetUniverse& universe);

AssetUniverse universe_from_json(std::istream& source,
                                 const UniverseOptions& options = {});
AssetUniverse universe_from_json_text(const std::string& text,
                                      const UniverseOptions& options = {});

/// Allocation report for the CLI: amounts keyed to labels, class name,
/// realized budget/return/variance/std_dev; `relative_weights` is present
/// only when the portfolio is critical.
std::string allocation_to_json(const AssetUniverse& universe,
                               const Allocation& allocation,
                               BudgetClass budget_class,
                               const Eigen::VectorXd* relative_weights);

}  // namespace frontier_lab
