#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "frontier_lab/errors.hpp"

namespace frontier_lab {

/// Validation knobs shared by the universe factories.
struct UniverseOptions {
    /// Accept estimated/supplied expected returns <= 0 instead of throwing
    /// NonPositiveReturn. Off by default: the closed forms do not need
    /// positive returns, but the model assumes them, so violations fail loudly.
    bool allow_nonpositive_returns = false;
};

/// Per-period simple returns: rows are periods, columns are assets.
///
/// A series is valid only if every row has one cell per label and there are
/// at least n+1 rows for n assets (fewer makes the sample covariance
/// singular by construction).
class ReturnSeries {
public:
    ReturnSeries(std::vector<std::string> labels, Eigen::MatrixXd observations);

    const std::vector<std::string>& labels() const { return labels_; }
    const Eigen::MatrixXd& observations() const { return observations_; }

    Eigen::Index asset_count() const { return observations_.cols(); }
    Eigen::Index period_count() const { return observations_.rows(); }

private:
    std::vector<std::string> labels_;
    Eigen::MatrixXd observations_;
};

/// A validated asset universe: labels, expected-return vector r and
/// covariance matrix sigma.
///
/// Construction enforces the invariants every downstream computation relies
/// on: sigma symmetric within 1e-10 relative element-wise, positive definite
/// (Cholesky pivots > 1e-12 * max diagonal), n >= 2, and r_i > 0 unless
/// explicitly overridden.
class AssetUniverse {
public:
    AssetUniverse(std::vector<std::string> labels,
                  Eigen::VectorXd expected_returns,
                  Eigen::MatrixXd covariance,
                  const UniverseOptions& options = {});

    const std::vector<std::string>& labels() const { return labels_; }
    const Eigen::VectorXd& expected_returns() const { return expected_returns_; }
    const Eigen::MatrixXd& covariance() const { return covariance_; }

    Eigen::Index size() const { return expected_returns_.size(); }

private:
    std::vector<std::string> labels_;
    Eigen::VectorXd expected_returns_;
    Eigen::MatrixXd covariance_;
};

/// Parse a returns CSV: header row of labels, then one comma-separated row of
/// per-period simple returns per period. UTF-8, LF or CRLF, no quoting.
///
/// Throws ParseError (non-numeric cell), ShapeError (ragged row) or
/// InsufficientData (fewer than n+1 data rows).
ReturnSeries load_returns(std::istream& source);

/// Column means and unbiased (divisor T-1) sample covariance of a series,
/// validated into an AssetUniverse.
AssetUniverse estimate_universe(const ReturnSeries& series,
                                const UniverseOptions& options = {});

/// Validate explicit statistics into an AssetUniverse.
AssetUniverse universe_from_parts(std::vector<std::string> labels,
                                  Eigen::VectorXd expected_returns,
                                  Eigen::MatrixXd covariance,
                                  const UniverseOptions& options = {});

}  // namespace frontier_lab
