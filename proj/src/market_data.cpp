#include "frontier_lab/market_data.hpp"

#include <Eigen/Cholesky>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>
#include <utility>

namespace frontier_lab {

namespace {

constexpr double kSymmetryTol = 1e-10;     // relative, element-wise
constexpr double kPivotFloor = 1e-12;      // times max diagonal entry

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream row(line);
    while (std::getline(row, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

// `row` is the 1-based physical line of the file, header included, so the
// number in the message matches what an editor shows.
double parse_cell(const std::string& raw, Eigen::Index row, std::size_t col) {
    const std::string cell = trim(raw);
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc() || result.ptr != end || cell.empty()) {
        throw ParseError("row " + std::to_string(row) + ", column " +
                         std::to_string(col + 1) + ": cannot parse '" + cell +
                         "' as a number");
    }
    return value;
}

void check_finite(const Eigen::VectorXd& r, const Eigen::MatrixXd& sigma) {
    if (!r.allFinite()) {
        throw NonFinite("expected-return vector contains NaN or infinity");
    }
    if (!sigma.allFinite()) {
        throw NonFinite("covariance matrix contains NaN or infinity");
    }
}

void check_symmetry(const Eigen::MatrixXd& sigma) {
    for (Eigen::Index i = 0; i < sigma.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < sigma.cols(); ++j) {
            const double a = sigma(i, j);
            const double b = sigma(j, i);
            const double scale = std::max(std::abs(a), std::abs(b));
            if (std::abs(a - b) > kSymmetryTol * scale) {
                throw AsymmetricCovariance(
                    "covariance entries (" + std::to_string(i) + "," + std::to_string(j) +
                    ") and transpose differ beyond tolerance: " + std::to_string(a) +
                    " vs " + std::to_string(b));
            }
        }
    }
}

// Positive definiteness: Cholesky succeeds and every pivot L(i,i)^2 clears
// the floor relative to the largest diagonal entry. No automatic
// regularization; near-singular data must be fixed upstream.
void check_positive_definite(const Eigen::MatrixXd& sigma) {
    const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw SingularCovariance("covariance matrix is not positive definite");
    }
    const double floor = kPivotFloor * sigma.diagonal().maxCoeff();
    const Eigen::VectorXd diag = llt.matrixLLT().diagonal();
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        if (diag(i) * diag(i) <= floor) {
            throw SingularCovariance("covariance Cholesky pivot " + std::to_string(i) +
                                     " below tolerance; matrix is numerically singular");
        }
    }
}

void check_returns_positive(const std::vector<std::string>& labels,
                            const Eigen::VectorXd& r,
                            const UniverseOptions& options) {
    if (options.allow_nonpositive_returns) return;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        if (!(r(i) > 0.0)) {
            throw NonPositiveReturn("expected return for asset '" + labels[static_cast<std::size_t>(i)] +
                                    "' is " + std::to_string(r(i)) +
                                    "; the model assumes positive expected returns "
                                    "(pass --allow-nonpositive-returns to override)");
        }
    }
}

}  // namespace

ReturnSeries::ReturnSeries(std::vector<std::string> labels, Eigen::MatrixXd observations)
    : labels_(std::move(labels)), observations_(std::move(observations)) {
    const auto assets = static_cast<Eigen::Index>(labels_.size());
    if (observations_.cols() != assets) {
        throw ShapeError("observation matrix has " + std::to_string(observations_.cols()) +
                         " columns for " + std::to_string(assets) + " labels");
    }
    if (!observations_.allFinite()) {
        throw NonFinite("return observations contain NaN or infinity");
    }
    if (observations_.rows() < assets + 1) {
        throw InsufficientData("need at least " + std::to_string(assets + 1) +
                               " observations for " + std::to_string(assets) +
                               " assets, got " + std::to_string(observations_.rows()));
    }
}

ReturnSeries load_returns(std::istream& source) {
    std::string line;
    if (!std::getline(source, line)) {
        throw ParseError("empty returns stream: missing header row");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> labels;
    for (const auto& cell : split_csv_row(line)) {
        const std::string label = trim(cell);
        if (label.empty()) {
            throw ParseError("header contains an empty asset label");
        }
        labels.push_back(label);
    }
    const auto assets = static_cast<Eigen::Index>(labels.size());

    std::vector<double> values;
    Eigen::Index rows = 0;
    Eigen::Index file_line = 1;  // the header was line 1
    while (std::getline(source, line)) {
        ++file_line;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;  // tolerate blank/trailing lines

        const auto cells = split_csv_row(line);
        if (static_cast<Eigen::Index>(cells.size()) != assets) {
            throw ShapeError("row " + std::to_string(file_line) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(assets));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            values.push_back(parse_cell(cells[c], file_line, c));
        }
        ++rows;
    }

    if (rows < assets + 1) {
        throw InsufficientData("need at least " + std::to_string(assets + 1) +
                               " observations for " + std::to_string(assets) +
                               " assets, got " + std::to_string(rows));
    }

    Eigen::MatrixXd observations(rows, assets);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < assets; ++j) {
            observations(i, j) = values[static_cast<std::size_t>(i * assets + j)];
        }
    }
    return ReturnSeries(std::move(labels), std::move(observations));
}

AssetUniverse::AssetUniverse(std::vector<std::string> labels,
                             Eigen::VectorXd expected_returns,
                             Eigen::MatrixXd covariance,
                             const UniverseOptions& options)
    : labels_(std::move(labels)),
      expected_returns_(std::move(expected_returns)),
      covariance_(std::move(covariance)) {
    const auto n = static_cast<Eigen::Index>(labels_.size());
    if (n < 2) {
        throw ShapeError("an asset universe needs at least 2 assets, got " + std::to_string(n));
    }
    if (expected_returns_.size() != n || covariance_.rows() != n || covariance_.cols() != n) {
        throw ShapeError("inconsistent dimensions: " + std::to_string(n) + " labels, " +
                         std::to_string(expected_returns_.size()) + " returns, " +
                         std::to_string(covariance_.rows()) + "x" +
                         std::to_string(covariance_.cols()) + " covariance");
    }
    check_finite(expected_returns_, covariance_);
    check_symmetry(covariance_);
    check_positive_definite(covariance_);
    check_returns_positive(labels_, expected_returns_, options);
}

AssetUniverse estimate_universe(const ReturnSeries& series, const UniverseOptions& options) {
    const Eigen::MatrixXd& obs = series.observations();
    const Eigen::Index periods = obs.rows();

    const Eigen::RowVectorXd means = obs.colwise().mean();
    const Eigen::MatrixXd centered = obs.rowwise() - means;
    // Unbiased estimator, divisor T-1. Fixed, not configurable.
    Eigen::MatrixXd covariance =
        (centered.transpose() * centered) / static_cast<double>(periods - 1);

    return AssetUniverse(series.labels(), means.transpose(), std::move(covariance), options);
}

AssetUniverse universe_from_parts(std::vector<std::string> labels,
                                  Eigen::VectorXd expected_returns,
                                  Eigen::MatrixXd covariance,
                                  const UniverseOptions& options) {
    return AssetUniverse(std::move(labels), std::move(expected_returns),
                         std::move(covariance), options);
}

}  // namespace frontier_lab
