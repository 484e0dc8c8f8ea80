#include "frontier_lab/json_io.hpp"

#include <istream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "frontier_lab/errors.hpp"

namespace frontier_lab {

namespace {

using nlohmann::json;

json require_field(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) {
        throw ParseError(std::string("universe json: missing field '") + key + "'");
    }
    return *it;
}

std::vector<std::string> parse_labels(const json& node) {
    if (!node.is_array()) {
        throw ParseError("universe json: 'labels' must be an array of strings");
    }
    std::vector<std::string> labels;
    labels.reserve(node.size());
    for (const json& item : node) {
        if (!item.is_string()) {
            throw ParseError("universe json: 'labels' must be an array of strings");
        }
        labels.push_back(item.get<std::string>());
    }
    return labels;
}

Eigen::VectorXd parse_vector(const json& node, const char* key) {
    if (!node.is_array()) {
        throw ParseError(std::string("universe json: '") + key + "' must be a numeric array");
    }
    Eigen::VectorXd values(static_cast<Eigen::Index>(node.size()));
    Eigen::Index i = 0;
    for (const json& item : node) {
        if (!item.is_number()) {
            throw ParseError(std::string("universe json: '") + key + "' must be a numeric array");
        }
        values[i++] = item.get<double>();
    }
    return values;
}

Eigen::MatrixXd parse_matrix(const json& node, const char* key) {
    if (!node.is_array() || node.empty()) {
        throw ParseError(std::string("universe json: '") + key +
                         "' must be a non-empty array of numeric rows");
    }
    const auto rows = static_cast<Eigen::Index>(node.size());
    Eigen::Index cols = -1;
    Eigen::MatrixXd matrix;
    Eigen::Index r = 0;
    for (const json& row : node) {
        if (!row.is_array()) {
            throw ParseError(std::string("universe json: '") + key +
                             "' must be an array of numeric rows");
        }
        if (cols < 0) {
            cols = static_cast<Eigen::Index>(row.size());
            matrix.resize(rows, cols);
        }
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw ShapeError(std::string("universe json: '") + key + "' rows have unequal length");
        }
        Eigen::Index c = 0;
        for (const json& item : row) {
            if (!item.is_number()) {
                throw ParseError(std::string("universe json: '") + key +
                                 "' must contain only numbers");
            }
            matrix(r, c++) = item.get<double>();
        }
        ++r;
    }
    return matrix;
}

json vector_to_json(const Eigen::VectorXd& values) {
    json node = json::array();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        node.push_back(values[i]);
    }
    return node;
}

}  // namespace

std::string universe_to_json(const AssetUniverse& universe) {
    json doc;
    doc["labels"] = universe.labels();
    doc["expected_returns"] = vector_to_json(universe.expected_returns());
    json rows = json::array();
    const Eigen::MatrixXd& sigma = universe.covariance();
    for (Eigen::Index r = 0; r < sigma.rows(); ++r) {
        rows.push_back(vector_to_json(sigma.row(r).transpose()));
    }
    doc["covariance"] = rows;
    return doc.dump(2) + "\n";
}

AssetUniverse universe_from_json_text(const std::string& text, const UniverseOptions& options) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& error) {
        throw ParseError(std::string("universe json: ") + error.what());
    }
    if (!doc.is_object()) {
        throw ParseError("universe json: top level must be an object");
    }
    std::vector<std::string> labels = parse_labels(require_field(doc, "labels"));
    Eigen::VectorXd returns = parse_vector(require_field(doc, "expected_returns"),
                                           "expected_returns");
    Eigen::MatrixXd covariance = parse_matrix(require_field(doc, "covariance"), "covariance");
    return universe_from_parts(std::move(labels), std::move(returns), std::move(covariance),
                               options);
}

AssetUniverse universe_from_json(std::istream& source, const UniverseOptions& options) {
    std::ostringstream buffer;
    buffer << source.rdbuf();
    if (source.bad()) {
        throw IoError("failed to read universe json stream");
    }
    return universe_from_json_text(buffer.str(), options);
}

std::string allocation_to_json(const AssetUniverse& universe,
                               const Allocation& allocation,
                               BudgetClass budget_class,
                               const Eigen::VectorXd* relative_weights) {
    json doc;
    doc["budget_class"] = to_string(budget_class);
    doc["budget"] = allocation.budget;
    doc["expected_return"] = allocation.expected_return;
    doc["variance"] = allocation.variance;
    doc["std_dev"] = allocation.std_dev;
    json amounts = json::object();
    const std::vector<std::string>& labels = universe.labels();
    for (Eigen::Index i = 0; i < allocation.amounts.size(); ++i) {
        amounts[labels[static_cast<std::size_t>(i)]] = allocation.amounts[i];
    }
    doc["amounts"] = amounts;
    if (relative_weights != nullptr) {
        json weights = json::object();
        for (Eigen::Index i = 0; i < relative_weights->size(); ++i) {
            weights[labels[static_cast<std::size_t>(i)]] = (*relative_weights)[i];
        }
        doc["relative_weights"] = weights;
    }
    return doc.dump(2) + "\n";
}

}  // namespace frontier_lab
