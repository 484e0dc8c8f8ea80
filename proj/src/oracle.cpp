#include "frontier_lab/oracle.hpp"

#include <Eigen/LU>
#include <cmath>
#include <string>

namespace frontier_lab {

namespace {

constexpr double kResidualTol = 1e-9;  // relative to ||rhs||_inf
constexpr double kDominanceTol = 1e-9;

// Orthonormal basis of span{1, r}. Returns one or two columns; one column
// signals rank deficiency (r proportional to ones).
Eigen::MatrixXd constraint_basis(const Eigen::VectorXd& returns) {
    const Eigen::Index n = returns.size();
    Eigen::MatrixXd basis(n, 2);
    basis.col(0) = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    Eigen::VectorXd residual = returns - basis.col(0).dot(returns) * basis.col(0);
    const double norm = residual.norm();
    if (norm <= 1e-12 * returns.norm()) {
        return basis.leftCols(1);
    }
    basis.col(1) = residual / norm;
    return basis;
}

}  // namespace

KktSystem build_kkt_system(const AssetUniverse& universe,
                           double budget,
                           double target_return) {
    const Eigen::Index n = universe.size();
    KktSystem system;
    system.matrix = Eigen::MatrixXd::Zero(n + 2, n + 2);
    system.matrix.topLeftCorner(n, n) = 2.0 * universe.covariance();
    system.matrix.block(0, n, n, 1) = Eigen::VectorXd::Ones(n);
    system.matrix.block(0, n + 1, n, 1) = universe.expected_returns();
    system.matrix.block(n, 0, 1, n) = Eigen::RowVectorXd::Ones(n);
    system.matrix.block(n + 1, 0, 1, n) = universe.expected_returns().transpose();

    system.rhs = Eigen::VectorXd::Zero(n + 2);
    system.rhs(n) = budget;
    system.rhs(n + 1) = target_return;
    return system;
}

KktSolution solve_kkt(const AssetUniverse& universe,
                      double budget,
                      double target_return) {
    const Eigen::Index n = universe.size();
    const KktSystem system = build_kkt_system(universe, budget, target_return);

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system.matrix);
    const Eigen::VectorXd solution = lu.solve(system.rhs);

    const double residual = (system.matrix * solution - system.rhs).lpNorm<Eigen::Infinity>();
    const double tol = kResidualTol * system.rhs.lpNorm<Eigen::Infinity>();
    if (!solution.allFinite() || !(residual <= tol)) {
        throw SingularKkt("KKT system is numerically singular (residual " +
                          std::to_string(residual) +
                          "); the constraint set is degenerate");
    }

    KktSolution result;
    result.amounts = solution.head(n);
    result.budget_multiplier = solution(n);
    result.return_multiplier = solution(n + 1);
    return result;
}

DominanceReport dominance_check(const AssetUniverse& universe,
                                const Eigen::VectorXd& candidate,
                                int trials,
                                std::uint64_t seed) {
    if (!candidate.allFinite()) {
        throw NonFinite("dominance candidate contains NaN or infinity");
    }
    const Eigen::Index n = universe.size();
    const Eigen::MatrixXd basis = constraint_basis(universe.expected_returns());

    DominanceReport report;
    report.trials = trials;
    report.null_space_dim = n - basis.cols();
    report.candidate_variance = candidate.dot(universe.covariance() * candidate);

    const double scale = std::max(1.0, candidate.lpNorm<Eigen::Infinity>());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);

    for (int trial = 0; trial < trials; ++trial) {
        Eigen::VectorXd raw(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            raw(i) = uniform(rng) * scale;
        }
        // Project out both constraint gradients so y + z stays feasible.
        const Eigen::VectorXd z = raw - basis * (basis.transpose() * raw);
        const Eigen::VectorXd perturbed = candidate + z;
        const double variance = perturbed.dot(universe.covariance() * perturbed);
        if (variance < report.candidate_variance - kDominanceTol) {
            report.violations.push_back({trial, report.candidate_variance - variance});
        }
    }
    return report;
}

AssetUniverse random_universe(int assets, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    std::uniform_real_distribution<double> ret(0.01, 0.30);

    Eigen::MatrixXd m(assets, assets);
    for (Eigen::Index i = 0; i < assets; ++i) {
        for (Eigen::Index j = 0; j < assets; ++j) {
            m(i, j) = entry(rng);
        }
    }
    Eigen::MatrixXd sigma = m.transpose() * m;
    sigma.diagonal().array() += 0.1;

    Eigen::VectorXd returns(assets);
    for (Eigen::Index i = 0; i < assets; ++i) {
        returns(i) = ret(rng);
    }

    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(assets));
    for (int i = 0; i < assets; ++i) {
        labels.push_back("A" + std::to_string(i));
    }
    return AssetUniverse(std::move(labels), std::move(returns), std::move(sigma));
}

}  // namespace frontier_lab
