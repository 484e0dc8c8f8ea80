#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "frontier_lab/market_data.hpp"

namespace frontier_lab {

/// Lagrangian stationarity system of the constrained variance minimization,
/// assembled directly from (sigma, 1, r) without any A-coefficient algebra:
///
///     [ 2 sigma  1  r ] [ y       ]   [ 0 ]
///     [ 1'       0  0 ] [ lambda_B ] = [ B ]
///     [ r'       0  0 ] [ lambda_R ]   [ R ]
///
/// Nonsingular whenever sigma is SPD and r is not proportional to 1.
struct KktSystem {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
};

KktSystem build_kkt_system(const AssetUniverse& universe,
                           double budget,
                           double target_return);

struct KktSolution {
    Eigen::VectorXd amounts;
    double budget_multiplier = 0.0;
    double return_multiplier = 0.0;
};

/// Solve the KKT system with a dense LU factorization (partial pivoting).
/// This is the verification path for the closed forms: same program, no
/// shared algebra. Throws SingularKkt when the residual check fails
/// (degenerate constraints).
KktSolution solve_kkt(const AssetUniverse& universe,
                      double budget,
                      double target_return);

struct DominanceViolation {
    int trial = 0;
    double variance_drop = 0.0;  ///< candidate variance minus perturbed variance
};

struct DominanceReport {
    int trials = 0;
    Eigen::Index null_space_dim = 0;  ///< n minus rank of {1, r}
    double candidate_variance = 0.0;
    std::vector<DominanceViolation> violations;

    bool passed() const { return violations.empty(); }
};

/// Empirical optimality certificate: perturb the candidate within the null
/// space of both constraint gradients and report every trial whose variance
/// drops by more than 1e-9. Perturbation entries are uniform in [-1, 1]
/// scaled by max(1, ||y||_inf). For n = 2 the null space is trivial and
/// every trial passes vacuously.
DominanceReport dominance_check(const AssetUniverse& universe,
                                const Eigen::VectorXd& candidate,
                                int trials,
                                std::uint64_t seed);

/// Random well-conditioned test universe: sigma = M'M + 0.1 I with M entries
/// uniform in [-1, 1], and expected returns uniform in [0.01, 0.30].
AssetUniverse random_universe(int assets, std::mt19937_64& rng);

}  // namespace frontier_lab
