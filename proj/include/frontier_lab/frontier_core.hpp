#pragma once

#include <Eigen/Dense>
#include <vector>

#include "frontier_lab/errors.hpp"
#include "frontier_lab/market_data.hpp"

namespace frontier_lab {

/**
 * Closed-form machinery for the budget-generalized mean-variance problem
 *
 *     minimize y' sigma y   s.t.   y' 1 = B   and   y' r = R,
 *
 * stated in currency amounts y rather than weights, so the budget B may be
 * positive, zero or negative. Everything below derives from the three
 * quadratic forms of sigma^-1 with the ones vector and the return vector.
 */

/// Leverage regime of a portfolio, keyed on the exact sign of the budget.
enum class BudgetClass {
    Subcritical,    ///< B > 0: long positions dominate
    Critical,       ///< B = 0: shorts exactly offset longs
    Supercritical,  ///< B < 0: short positions dominate
};

/// Which sign of the frontier square root a point belongs to.
enum class Branch {
    Upper,  ///< investor-preferred branch, higher return at equal risk
    Lower,
};

/// Unit used when rescaling amounts into weights: the budget itself, or its
/// absolute value. The two agree for B > 0 and differ in sign bookkeeping
/// for B < 0; neither is defined at B = 0.
enum class Numeraire {
    Budget,
    AbsBudget,
};

/// The scalar coefficients
///
///     A11 = 1' sigma^-1 1,  A1r = 1' sigma^-1 r,  Arr = r' sigma^-1 r,
///     D   = A11 Arr - A1r^2  (>= 0 by Cauchy-Schwarz, = 0 iff r ~ 1),
///
/// cached together with the two triangular solves sigma^-1 1 and sigma^-1 r
/// they came from, so no caller ever forms sigma^-1 explicitly.
struct ACoefficients {
    double a11 = 0.0;
    double a1r = 0.0;
    double arr = 0.0;
    double d = 0.0;

    Eigen::VectorXd sigma_inv_ones;     ///< cached solve sigma^-1 1
    Eigen::VectorXd sigma_inv_returns;  ///< cached solve sigma^-1 r

    /// Scale-free test for r proportional to ones: d <= 1e-12 * a11 * arr.
    bool degenerate() const;

    /// Relative tolerance bound used by degenerate().
    double degeneracy_bound() const;
};

/// An optimal portfolio in currency amounts, with its realized statistics.
/// amounts.sum() reproduces the requested budget and amounts' r the requested
/// return up to rounding; variance is the quadratic form amounts' sigma
/// amounts and is positive whenever amounts != 0, whatever the sign of the
/// budget.
struct Allocation {
    Eigen::VectorXd amounts;      ///< currency per asset, negative = short
    double budget = 0.0;          ///< realized sum of amounts
    double expected_return = 0.0; ///< realized amounts' r
    double variance = 0.0;        ///< amounts' sigma amounts
    double std_dev = 0.0;         ///< sqrt(variance)
};

/// One point of an efficient frontier in total (currency) variables.
struct FrontierPoint {
    double risk = 0.0;      ///< standard deviation, >= frontier minimum
    double ret = 0.0;       ///< expected return at that risk
    double variance = 0.0;  ///< risk^2
    Branch branch = Branch::Upper;
};

/// One point of a rescaled (weight-space) frontier; only defined for B != 0.
struct RescaledFrontierPoint {
    double risk = 0.0;  ///< total risk / |B|
    double ret = 0.0;   ///< total return / B  (Budget) or / |B| (AbsBudget)
    Numeraire convention = Numeraire::Budget;
    Branch branch = Branch::Upper;
};

/// Compute the A-coefficients of a universe through one Cholesky
/// factorization of sigma and two triangular solves. Throws
/// SingularCovariance if the factorization fails (defensive re-check; a
/// validated universe cannot trip it).
ACoefficients compute_coefficients(const AssetUniverse& universe);

/// Minimum-variance allocation meeting both constraints:
///
///     y = [(Arr B - A1r R)/D] sigma^-1 1 + [(A11 R - A1r B)/D] sigma^-1 r.
///
/// For B = 0 this reduces to the one-fund form R * sigma^-1(A11 r - A1r 1)/D.
/// Throws DegenerateUniverse when D fails the degeneracy bound.
Allocation optimal_allocation(const AssetUniverse& universe,
                              const ACoefficients& coeffs,
                              double budget,
                              double target_return);

/// Variance of the optimal portfolio at (B, R) without forming it:
///
///     V = B^2/A11 + (A11/D) (R - A1r B / A11)^2.
double variance_at_return(const ACoefficients& coeffs,
                          double budget,
                          double target_return);

/// Frontier apex: V_min = B^2/A11 at R_min = A1r B / A11. Well-defined even
/// for a degenerate universe; R_min carries the sign of B.
FrontierPoint minimum_variance_point(const ACoefficients& coeffs, double budget);

/// Efficient-frontier return at a given risk:
///
///     R = (A1r/A11) B +/- sqrt[(Arr - A1r^2/A11)(Sigma^2 - B^2/A11)].
///
/// The square-root argument is clamped to zero when within rounding of the
/// apex; risks below that throw InfeasibleRisk.
double frontier_return_at_risk(const ACoefficients& coeffs,
                               double budget,
                               double risk,
                               Branch branch);

/// Sample both frontier branches on a uniform risk grid from the apex to
/// risk_max: `count` points per branch, Upper branch first, risk ascending.
std::vector<FrontierPoint> sample_frontier(const ACoefficients& coeffs,
                                           double budget,
                                           double risk_max,
                                           int count);

/// Composition of the critical (B = 0) portfolio per unit of expected
/// return: w = sigma^-1(A11 r - A1r 1)/D. Sums to zero, and w' r = 1; every
/// critical optimal portfolio is R * w.
Eigen::VectorXd critical_relative_weights(const AssetUniverse& universe,
                                          const ACoefficients& coeffs);

/// Slope s = sqrt(Arr - A1r^2/A11) of the critical frontier R = +/- s Sigma,
/// the pair of straight lines the hyperbola degenerates into at B = 0.
double critical_frontier_slope(const ACoefficients& coeffs);

/// Frontier in rescaled (weight) variables sigma = Sigma/|B|, r = R/B or
/// R/|B| per convention. The branch tag always names the geometrically
/// upper/lower branch of the rescaled curve; for B < 0 this is where the
/// branch flip (and, under the Budget numeraire, the sign reversal of r)
/// relative to the total-variable frontier shows up. Throws CriticalBudget
/// for B = 0, where the rescaling breaks down.
RescaledFrontierPoint rescaled_frontier(const ACoefficients& coeffs,
                                        double budget,
                                        double risk,
                                        Branch branch,
                                        Numeraire convention);

/// Weight vector of the optimal portfolio at rescaled return r. Under the
/// Budget numeraire x' 1 = 1; under AbsBudget x' 1 = sign(B). Multiplying by
/// B (resp. |B|) reproduces optimal_allocation.
Eigen::VectorXd rescaled_allocation(const AssetUniverse& universe,
                                    const ACoefficients& coeffs,
                                    double budget,
                                    double rescaled_return,
                                    Numeraire convention);

/// Exact sign classification; throws NonFinite for NaN or infinite budgets.
/// No tolerance band: budgets are user inputs, not computed quantities.
BudgetClass classify_budget(double budget);

const char* to_string(BudgetClass c);
const char* to_string(Branch b);
const char* to_string(Numeraire n);

}  // namespace frontier_lab
