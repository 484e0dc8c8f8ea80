#include "frontier_lab/frontier_core.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace frontier_lab {

namespace {

constexpr double kDegeneracyTol = 1e-12;  // scale-free, relative to A11*Arr
constexpr double kSqrtClampTol = 1e-12;   // apex evaluations hit zero up to rounding

double sign_of(double budget) { return budget < 0.0 ? -1.0 : 1.0; }

void require_nondegenerate(const ACoefficients& coeffs) {
    if (coeffs.degenerate()) {
        throw DegenerateUniverse(
            "expected returns are proportional to ones (D <= " +
            std::to_string(coeffs.degeneracy_bound()) +
            "); budget and return constraints are not independent");
    }
}

// Square-root argument of the frontier formula. Values within rounding of
// the apex collapse to zero so both branches meet there exactly; anything
// further below the apex is an infeasible risk.
double clamp_sqrt_arg(double risk_sq, double min_variance) {
    const double arg = risk_sq - min_variance;
    const double band = kSqrtClampTol * std::max(risk_sq, min_variance);
    if (std::abs(arg) <= band) return 0.0;
    if (arg > 0.0) return arg;
    throw InfeasibleRisk("risk " + std::to_string(std::sqrt(std::max(risk_sq, 0.0))) +
                         " lies below the frontier minimum " +
                         std::to_string(std::sqrt(min_variance)));
}

// Slope-squared of the critical frontier, Arr - A1r^2/A11 = D/A11. Evaluated
// in this form everywhere the frontier is sampled so that slope and frontier
// values agree to the last digits.
double excess_slope_sq(const ACoefficients& coeffs) {
    return coeffs.arr - coeffs.a1r * coeffs.a1r / coeffs.a11;
}

}  // namespace

bool ACoefficients::degenerate() const { return d <= degeneracy_bound(); }

double ACoefficients::degeneracy_bound() const { return kDegeneracyTol * a11 * arr; }

ACoefficients compute_coefficients(const AssetUniverse& universe) {
    const Eigen::Index n = universe.size();
    const Eigen::LLT<Eigen::MatrixXd> llt(universe.covariance());
    if (llt.info() != Eigen::Success) {
        throw SingularCovariance("covariance factorization failed");
    }

    ACoefficients coeffs;
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    coeffs.sigma_inv_ones = llt.solve(ones);
    coeffs.sigma_inv_returns = llt.solve(universe.expected_returns());

    coeffs.a11 = ones.dot(coeffs.sigma_inv_ones);
    coeffs.a1r = universe.expected_returns().dot(coeffs.sigma_inv_ones);
    coeffs.arr = universe.expected_returns().dot(coeffs.sigma_inv_returns);
    coeffs.d = coeffs.a11 * coeffs.arr - coeffs.a1r * coeffs.a1r;

    if (coeffs.a11 <= 0.0 || coeffs.arr <= 0.0) {
        throw SingularCovariance("quadratic forms of the covariance inverse are not positive");
    }
    // D >= 0 by Cauchy-Schwarz; rounding can take it a hair negative when the
    // return vector is proportional to ones.
    if (coeffs.d < 0.0) {
        if (coeffs.d < -coeffs.degeneracy_bound()) {
            throw SingularCovariance("inconsistent quadratic forms (D markedly negative)");
        }
        coeffs.d = 0.0;
    }
    return coeffs;
}

Allocation optimal_allocation(const AssetUniverse& universe,
                              const ACoefficients& coeffs,
                              double budget,
                              double target_return) {
    require_nondegenerate(coeffs);

    const double ones_weight = (coeffs.arr * budget - coeffs.a1r * target_return) / coeffs.d;
    const double returns_weight = (coeffs.a11 * target_return - coeffs.a1r * budget) / coeffs.d;

    Allocation allocation;
    allocation.amounts =
        ones_weight * coeffs.sigma_inv_ones + returns_weight * coeffs.sigma_inv_returns;
    allocation.budget = allocation.amounts.sum();
    allocation.expected_return = allocation.amounts.dot(universe.expected_returns());
    allocation.variance = allocation.amounts.dot(universe.covariance() * allocation.amounts);
    allocation.std_dev = std::sqrt(std::max(allocation.variance, 0.0));
    return allocation;
}

double variance_at_return(const ACoefficients& coeffs, double budget, double target_return) {
    require_nondegenerate(coeffs);
    const double min_variance = budget * budget / coeffs.a11;
    const double excess_return = target_return - coeffs.a1r * budget / coeffs.a11;
    return min_variance + (coeffs.a11 / coeffs.d) * excess_return * excess_return;
}

FrontierPoint minimum_variance_point(const ACoefficients& coeffs, double budget) {
    FrontierPoint apex;
    apex.variance = budget * budget / coeffs.a11;
    apex.risk = std::sqrt(apex.variance);
    apex.ret = coeffs.a1r * budget / coeffs.a11;
    apex.branch = Branch::Upper;
    return apex;
}

double frontier_return_at_risk(const ACoefficients& coeffs,
                               double budget,
                               double risk,
                               Branch branch) {
    require_nondegenerate(coeffs);
    const double min_variance = budget * budget / coeffs.a11;
    const double arg = clamp_sqrt_arg(risk * risk, min_variance);
    const double root = std::sqrt(excess_slope_sq(coeffs) * arg);
    const double base = coeffs.a1r * budget / coeffs.a11;
    return branch == Branch::Upper ? base + root : base - root;
}

std::vector<FrontierPoint> sample_frontier(const ACoefficients& coeffs,
                                           double budget,
                                           double risk_max,
                                           int count) {
    require_nondegenerate(coeffs);
    if (count < 2) {
        throw std::invalid_argument("sample_frontier needs at least 2 points per branch");
    }
    const double apex_risk = std::sqrt(budget * budget / coeffs.a11);
    if (!(risk_max > apex_risk)) {
        throw InfeasibleRisk("risk_max " + std::to_string(risk_max) +
                             " does not exceed the minimum frontier risk " +
                             std::to_string(apex_risk));
    }

    std::vector<FrontierPoint> points;
    points.reserve(static_cast<std::size_t>(2 * count));
    for (const Branch branch : {Branch::Upper, Branch::Lower}) {
        for (int i = 0; i < count; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(count - 1);
            const double risk = apex_risk * (1.0 - t) + risk_max * t;
            FrontierPoint point;
            point.risk = risk;
            point.ret = frontier_return_at_risk(coeffs, budget, risk, branch);
            point.variance = risk * risk;
            point.branch = branch;
            points.push_back(point);
        }
    }
    return points;
}

Eigen::VectorXd critical_relative_weights(const AssetUniverse& universe,
                                          const ACoefficients& coeffs) {
    (void)universe;  // composition is fully determined by the cached solves
    require_nondegenerate(coeffs);
    return (coeffs.a11 * coeffs.sigma_inv_returns - coeffs.a1r * coeffs.sigma_inv_ones) /
           coeffs.d;
}

double critical_frontier_slope(const ACoefficients& coeffs) {
    require_nondegenerate(coeffs);
    return std::sqrt(excess_slope_sq(coeffs));
}

RescaledFrontierPoint rescaled_frontier(const ACoefficients& coeffs,
                                        double budget,
                                        double risk,
                                        Branch branch,
                                        Numeraire convention) {
    if (budget == 0.0) {
        throw CriticalBudget("weight rescaling is ill-defined for B=0: "
                             "no numeraire exists for a critical portfolio");
    }
    require_nondegenerate(coeffs);
    const double min_variance = 1.0 / coeffs.a11;
    const double arg = clamp_sqrt_arg(risk * risk, min_variance);
    const double root = std::sqrt(excess_slope_sq(coeffs) * arg);

    // Branch names the geometric upper/lower branch of the rescaled curve.
    // Under the Budget numeraire the constant term keeps its sign for B < 0
    // (dividing the total frontier by a negative budget flips the branches
    // and the sign of r); under AbsBudget the constant term carries sign(B).
    const double ratio = coeffs.a1r / coeffs.a11;
    const double base = convention == Numeraire::Budget ? ratio : sign_of(budget) * ratio;

    RescaledFrontierPoint point;
    point.risk = risk;
    point.ret = branch == Branch::Upper ? base + root : base - root;
    point.convention = convention;
    point.branch = branch;
    return point;
}

Eigen::VectorXd rescaled_allocation(const AssetUniverse& universe,
                                    const ACoefficients& coeffs,
                                    double budget,
                                    double rescaled_return,
                                    Numeraire convention) {
    (void)universe;
    if (budget == 0.0) {
        throw CriticalBudget("weight rescaling is ill-defined for B=0: "
                             "no numeraire exists for a critical portfolio");
    }
    require_nondegenerate(coeffs);

    const double unit = convention == Numeraire::Budget ? 1.0 : sign_of(budget);
    const double ones_weight = (coeffs.arr * unit - coeffs.a1r * rescaled_return) / coeffs.d;
    const double returns_weight = (coeffs.a11 * rescaled_return - coeffs.a1r * unit) / coeffs.d;
    return ones_weight * coeffs.sigma_inv_ones + returns_weight * coeffs.sigma_inv_returns;
}

BudgetClass classify_budget(double budget) {
    if (!std::isfinite(budget)) {
        throw NonFinite("budget must be finite, got " + std::to_string(budget));
    }
    if (budget > 0.0) return BudgetClass::Subcritical;
    if (budget < 0.0) return BudgetClass::Supercritical;
    return BudgetClass::Critical;
}

const char* to_string(BudgetClass c) {
    switch (c) {
        case BudgetClass::Subcritical: return "subcritical";
        case BudgetClass::Critical: return "critical";
        case BudgetClass::Supercritical: return "supercritical";
    }
    return "unknown";
}

const char* to_string(Branch b) {
    return b == Branch::Upper ? "upper" : "lower";
}

const char* to_string(Numeraire n) {
    return n == Numeraire::Budget ? "budget" : "abs-budget";
}

}  // namespace frontier_lab
