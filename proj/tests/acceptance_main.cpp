// Acceptance gate: end-to-end checks of the optimizer, its independent KKT
// oracle, and the CLI pipeline. Each criterion prints exactly one line,
// [PASS] or [FAIL], with the measured quantities; the process exits with the
// number of failed criteria.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "frontier_lab/frontier_core.hpp"
#include "frontier_lab/json_io.hpp"
#include "frontier_lab/market_data.hpp"
#include "frontier_lab/oracle.hpp"
#include "frontier_lab/render.hpp"

namespace fs = std::filesystem;
using namespace frontier_lab;

namespace {

std::string fmt(const char* pattern, ...) {
    va_list args;
    va_start(args, pattern);
    char buffer[512];
    std::vsnprintf(buffer, sizeof(buffer), pattern, args);
    va_end(args);
    return buffer;
}

AssetUniverse example_universe() {
    std::ifstream in(std::string(TEST_DATA_DIR) + "/example_universe.json");
    if (!in) throw IoError("missing example universe fixture");
    return universe_from_json(in);
}

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("frontier_acceptance_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run_cli(const std::string& args) {
    const std::string command = std::string(FRONTIER_LAB_BIN) + " " + args +
                                " > /dev/null 2> /dev/null";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct CsvRow {
    double budget = 0.0;
    std::string branch;
    double risk = 0.0;
    double ret = 0.0;
};

std::vector<CsvRow> parse_frontier_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (line != "budget,branch,risk,ret") throw ParseError("unexpected csv header: " + line);
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream cells(line);
        CsvRow row;
        std::string cell;
        std::getline(cells, cell, ',');
        row.budget = std::strtod(cell.c_str(), nullptr);
        std::getline(cells, row.branch, ',');
        std::getline(cells, cell, ',');
        row.risk = std::strtod(cell.c_str(), nullptr);
        std::getline(cells, cell, ',');
        row.ret = std::strtod(cell.c_str(), nullptr);
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------- criteria
// Each returns the pass/detail message; throws or returns a failure message
// prefixed with "FAIL " on violation.

std::string criterion_oracle_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240815ULL);
    std::uniform_real_distribution<double> span(-10.0, 10.0);
    double max_alloc_diff = 0.0;
    double max_var_diff = 0.0;
    for (int i = 0; i < 500; ++i) {
        const AssetUniverse universe = random_universe(2 + static_cast<int>(rng() % 9), rng);
        const ACoefficients coeffs = compute_coefficients(universe);
        const double budget = span(rng);
        const double target = span(rng);

        const Allocation closed = optimal_allocation(universe, coeffs, budget, target);
        const KktSolution kkt = solve_kkt(universe, budget, target);
        const double scale = std::max(1.0, kkt.amounts.lpNorm<Eigen::Infinity>());
        max_alloc_diff = std::max(
            max_alloc_diff, (closed.amounts - kkt.amounts).lpNorm<Eigen::Infinity>() / scale);

        const double predicted = variance_at_return(coeffs, budget, target);
        max_var_diff = std::max(max_var_diff, std::abs(closed.variance - predicted) /
                                                  std::max(1.0, std::abs(predicted)));
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (max_alloc_diff > 1e-8)
        return fmt("FAIL max allocation diff %.3e exceeds 1e-8", max_alloc_diff);
    if (max_var_diff > 1e-8)
        return fmt("FAIL max variance diff %.3e exceeds 1e-8", max_var_diff);
    if (seconds >= 5.0) return fmt("FAIL sweep took %.2fs (budget 5s)", seconds);
    return fmt("500 instances, max alloc diff %.2e, max var diff %.2e, %.2fs",
               max_alloc_diff, max_var_diff, seconds);
}

std::string criterion_critical_linearity() {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> magnitude(0.1, 5.0);
    double worst = 0.0;
    for (int u = 0; u < 100; ++u) {
        const AssetUniverse universe = random_universe(2 + static_cast<int>(rng() % 7), rng);
        const ACoefficients coeffs = compute_coefficients(universe);
        const double slope = critical_frontier_slope(coeffs);
        double first_ratio = 0.0;
        for (int k = 0; k < 20; ++k) {
            const double target = (rng() % 2 == 0 ? 1.0 : -1.0) * magnitude(rng);
            const double ratio =
                std::sqrt(variance_at_return(coeffs, 0.0, target)) / std::abs(target);
            if (k == 0) first_ratio = ratio;
            worst = std::max(worst, std::abs(ratio - first_ratio) / first_ratio);
            worst = std::max(worst, std::abs(ratio * slope - 1.0));
        }
    }
    if (worst > 1e-12) return fmt("FAIL risk/return ratio varies by %.3e (> 1e-12)", worst);
    return fmt("100 universes x 20 returns, max relative ratio deviation %.2e", worst);
}

std::string criterion_one_fund() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> magnitude(0.1, 5.0);
    double worst_scaling = 0.0;
    double worst_sum = 0.0;
    for (int u = 0; u < 100; ++u) {
        const AssetUniverse universe = random_universe(2 + static_cast<int>(rng() % 9), rng);
        const ACoefficients coeffs = compute_coefficients(universe);
        const Eigen::VectorXd weights = critical_relative_weights(universe, coeffs);
        worst_sum = std::max(worst_sum, std::abs(weights.sum()));
        for (int k = 0; k < 20; ++k) {
            const double target = (rng() % 2 == 0 ? 1.0 : -1.0) * magnitude(rng);
            const Allocation alloc = optimal_allocation(universe, coeffs, 0.0, target);
            const Eigen::VectorXd expected = target * weights;
            const double diff = (alloc.amounts - expected).lpNorm<Eigen::Infinity>() /
                                expected.lpNorm<Eigen::Infinity>();
            worst_scaling = std::max(worst_scaling, diff);
        }
    }
    if (worst_scaling > 1e-12)
        return fmt("FAIL allocation deviates from R*w by %.3e (> 1e-12)", worst_scaling);
    if (worst_sum > 1e-12)
        return fmt("FAIL relative weights sum to %.3e (> 1e-12)", worst_sum);
    return fmt("max scaling deviation %.2e, max weight sum %.2e", worst_scaling, worst_sum);
}

std::string criterion_degeneration_limit() {
    const AssetUniverse universe = example_universe();
    const ACoefficients coeffs = compute_coefficients(universe);
    const double critical_value = critical_frontier_slope(coeffs) * 1.0;

    const std::vector<double> budgets{1.0, 0.1, 0.01, 0.0};
    std::vector<double> gaps;
    for (double budget : budgets) {
        const double ret = frontier_return_at_risk(coeffs, budget, 1.0, Branch::Upper);
        gaps.push_back(std::abs(ret - critical_value));
    }
    if (gaps[3] != 0.0)
        return fmt("FAIL zero-budget frontier misses the critical line by %.3e", gaps[3]);
    if (!(gaps[0] > gaps[1] && gaps[1] > gaps[2] && gaps[2] > gaps[3]))
        return fmt("FAIL gaps not monotone: %.3e, %.3e, %.3e, %.3e", gaps[0], gaps[1],
                   gaps[2], gaps[3]);
    // Linear convergence: fit C on the smallest positive budget (the limit
    // slope of the gap) and require |R(B) - s| <= C*B for the larger ones.
    const double fitted = gaps[2] / 0.01;
    for (std::size_t i = 0; i < 3; ++i) {
        if (gaps[i] > fitted * budgets[i] * (1.0 + 1e-9))
            return fmt("FAIL gap %.3e at B=%g exceeds fitted bound %.3e", gaps[i], budgets[i],
                       fitted * budgets[i]);
    }
    // The critical curve passes through the origin exactly.
    if (frontier_return_at_risk(coeffs, 0.0, 0.0, Branch::Upper) != 0.0 ||
        minimum_variance_point(coeffs, 0.0).risk != 0.0 ||
        minimum_variance_point(coeffs, 0.0).ret != 0.0)
        return "FAIL zero-budget curve does not pass through the origin exactly";
    return fmt("gaps %.3e > %.3e > %.3e > 0, fitted C=%.4f", gaps[0], gaps[1], gaps[2],
               fitted);
}

std::string criterion_budget_sign_mirror() {
    const AssetUniverse universe = example_universe();
    const ACoefficients coeffs = compute_coefficients(universe);

    std::vector<FrontierCurve> curves(2);
    curves[0].budget = 1.0;
    curves[0].points = sample_frontier(coeffs, 1.0, 0.25, 41);
    curves[1].budget = -1.0;
    curves[1].points = sample_frontier(coeffs, -1.0, 0.25, 41);
    const std::string csv =
        family_to_csv(make_frontier_family("mirror", std::move(curves)));

    std::vector<CsvRow> pos_upper, pos_lower, neg_upper, neg_lower;
    for (const CsvRow& row : parse_frontier_csv(csv)) {
        if (row.budget == 1.0)
            (row.branch == "upper" ? pos_upper : pos_lower).push_back(row);
        else
            (row.branch == "upper" ? neg_upper : neg_lower).push_back(row);
    }
    if (pos_upper.size() != 41 || neg_lower.size() != 41 || pos_lower.size() != 41 ||
        neg_upper.size() != 41)
        return "FAIL unexpected csv row counts";

    double worst = 0.0;
    for (std::size_t i = 0; i < 41; ++i) {
        if (pos_upper[i].risk != neg_lower[i].risk || pos_lower[i].risk != neg_upper[i].risk)
            return "FAIL mirrored risk grids differ";
        worst = std::max(worst, std::abs(pos_upper[i].ret + neg_lower[i].ret));
        worst = std::max(worst, std::abs(pos_lower[i].ret + neg_upper[i].ret));
    }
    if (worst > 1e-12)
        return fmt("FAIL mirror discrepancy %.3e exceeds 1e-12", worst);
    return fmt("41-point branches, max |R(1) + R(-1)| = %.2e", worst);
}

std::string criterion_risk_monotonicity() {
    const AssetUniverse universe = example_universe();
    const ACoefficients coeffs = compute_coefficients(universe);
    const std::vector<double> budgets{2.0, 1.0, 0.0, -1.0, -2.0};
    const double target = 0.008;
    for (double budget : budgets) {
        if (target <= minimum_variance_point(coeffs, budget).ret)
            return fmt("FAIL target %.4f not above the apex of B=%g", target, budget);
    }
    std::vector<double> risks;
    for (double budget : budgets) {
        risks.push_back(std::sqrt(variance_at_return(coeffs, budget, target)));
    }
    for (std::size_t i = 1; i < risks.size(); ++i) {
        if (risks[i] < risks[i - 1])
            return fmt("FAIL risk fell from %.6e to %.6e as budget dropped", risks[i - 1],
                       risks[i]);
    }
    return fmt("R=%.3f: risks %.4f <= %.4f <= %.4f <= %.4f <= %.4f as B falls 2 -> -2",
               target, risks[0], risks[1], risks[2], risks[3], risks[4]);
}

std::string criterion_rescaling_consistency() {
    const AssetUniverse universe = example_universe();
    const ACoefficients coeffs = compute_coefficients(universe);
    const double apex = 1.0 / std::sqrt(coeffs.a11);
    double worst = 0.0;

    for (double risk : {apex * 1.0001, apex * 1.5, apex * 3.0}) {
        for (Branch branch : {Branch::Upper, Branch::Lower}) {
            // B > 0: scaling the rescaled curve by B recovers the total curve.
            const double scaled =
                2.0 * rescaled_frontier(coeffs, 2.0, risk, branch, Numeraire::Budget).ret;
            const double total = frontier_return_at_risk(coeffs, 2.0, 2.0 * risk, branch);
            worst = std::max(worst, std::abs(scaled - total));

            // B < 0: branch flip plus sign reversal against the total curve.
            const Branch flipped =
                branch == Branch::Upper ? Branch::Lower : Branch::Upper;
            const double neg_scaled =
                rescaled_frontier(coeffs, -2.0, risk, branch, Numeraire::Budget).ret;
            const double neg_total =
                frontier_return_at_risk(coeffs, -2.0, 2.0 * risk, flipped) / -2.0;
            worst = std::max(worst, std::abs(neg_scaled - neg_total));
        }
    }
    if (worst > 1e-12) return fmt("FAIL rescaling mismatch %.3e exceeds 1e-12", worst);

    bool rejected = false;
    try {
        rescaled_frontier(coeffs, 0.0, apex * 2.0, Branch::Upper, Numeraire::Budget);
    } catch (const CriticalBudget&) {
        rejected = true;
    }
    if (!rejected) return "FAIL zero budget rescaling was not rejected";
    return fmt("max mismatch %.2e across both signs; B=0 rejected", worst);
}

std::string criterion_dominance() {
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> span(-5.0, 5.0);
    long long violations = 0;
    for (int i = 0; i < 50; ++i) {
        const AssetUniverse universe = random_universe(2 + static_cast<int>(rng() % 9), rng);
        const ACoefficients coeffs = compute_coefficients(universe);
        const Allocation alloc =
            optimal_allocation(universe, coeffs, span(rng), span(rng));
        const DominanceReport report =
            dominance_check(universe, alloc.amounts, 1000, rng());
        violations += static_cast<long long>(report.violations.size());
    }
    if (violations != 0)
        return fmt("FAIL %lld variance-decrease violations beyond 1e-9", violations);
    return "50 instances x 1000 null-space trials, zero violations";
}

std::string criterion_degenerate_detection() {
    std::mt19937_64 rng(17);
    int checked = 0;
    for (int n : {2, 3, 5}) {
        for (double level : {0.01, 1.0, 7.0}) {
            const Eigen::MatrixXd sigma = random_universe(n, rng).covariance();
            std::vector<std::string> labels;
            for (int i = 0; i < n; ++i) labels.push_back("A" + std::to_string(i));
            const AssetUniverse universe = universe_from_parts(
                labels, Eigen::VectorXd::Constant(n, level), sigma);
            const ACoefficients coeffs = compute_coefficients(universe);
            if (coeffs.d > 1e-12 * coeffs.a11 * coeffs.arr)
                return fmt("FAIL D=%.3e above bound for n=%d level=%g", coeffs.d, n, level);
            if (!coeffs.degenerate()) return "FAIL degenerate() did not trip";

            int thrown = 0;
            const auto expect_throw = [&thrown](const std::function<void()>& op) {
                try {
                    op();
                } catch (const DegenerateUniverse&) {
                    ++thrown;
                }
            };
            expect_throw([&] { optimal_allocation(universe, coeffs, 1.0, 2.0 * level); });
            expect_throw([&] { variance_at_return(coeffs, 1.0, 2.0 * level); });
            expect_throw(
                [&] { frontier_return_at_risk(coeffs, 1.0, 10.0, Branch::Upper); });
            expect_throw([&] { sample_frontier(coeffs, 1.0, 10.0, 5); });
            expect_throw([&] { critical_relative_weights(universe, coeffs); });
            expect_throw([&] { critical_frontier_slope(coeffs); });
            expect_throw([&] {
                rescaled_frontier(coeffs, 1.0, 10.0, Branch::Upper, Numeraire::Budget);
            });
            expect_throw([&] {
                rescaled_allocation(universe, coeffs, 1.0, level, Numeraire::Budget);
            });
            if (thrown != 8)
                return fmt("FAIL only %d of 8 D-dividing operations threw", thrown);

            const FrontierPoint apex = minimum_variance_point(coeffs, 2.0);
            if (!std::isfinite(apex.risk) || apex.variance <= 0.0)
                return "FAIL minimum_variance_point failed on a degenerate universe";
            ++checked;
        }
    }
    return fmt("%d degenerate universes: D within bound, 8/8 operations refused", checked);
}

std::string criterion_end_to_end() {
    const fs::path dir_a = scratch_dir() / "golden_a";
    const fs::path dir_b = scratch_dir() / "golden_b";
    const std::string base_args =
        "frontier --universe " + std::string(TEST_DATA_DIR) + "/example_universe.json" +
        " --budgets 2,1,0,-1,-2 --risk-max 0.2 --samples 33 --out ";
    if (run_cli(base_args + dir_a.string()) != 0) return "FAIL first cli run failed";
    if (run_cli(base_args + dir_b.string()) != 0) return "FAIL second cli run failed";

    const std::string csv_a = read_file(dir_a / "frontier.csv");
    const std::string csv_b = read_file(dir_b / "frontier.csv");
    const std::string svg_a = read_file(dir_a / "frontier.svg");
    const std::string svg_b = read_file(dir_b / "frontier.svg");
    if (csv_a != csv_b) return "FAIL csv outputs differ between runs";
    if (svg_a != svg_b) return "FAIL svg outputs differ between runs";
    if (csv_a.empty() || svg_a.empty()) return "FAIL empty outputs";

    // Critical curve: each branch collinear through the origin.
    double worst = 0.0;
    for (const std::string& branch : {std::string("upper"), std::string("lower")}) {
        std::vector<CsvRow> rows;
        for (const CsvRow& row : parse_frontier_csv(csv_a)) {
            if (row.budget == 0.0 && row.branch == branch) rows.push_back(row);
        }
        if (rows.size() != 33) return "FAIL critical curve row count";
        double xy = 0.0;
        double xx = 0.0;
        for (const CsvRow& row : rows) {
            xy += row.risk * row.ret;
            xx += row.risk * row.risk;
        }
        const double slope = xy / xx;
        for (const CsvRow& row : rows) {
            const double deviation =
                std::abs(slope * row.risk - row.ret) / std::sqrt(1.0 + slope * slope);
            worst = std::max(worst, deviation);
        }
    }
    if (worst > 1e-10)
        return fmt("FAIL critical curve deviates from a line by %.3e (> 1e-10)", worst);
    return fmt("byte-identical outputs; critical curve collinear to %.2e", worst);
}

struct Criterion {
    const char* name;
    std::function<std::string()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"closed form matches KKT oracle", criterion_oracle_equivalence},
        {"critical frontier linearity", criterion_critical_linearity},
        {"critical one-fund scaling", criterion_one_fund},
        {"frontier degenerates to the critical lines", criterion_degeneration_limit},
        {"budget sign mirror", criterion_budget_sign_mirror},
        {"risk grows as the budget is reduced", criterion_risk_monotonicity},
        {"rescaled frontier consistency", criterion_rescaling_consistency},
        {"dominance certificate", criterion_dominance},
        {"degenerate universe detection", criterion_degenerate_detection},
        {"frontier command end-to-end determinism", criterion_end_to_end},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        try {
            detail = criteria[i].run();
        } catch (const std::exception& e) {
            detail = std::string("FAIL unexpected exception: ") + e.what();
        }
        const bool failed = detail.rfind("FAIL", 0) == 0;
        if (failed) ++failures;
        std::printf("[%s] %02zu %s: %s\n", failed ? "FAIL" : "PASS", i + 1,
                    criteria[i].name, failed ? detail.c_str() + 5 : detail.c_str());
    }
    if (failures == 0) {
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
    } else {
        std::printf("%d of %zu acceptance criteria failed\n", failures, criteria.size());
    }
    return failures;
}
