// frontier-lab: mean-variance frontier toolkit over budget-constrained
// portfolios measured in currency amounts.
//
// Subcommands: estimate, allocate, frontier, rescale, verify.
// Exit codes: 0 success, 2 input error, 3 degenerate universe or critical
// budget misuse, 4 output I/O failure, 5 verification failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frontier_lab/errors.hpp"
#include "frontier_lab/frontier_core.hpp"
#include "frontier_lab/json_io.hpp"
#include "frontier_lab/log.hpp"
#include "frontier_lab/market_data.hpp"
#include "frontier_lab/oracle.hpp"
#include "frontier_lab/render.hpp"

namespace fs = std::filesystem;
using namespace frontier_lab;

namespace {

constexpr double kAllocAgreementTol = 1e-8;
constexpr double kVarianceAgreementTol = 1e-8;
constexpr int kDominanceTrialsPerInstance = 64;

struct SourceArgs {
    std::string universe_path;
    std::string returns_path;
    bool allow_nonpositive_returns = false;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open input file: " + path);
    }
    return in;
}

AssetUniverse load_universe(const SourceArgs& source) {
    const bool have_universe = !source.universe_path.empty();
    const bool have_returns = !source.returns_path.empty();
    if (have_universe == have_returns) {
        throw ParseError("exactly one of --universe or --returns is required");
    }
    UniverseOptions options;
    options.allow_nonpositive_returns = source.allow_nonpositive_returns;
    if (have_universe) {
        std::ifstream in = open_input(source.universe_path);
        return universe_from_json(in, options);
    }
    std::ifstream in = open_input(source.returns_path);
    return estimate_universe(load_returns(in), options);
}

std::string source_label(const SourceArgs& source) {
    const std::string& path =
        source.universe_path.empty() ? source.returns_path : source.universe_path;
    return fs::path(path).stem().string();
}

// Budgets inside the dead band collapse to the exactly critical case.
double snap_budget(double budget, double critical_band) {
    return std::abs(budget) < critical_band ? 0.0 : budget;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open for writing: " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw IoError("failed while writing: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
    std::string returns_path;
    bool allow_nonpositive_returns = false;
};

int cmd_estimate(const EstimateArgs& args) {
    UniverseOptions options;
    options.allow_nonpositive_returns = args.allow_nonpositive_returns;
    std::ifstream in = open_input(args.returns_path);
    const AssetUniverse universe = estimate_universe(load_returns(in), options);
    log::info("estimate: %d assets from %s", static_cast<int>(universe.size()),
              args.returns_path.c_str());
    std::fputs(universe_to_json(universe).c_str(), stdout);
    return 0;
}

// ---------------------------------------------------------------- allocate

struct AllocateArgs {
    SourceArgs source;
    double budget = 0.0;
    double target_return = 0.0;
    double critical_band = 0.0;
};

int cmd_allocate(const AllocateArgs& args) {
    const AssetUniverse universe = load_universe(args.source);
    const ACoefficients coeffs = compute_coefficients(universe);
    const double budget = snap_budget(args.budget, args.critical_band);
    const BudgetClass budget_class = classify_budget(budget);
    const Allocation allocation =
        optimal_allocation(universe, coeffs, budget, args.target_return);
    log::info("allocate: class=%s budget=%g return=%g", to_string(budget_class), budget,
              args.target_return);
    if (budget_class == BudgetClass::Critical) {
        const Eigen::VectorXd weights = critical_relative_weights(universe, coeffs);
        std::fputs(allocation_to_json(universe, allocation, budget_class, &weights).c_str(),
                   stdout);
    } else {
        std::fputs(allocation_to_json(universe, allocation, budget_class, nullptr).c_str(),
                   stdout);
    }
    return 0;
}

// ---------------------------------------------------------------- frontier

struct FrontierArgs {
    SourceArgs source;
    std::vector<double> budgets;
    std::optional<double> budget_scale;
    std::optional<double> risk_max;
    int samples = 41;
    std::optional<double> guide_return;
    std::string out_dir = ".";
    double critical_band = 0.0;
};

std::vector<double> resolve_budgets(const FrontierArgs& args) {
    std::vector<double> budgets = args.budgets;
    if (budgets.empty()) {
        double scale = 1.0;
        if (args.budget_scale && std::abs(*args.budget_scale) > 0.0) {
            scale = std::abs(*args.budget_scale);
        }
        budgets = {2.0 * scale, 1.0 * scale, 0.0, -1.0 * scale, -2.0 * scale};
    }
    for (double& budget : budgets) {
        budget = snap_budget(budget, args.critical_band);
    }
    return budgets;
}

int cmd_frontier(const FrontierArgs& args) {
    const AssetUniverse universe = load_universe(args.source);
    const ACoefficients coeffs = compute_coefficients(universe);
    const std::vector<double> budgets = resolve_budgets(args);

    double max_apex_risk = 0.0;
    for (double budget : budgets) {
        max_apex_risk = std::max(max_apex_risk, minimum_variance_point(coeffs, budget).risk);
    }
    double risk_max;
    if (args.risk_max) {
        risk_max = *args.risk_max;
    } else {
        risk_max = max_apex_risk > 0.0 ? 2.5 * max_apex_risk : 1.0;
    }

    std::vector<FrontierCurve> curves;
    curves.reserve(budgets.size());
    for (double budget : budgets) {
        FrontierCurve curve;
        curve.budget = budget;
        curve.points = sample_frontier(coeffs, budget, risk_max, args.samples);
        curves.push_back(std::move(curve));
    }
    const FrontierFamily family =
        make_frontier_family(source_label(args.source), std::move(curves), args.guide_return);

    fs::path out_dir(args.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + out_dir.string() + ": " +
                      ec.message());
    }
    write_file_atomic(out_dir / "frontier.csv", family_to_csv(family));
    write_file_atomic(out_dir / "frontier.svg", family_to_svg(family, 800, 600));
    log::info("frontier: wrote %s and %s", (out_dir / "frontier.csv").c_str(),
              (out_dir / "frontier.svg").c_str());

    for (const FrontierCurve& curve : family.curves) {
        const FrontierPoint apex = minimum_variance_point(coeffs, curve.budget);
        std::printf("budget=%s apex_risk=%s apex_return=%s\n",
                    format_number(curve.budget).c_str(), format_number(apex.risk).c_str(),
                    format_number(apex.ret).c_str());
    }
    return 0;
}

// ----------------------------------------------------------------- rescale

struct RescaleArgs {
    SourceArgs source;
    double budget = 0.0;
    std::string convention = "budget";
    std::optional<double> risk_max;
    int samples = 41;
    double critical_band = 0.0;
};

int cmd_rescale(const RescaleArgs& args) {
    const AssetUniverse universe = load_universe(args.source);
    const ACoefficients coeffs = compute_coefficients(universe);
    const double budget = snap_budget(args.budget, args.critical_band);
    const Numeraire convention =
        args.convention == "budget" ? Numeraire::Budget : Numeraire::AbsBudget;

    // Smallest reachable rescaled risk; the first frontier evaluation rejects
    // a critical budget before the grid value matters.
    const double apex_risk = 1.0 / std::sqrt(coeffs.a11);
    const double risk_max = args.risk_max ? *args.risk_max : 2.5 * apex_risk;
    if (args.samples < 2) {
        throw std::invalid_argument("--samples must be at least 2");
    }

    const double constraint_sum =
        convention == Numeraire::Budget ? 1.0 : (budget < 0.0 ? -1.0 : 1.0);

    std::string body;
    for (const Branch branch : {Branch::Upper, Branch::Lower}) {
        for (int i = 0; i < args.samples; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(args.samples - 1);
            const double risk = apex_risk * (1.0 - t) + risk_max * t;
            const RescaledFrontierPoint point =
                rescaled_frontier(coeffs, budget, risk, branch, convention);
            const Eigen::VectorXd weights =
                rescaled_allocation(universe, coeffs, budget, point.ret, convention);
            body += to_string(branch);
            body += ',';
            body += format_number(point.risk);
            body += ',';
            body += format_number(point.ret);
            for (Eigen::Index k = 0; k < weights.size(); ++k) {
                body += ',';
                body += format_number(weights[k]);
            }
            body += '\n';
        }
    }
    std::string out = "# constraint_sum,";
    out += format_number(constraint_sum);
    out += '\n';
    out += "branch,risk,ret";
    for (const std::string& label : universe.labels()) {
        out += ",w_";
        out += label;
    }
    out += '\n';
    out += body;
    std::fputs(out.c_str(), stdout);
    return 0;
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
    SourceArgs source;
    std::uint64_t seed = 20240815ULL;
    int trials = 100;
    bool perturb = false;
};

int cmd_verify(const VerifyArgs& args) {
    const bool fixed_universe =
        !args.source.universe_path.empty() || !args.source.returns_path.empty();
    std::optional<AssetUniverse> fixed;
    if (fixed_universe) {
        fixed = load_universe(args.source);
    }

    std::mt19937_64 rng(args.seed);
    std::uniform_real_distribution<double> unit(-10.0, 10.0);
    std::uniform_int_distribution<int> asset_count(2, 10);

    double max_alloc_diff = 0.0;
    double max_var_diff = 0.0;
    long long violations = 0;
    for (int trial = 0; trial < args.trials; ++trial) {
        const AssetUniverse universe =
            fixed ? *fixed : random_universe(asset_count(rng), rng);
        const ACoefficients coeffs = compute_coefficients(universe);
        const double budget = unit(rng);
        const double target_return = unit(rng);

        Allocation allocation = optimal_allocation(universe, coeffs, budget, target_return);
        if (args.perturb && trial == 0) {
            allocation.amounts[0] += 1e-3;  // fault injection self-test
        }
        const KktSolution reference = solve_kkt(universe, budget, target_return);
        const double scale = std::max(1.0, reference.amounts.lpNorm<Eigen::Infinity>());
        const double alloc_diff =
            (allocation.amounts - reference.amounts).lpNorm<Eigen::Infinity>() / scale;
        max_alloc_diff = std::max(max_alloc_diff, alloc_diff);

        const double variance_ref = variance_at_return(coeffs, budget, target_return);
        const double realized =
            allocation.amounts.dot(universe.covariance() * allocation.amounts);
        const double var_diff =
            std::abs(realized - variance_ref) / std::max(1.0, std::abs(variance_ref));
        max_var_diff = std::max(max_var_diff, var_diff);

        const DominanceReport report =
            dominance_check(universe, allocation.amounts, kDominanceTrialsPerInstance, rng());
        violations += static_cast<long long>(report.violations.size());
        log::debug("verify trial %d: alloc_diff=%g var_diff=%g null_dim=%d", trial, alloc_diff,
                   var_diff, static_cast<int>(report.null_space_dim));
    }

    const bool ok = max_alloc_diff <= kAllocAgreementTol &&
                    max_var_diff <= kVarianceAgreementTol && violations == 0;

    nlohmann::json summary;
    summary["instances"] = args.trials;
    summary["max_alloc_diff"] = max_alloc_diff;
    summary["max_var_diff"] = max_var_diff;
    summary["violations"] = violations;
    std::fputs((summary.dump(2) + "\n").c_str(), stdout);
    std::fprintf(stderr, "verify: %d instances, max_alloc_diff=%.3g, max_var_diff=%.3g, "
                         "violations=%lld -> %s\n",
                 args.trials, max_alloc_diff, max_var_diff, violations, ok ? "ok" : "FAIL");
    return ok ? 0 : 5;
}

void add_source_options(CLI::App* cmd, SourceArgs& source) {
    cmd->add_option("--universe", source.universe_path,
                    "universe JSON (labels, expected_returns, covariance)");
    cmd->add_option("--returns", source.returns_path,
                    "CSV of per-period returns, one labeled column per asset");
    cmd->add_flag("--allow-nonpositive-returns", source.allow_nonpositive_returns,
                  "accept assets with zero or negative expected return");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mean-variance frontier toolkit for budget-constrained portfolios"};
    app.require_subcommand(1);

    EstimateArgs estimate_args;
    CLI::App* estimate = app.add_subcommand(
        "estimate", "estimate a universe (means and covariance) from a returns CSV");
    estimate->add_option("--returns", estimate_args.returns_path, "CSV of per-period returns")
        ->required();
    estimate->add_flag("--allow-nonpositive-returns", estimate_args.allow_nonpositive_returns,
                       "accept assets with zero or negative expected return");

    AllocateArgs allocate_args;
    CLI::App* allocate = app.add_subcommand(
        "allocate", "minimum-variance amounts for a budget and target return");
    add_source_options(allocate, allocate_args.source);
    allocate->add_option("--budget", allocate_args.budget, "net capital outlay B")->required();
    allocate->add_option("--return", allocate_args.target_return, "target expected return R")
        ->required();
    allocate->add_option("--treat-as-critical-below", allocate_args.critical_band,
                         "treat |B| below this threshold as exactly 0");

    FrontierArgs frontier_args;
    CLI::App* frontier = app.add_subcommand(
        "frontier", "sample efficient frontiers for several budgets; write CSV and SVG");
    add_source_options(frontier, frontier_args.source);
    frontier->add_option("--budgets", frontier_args.budgets, "comma-separated budget list")
        ->delimiter(',');
    frontier->add_option("--budget", frontier_args.budget_scale,
                         "scale for the default budget ladder (2,1,0,-1,-2)");
    frontier->add_option("--risk-max", frontier_args.risk_max,
                         "largest risk to sample (default: 2.5x the largest apex risk)")
        ->check(CLI::PositiveNumber);
    frontier->add_option("--samples", frontier_args.samples, "points per branch (default 41)")
        ->check(CLI::Range(2, 100000));
    frontier->add_option("--guide-return", frontier_args.guide_return,
                         "draw a dotted constant-return guide line");
    frontier->add_option("--out", frontier_args.out_dir, "output directory (default .)");
    frontier->add_option("--treat-as-critical-below", frontier_args.critical_band,
                         "treat |B| below this threshold as exactly 0");

    RescaleArgs rescale_args;
    CLI::App* rescale = app.add_subcommand(
        "rescale", "frontier and weights per unit of budget-based numeraire (CSV on stdout)");
    add_source_options(rescale, rescale_args.source);
    rescale->add_option("--budget", rescale_args.budget, "net capital outlay B (nonzero)")
        ->required();
    rescale->add_option("--convention", rescale_args.convention,
                        "numeraire convention: budget (x=y/B) or abs-budget (x=y/|B|)")
        ->check(CLI::IsMember({"budget", "abs-budget"}));
    rescale->add_option("--risk-max", rescale_args.risk_max,
                        "largest rescaled risk to sample (default: 2.5x the apex risk)")
        ->check(CLI::PositiveNumber);
    rescale->add_option("--samples", rescale_args.samples, "points per branch (default 41)")
        ->check(CLI::Range(2, 100000));
    rescale->add_option("--treat-as-critical-below", rescale_args.critical_band,
                        "treat |B| below this threshold as exactly 0");

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand(
        "verify", "cross-check closed-form allocations against a KKT solver sweep");
    add_source_options(verify, verify_args.source);
    verify->add_option("--seed", verify_args.seed, "RNG seed (default 20240815)");
    verify->add_option("--trials", verify_args.trials, "number of instances (default 100)")
        ->check(CLI::Range(1, 1000000));
    verify->add_flag("--perturb", verify_args.perturb,
                     "inject a 1e-3 fault into the first allocation (self-test; exits 5)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(estimate)) return cmd_estimate(estimate_args);
        if (app.got_subcommand(allocate)) return cmd_allocate(allocate_args);
        if (app.got_subcommand(frontier)) return cmd_frontier(frontier_args);
        if (app.got_subcommand(rescale)) return cmd_rescale(rescale_args);
        if (app.got_subcommand(verify)) return cmd_verify(verify_args);
    } catch (const DegenerateUniverse& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const CriticalBudget& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const SingularKkt& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
    return 0;
}
