#include "storval_cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>

#include <CLI11.hpp>

#include "storval/contract.hpp"
#include "storval/crossing.hpp"
#include "storval/dp_reference.hpp"
#include "storval/parallel.hpp"
#include "storval/sizing.hpp"
#include "storval_cli/json_text.hpp"

namespace storval::cli {

using nlohmann::json;

namespace {

json storage_json(const StorageType& s) {
    return {{"b", s.capacity}, {"r", s.rate}, {"lambda", s.leakage},
            {"eta_in", s.eta_in}, {"eta_out", s.eta_out}};
}

json header(const std::string& command, const RunConfig& c) {
    return {{"command", command}, {"horizon", c.horizon}, {"paths", c.mc.paths}, {"seed", c.mc.seed}};
}

std::string csv_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

void write_csv(const std::filesystem::path& file, const std::string& head,
               const std::vector<std::pair<double, double>>& rows) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw ConfigError("options.curve_csv", "cannot write " + file.string());
    out << head << '\n';
    for (const auto& [a, b] : rows) out << csv_number(a) << ',' << csv_number(b) << '\n';
}

std::vector<double> unit_grid(std::size_t points) {
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

json profit_json(const ProfitEstimate& e) {
    return {{"mean", e.mean}, {"std_error", e.std_error}, {"paths", e.paths}, {"seed", e.seed}};
}

double solve_contract(const RunConfig& c) {
    return optimal_value(c.storage, c.process, c.prices, c.mc.paths, c.mc.seed, c.mc.tol).x_star;
}

}  // namespace

json cmd_contract(const RunConfig& c) {
    const bool closed = c.storage.capacity == 0.0;
    const ContractSolution sol =
        closed ? optimal_contract_no_storage(c.process, c.prices, c.mc.paths, c.mc.seed)
               : optimize_contract(c.storage, c.process, c.prices, c.mc.paths, c.mc.seed, c.mc.tol);
    json r = header("contract", c);
    r["method"] = to_string(sol.method);
    r["x_star"] = sol.x_star;
    r["value"] = sol.value;
    r["value_se"] = sol.value_se;
    r["bracket_width"] = sol.bracket_width;
    r["tol"] = c.mc.tol;
    r["gamma"] = c.prices.gamma();
    r["storage"] = storage_json(c.storage);

    if (c.options.curve_csv) {
        const PathSet set = PathSet::sample(c.process, c.mc.paths, c.mc.seed);
        std::vector<std::pair<double, double>> rows;
        for (const double x : unit_grid(c.options.curve_points))
            rows.emplace_back(x, expected_profit(x, c.storage, set, c.prices).mean);
        write_csv(*c.options.curve_csv, "x,value", rows);
    }
    return r;
}

json cmd_marginal_value(const RunConfig& c) {
    MarginalValueOptions opt;
    opt.paths = c.mc.paths;
    opt.seed = c.mc.seed;
    opt.roundtrip = c.storage.roundtrip();
    opt.bootstrap_reps = c.options.bootstrap_reps;
    const MarginalValueReport m = marginal_value(c.process, c.prices, opt);

    json r = header("marginal-value", c);
    r["method"] = to_string(m.method);
    r["value"] = m.formula_value;
    r["std_error"] = m.formula_se;
    r["expected_downcrossings"] = m.expected_downcrossings;
    r["downcrossings_se"] = m.downcrossings_se;
    r["tail_probability"] = m.tail_probability;
    r["tail_se"] = m.tail_se;
    r["x_star"] = m.x_star;
    r["gamma"] = m.gamma;
    r["rho"] = m.rho;
    if (m.method == MarginalValueMethod::plug_in) {
        r["rows"] = m.samples;
        r["bootstrap_reps"] = m.bootstrap_reps;
        r["interval"] = {m.interval_lower, m.interval_upper};
        r["tie_count"] = m.tie_count;
        r["tie_rows"] = m.tie_rows;
    }

    if (c.options.closed_form) {
        if (c.process.kind() != ProcessKind::iid)
            throw ConfigError("options.closed_form", "the closed form needs an iid process");
        r["closed_form"] = marginal_value_iid_closed_form(c.prices, c.horizon, m.rho);
    }
    if (c.options.validate_fd) {
        const double eps = *c.options.validate_fd;
        if (eps > c.storage.rate)
            throw ConfigError("options.validate_fd", "epsilon exceeds storage.r");
        const FiniteDifferenceReport fd = finite_difference_marginal_value(
            c.process, c.prices, c.storage, eps, c.mc.paths, c.mc.seed);
        r["finite_difference"] = {{"value", fd.value},
                                  {"std_error", fd.std_error},
                                  {"epsilon", fd.epsilon},
                                  {"x_star_base", fd.x_star_base},
                                  {"x_star_perturbed", fd.x_star_perturbed},
                                  {"violation_fraction", fd.violation_fraction}};
        r["agreement_ratio"] = m.formula_value != 0.0 ? json(fd.value / m.formula_value) : json(nullptr);
    }
    return r;
}

json cmd_simulate(const RunConfig& c) {
    const double x = c.options.contract ? *c.options.contract : solve_contract(c);
    const PathSet set = PathSet::sample(c.process, c.mc.paths, c.mc.seed);
    const double revenue = static_cast<double>(c.horizon) * c.prices.da_price * x;

    json r = header("simulate", c);
    r["contract"] = x;
    r["contract_source"] = c.options.contract ? "options" : "optimized";
    r["storage"] = storage_json(c.storage);
    r["profit"] = profit_json(expected_profit(x, c.storage, set, c.prices));

    json paths = json::array();
    const std::size_t shown = std::min(c.options.trajectories, set.size());
    for (std::size_t i = 0; i < shown; ++i) {
        const auto path = set.path(i);
        const Trajectory t = simulate_policy(x, c.storage, path);
        std::vector<double> g(path.size());
        double cost = 0.0;
        for (std::size_t k = 0; k < path.size(); ++k) {
            g[k] = stage_cost(x, t.inputs[k], path[k], c.prices);
            cost += g[k];
        }
        paths.push_back({{"index", i},
                         {"supply", std::vector<double>(path.begin(), path.end())},
                         {"z", t.states},
                         {"u", t.inputs},
                         {"g", g},
                         {"revenue", revenue},
                         {"imbalance_cost", cost},
                         {"profit", path_profit(x, c.storage, path, c.prices)}});
    }
    r["trajectories"] = std::move(paths);
    return r;
}

json cmd_supply_function(const RunConfig& c) {
    std::vector<double> grid = c.options.grid;
    if (grid.empty()) {
        for (double g : unit_grid(11)) grid.push_back(g * c.prices.shortfall_penalty);
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0 && grid[i] <= c.prices.shortfall_penalty))
            throw ConfigError("options.grid[" + std::to_string(i) + "]",
                              "price " + csv_number(grid[i]) + " outside [0, m_alpha]");
    }
    const auto curve = supply_function(c.process, c.prices.shortfall_penalty,
                                       c.prices.surplus_penalty, grid);
    json r = header("supply-function", c);
    json points = json::array();
    std::vector<std::pair<double, double>> rows;
    for (const SupplyPoint& s : curve) {
        points.push_back({{"p", s.price}, {"x_star", s.contract}});
        rows.emplace_back(s.price, s.contract);
    }
    r["curve"] = std::move(points);
    if (c.options.curve_csv) write_csv(*c.options.curve_csv, "p,x_star", rows);
    return r;
}

json cmd_size_storage(const RunConfig& c) {
    SizingOptions opt;
    opt.max_capacity = c.options.b_max;
    opt.max_rate = c.options.r_max;
    opt.paths = c.mc.paths;
    opt.seed = c.mc.seed;
    opt.size_tol = c.options.size_tol;
    opt.contract_tol = c.mc.tol;
    const CapitalCost cost{c.options.c_b, c.options.c_r};
    const SizingResult s = optimize_storage_size(c.process, c.prices, cost, opt);

    json r = header("size-storage", c);
    r["capital_cost"] = {{"c_b", cost.per_capacity}, {"c_r", cost.per_rate}};
    r["box"] = {{"b_max", opt.max_capacity}, {"r_max", opt.max_rate}};
    r["b"] = s.capacity;
    r["r"] = s.rate;
    r["value"] = s.value;
    r["net_value"] = s.net_value;
    r["value_without_storage"] = s.value_without_storage;
    r["contract"] = s.contract;
    r["marginal_value_at_origin"] = s.marginal_value_at_origin;
    r["invest"] = s.invest;
    r["rounds"] = s.rounds;
    r["value_evaluations"] = s.value_evaluations;

    if (c.options.curve_csv) {
        const double rate = s.rate > 0.0 ? s.rate : opt.max_rate;
        std::vector<std::pair<double, double>> rows;
        for (const double u : unit_grid(c.options.curve_points)) {
            const double b = u * opt.max_capacity;
            rows.emplace_back(b, optimal_value(StorageType::ideal(b, rate), c.process, c.prices,
                                               c.mc.paths, c.mc.seed, c.mc.tol)
                                     .value);
        }
        write_csv(*c.options.curve_csv, "b,value", rows);
    }
    return r;
}

namespace {

json check_shortfall_frequency(const RunConfig& c) {
    const ShortfallFrequencyReport l = verify_shortfall_frequency(c.process, c.prices, c.mc.paths, c.mc.seed);
    const bool ok = std::abs(l.below_z) <= 3.0 && std::abs(l.above_z) <= 3.0 &&
                    l.identity_violations == 0;
    return {{"name", "shortfall_frequency"}, {"passed", ok},
            {"gamma", l.gamma}, {"x_star", l.x_star},
            {"below_fraction", l.below_fraction}, {"below_z", l.below_z},
            {"above_fraction", l.above_fraction}, {"above_z", l.above_z},
            {"identity_violations", l.identity_violations}};
}

json check_concavity(const RunConfig& c) {
    const PathSet set = PathSet::sample(c.process, c.mc.paths, c.mc.seed);
    const std::vector<double> xs = unit_grid(11);
    std::vector<std::vector<double>> profits;
    for (const double x : xs) profits.push_back(path_profits(x, c.storage, set, c.prices));

    double worst = INFINITY;
    std::size_t failures = 0;
    std::size_t probes = 0;
    std::vector<double> gap(set.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t k = i + 2; k < xs.size(); k += 2) {
            const std::size_t mid = (i + k) / 2;
            for (std::size_t n = 0; n < set.size(); ++n)
                gap[n] = profits[mid][n] - 0.5 * (profits[i][n] + profits[k][n]);
            const SampleSummary s = summarize(gap);
            const double z = s.std_error > 0.0 ? s.mean / s.std_error : (s.mean < 0.0 ? -INFINITY : 0.0);
            worst = std::min(worst, z);
            ++probes;
            if (z < -3.0) ++failures;
        }
    }
    return {{"name", "contract_concavity"}, {"passed", failures == 0}, {"probes", probes},
            {"failures", failures}, {"worst_z", worst}};
}

json check_monotonicity(const RunConfig& c) {
    const std::size_t n = std::min<std::size_t>(c.mc.paths, 10000);
    const PathSet set = PathSet::sample(c.process, n, c.mc.seed);
    const double x = c.process.quantile(c.prices.quantile_level());
    const double b = c.storage.capacity > 0.0 ? c.storage.capacity : 0.2;
    const double r = c.storage.rate > 0.0 ? c.storage.rate : 1.0;
    const std::vector<std::pair<StorageType, StorageType>> pairs{
        {StorageType::ideal(0.5 * b, r), StorageType::ideal(0.0, r)},
        {StorageType::ideal(b, r), StorageType::ideal(0.5 * b, r)},
        {StorageType::ideal(b, r), StorageType::ideal(b, 0.5 * r)},
        {StorageType::ideal(b, 0.5 * r), StorageType::ideal(b, 0.0)}};
    std::vector<unsigned char> bad(n, 0);
    parallel_for(n, [&](std::size_t i) {
        for (const auto& [big, small] : pairs)
            if (compare_imbalance_cost_exact(x, big, small, set.path(i), c.prices) > 0) bad[i] = 1;
    });
    const auto violations = static_cast<std::size_t>(std::count(bad.begin(), bad.end(), 1));
    return {{"name", "pathwise_monotonicity"}, {"passed", violations == 0}, {"paths", n},
            {"contract", x}, {"violations", violations}};
}

json check_threshold_vs_dp(const RunConfig& c) {
    constexpr double h = 1.0 / 32.0;
    std::mt19937_64 rng(mix64(c.mc.seed));
    std::uniform_int_distribution<int> level(0, 32);
    std::uniform_int_distribution<int> small(0, 12);
    std::size_t failures = 0;
    double worst_gap = 0.0;
    constexpr std::size_t instances = 20;
    for (std::size_t t = 0; t < instances; ++t) {
        DiscreteProcess proc;
        const std::size_t n = 1 + t % 4;
        for (std::size_t k = 0; k < n; ++k) {
            DiscreteProcess::Period p;
            const std::size_t support = 2 + (t + k) % 4;
            double total = 0.0;
            for (std::size_t j = 0; j < support; ++j) {
                p.values.push_back(level(rng) * h);
                p.probabilities.push_back(1.0 + small(rng));
                total += p.probabilities.back();
            }
            for (double& q : p.probabilities) q /= total;
            proc.periods.push_back(std::move(p));
        }
        const StorageType theta = StorageType::ideal(small(rng) * h, (1 + small(rng)) * h);
        const double x = level(rng) * h;
        const double policy = threshold_policy_exact_value(x, theta, proc, c.prices);
        const double dp = dp_reference_value(x, theta, proc, c.prices, h);
        const double gap = std::abs(policy - dp);
        worst_gap = std::max(worst_gap, gap);
        if (gap > 1e-9 * (1.0 + std::abs(dp))) ++failures;
    }
    return {{"name", "threshold_policy_vs_dp"}, {"passed", failures == 0},
            {"instances", instances}, {"failures", failures}, {"worst_gap", worst_gap}};
}

json check_marginal_value(const RunConfig& c) {
    const double eps = c.options.validate_fd.value_or(1e-3);
    MarginalValueOptions opt;
    opt.paths = c.mc.paths;
    opt.seed = c.mc.seed;
    opt.bootstrap_reps = std::min<std::size_t>(c.options.bootstrap_reps, 200);
    const MarginalValueReport m = marginal_value(c.process, c.prices, opt);
    const FiniteDifferenceReport fd = finite_difference_marginal_value(
        c.process, c.prices, StorageType::ideal(0.0, 1.0), eps, c.mc.paths, c.mc.seed + 1);
    const double se = std::hypot(m.formula_se, fd.std_error);
    const double allowed = std::max(0.05 * std::abs(m.formula_value), 3.0 * se);
    const double diff = fd.value - m.formula_value;
    return {{"name", "marginal_value_vs_finite_difference"}, {"passed", std::abs(diff) <= allowed},
            {"formula", m.formula_value}, {"formula_se", m.formula_se},
            {"finite_difference", fd.value}, {"finite_difference_se", fd.std_error},
            {"epsilon", eps}, {"difference", diff}, {"allowed", allowed}};
}

}  // namespace

json cmd_validate(const RunConfig& c) {
    json checks = json::array();
    if (c.process.kind() != ProcessKind::empirical) checks.push_back(check_shortfall_frequency(c));
    checks.push_back(check_concavity(c));
    checks.push_back(check_monotonicity(c));
    checks.push_back(check_threshold_vs_dp(c));
    checks.push_back(check_marginal_value(c));
    bool all = true;
    for (const auto& ch : checks) all = all && ch["passed"].get<bool>();
    json r = header("validate", c);
    r["passed"] = all;
    r["checks"] = std::move(checks);
    return r;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Valuation of energy storage for forward contracts on intermittent supply",
                 "storval"};
    app.require_subcommand(1);
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<std::string> csv;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--seed", seed, "override mc.seed");
    app.add_option("--paths", paths, "override mc.paths");
    app.add_option("--csv", csv, "write a data curve to this CSV file");

    auto* contract = app.add_subcommand("contract", "optimal forward contract");
    auto* marginal = app.add_subcommand("marginal-value", "marginal value of storage capacity at zero");
    bool closed_form = false;
    std::optional<double> fd_eps;
    marginal->add_flag("--closed-form", closed_form, "include the iid closed form");
    marginal->add_option("--validate-fd", fd_eps, "finite-difference check with this capacity step");
    auto* simulate = app.add_subcommand("simulate", "threshold-policy trajectories and profit");
    std::optional<double> x;
    std::optional<std::size_t> trajectories;
    simulate->add_option("--contract", x, "contract level (default: optimized)");
    simulate->add_option("--trajectories", trajectories, "number of paths to emit (default 10)");
    auto* supply = app.add_subcommand("supply-function", "optimal contract against the day-ahead price");
    std::vector<double> grid;
    supply->add_option("--grid", grid, "comma-separated price grid")->delimiter(',');
    auto* sizing = app.add_subcommand("size-storage", "capacity and rate under linear capital cost");
    std::optional<double> c_b, c_r, b_max, r_max;
    sizing->add_option("--c-b", c_b, "capital cost per unit capacity");
    sizing->add_option("--c-r", c_r, "capital cost per unit rate");
    sizing->add_option("--b-max", b_max, "capacity upper bound");
    sizing->add_option("--r-max", r_max, "rate upper bound");
    auto* validate = app.add_subcommand("validate", "run the property checks");
    for (auto* sub : {contract, marginal, simulate, supply, sizing, validate}) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        RunConfig cfg = load_config(config_path);
        if (seed) cfg.mc.seed = *seed;
        if (paths) {
            if (*paths < 2) throw ConfigError("--paths", "must be >= 2");
            cfg.mc.paths = *paths;
        }
        auto& o = cfg.options;
        if (csv) o.curve_csv = *csv;
        if (closed_form) o.closed_form = true;
        if (fd_eps) {
            if (!(*fd_eps > 0.0)) throw ConfigError("--validate-fd", "must be > 0");
            o.validate_fd = fd_eps;
        }
        if (x) {
            if (!(*x >= 0.0 && *x <= 1.0)) throw ConfigError("--contract", "must lie in [0, 1]");
            o.contract = x;
        }
        if (trajectories) o.trajectories = *trajectories;
        if (!grid.empty()) o.grid = grid;
        if (c_b) o.c_b = *c_b;
        if (c_r) o.c_r = *c_r;
        if (b_max) o.b_max = *b_max;
        if (r_max) o.r_max = *r_max;

        json result;
        if (*contract) result = cmd_contract(cfg);
        else if (*marginal) result = cmd_marginal_value(cfg);
        else if (*simulate) result = cmd_simulate(cfg);
        else if (*supply) result = cmd_supply_function(cfg);
        else if (*sizing) result = cmd_size_storage(cfg);
        else result = cmd_validate(cfg);

        out << to_json_text(result);
        if (*validate && !result["passed"].get<bool>()) return kValidationFailure;
        return kSuccess;
    } catch (const NumericalValidationError& e) {
        err << "validation failure: " << e.what() << '\n';
        return kValidationFailure;
    } catch (const AssumptionViolation& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kUnexpected;
    }
}

}  // namespace storval::cli
