#include "storval/crossing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "storval/errors.hpp"
#include "storval/parallel.hpp"

namespace storval {

CrossingStats crossing_stats(double level, std::span<const double> path) {
    CrossingStats s;
    for (std::size_t k = 0; k < path.size(); ++k) {
        const double a = path[k];
        if (a > level)
            ++s.above_count;
        else if (a < level)
            ++s.below_count;
        else
            ++s.tie_count;
        if (k + 1 < path.size()) {
            const double next = path[k + 1];
            if (a > level && level > next) ++s.downcrossings;
            if (a < level && level < next) ++s.upcrossings;
        }
    }
    s.last_period_above = !path.empty() && path.back() > level;
    return s;
}

namespace {

double z_score(double estimate, double target, double se) {
    const double diff = estimate - target;
    if (se > 0.0) return diff / se;
    return diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
}

void check_roundtrip(double rho) {
    if (!(rho > 0.0 && rho <= 1.0)) throw InvalidArgument("roundtrip factor rho must lie in (0, 1]");
}

double assemble(const MarketPrices& prices, double rho, double downcrossings, double tail) {
    return (rho * prices.shortfall_penalty + prices.surplus_penalty) * downcrossings +
           prices.surplus_penalty * tail;
}

}  // namespace

ShortfallFrequencyReport verify_shortfall_frequency(const WindProcessSpec& spec, const MarketPrices& prices,
                                        std::size_t paths, Seed seed) {
    if (!spec.absolutely_continuous())
        throw InvalidArgument("shortfall-frequency identities need continuous marginals; "
                              "empirical traces can tie with the contract");
    prices.validate();
    if (paths < 2) throw InvalidArgument("verification needs >= 2 paths");

    ShortfallFrequencyReport r;
    r.gamma = prices.quantile_level();
    r.x_star = spec.quantile(r.gamma);
    r.paths = paths;
    r.seed = seed;

    const double n = static_cast<double>(spec.horizon());
    std::vector<double> below(paths);
    std::vector<double> above(paths);
    std::vector<unsigned char> violated(paths, 0);
    parallel_for(paths, [&](std::size_t i) {
        const SamplePath p = spec.sample_path(seed, i);
        const CrossingStats s = crossing_stats(r.x_star, p.view());
        below[i] = static_cast<double>(s.below_count) / n;
        above[i] = static_cast<double>(s.above_count) / n;
        violated[i] = s.below_count + s.above_count != spec.horizon();
    });
    r.identity_violations = static_cast<std::size_t>(std::count(violated.begin(), violated.end(), 1));

    const SampleSummary sb = summarize(below);
    const SampleSummary sa = summarize(above);
    r.below_fraction = sb.mean;
    r.below_se = sb.std_error;
    r.below_z = z_score(sb.mean, r.gamma, sb.std_error);
    r.above_fraction = sa.mean;
    r.above_se = sa.std_error;
    r.above_z = z_score(sa.mean, 1.0 - r.gamma, sa.std_error);
    return r;
}

std::string to_string(MarginalValueMethod m) {
    switch (m) {
        case MarginalValueMethod::exact_iid: return "exact-iid";
        case MarginalValueMethod::monte_carlo: return "monte-carlo";
        case MarginalValueMethod::plug_in: return "plug-in";
    }
    return "unknown";
}

double marginal_value_iid_closed_form(const MarketPrices& prices, std::size_t horizon,
                                      double roundtrip) {
    prices.validate();
    check_roundtrip(roundtrip);
    if (horizon < 1) throw InvalidArgument("horizon must be >= 1");
    const double g = prices.quantile_level();
    const double pairs = static_cast<double>(horizon - 1);
    return pairs * (roundtrip * prices.shortfall_penalty + prices.surplus_penalty) * (1.0 - g) * g +
           prices.surplus_penalty * (1.0 - g);
}

MarginalValueReport marginal_value(const WindProcessSpec& spec, const MarketPrices& prices,
                                   const MarginalValueOptions& options) {
    prices.validate();
    check_roundtrip(options.roundtrip);

    if (spec.kind() == ProcessKind::empirical) {
        const auto& traces = std::get<EmpiricalProcess>(spec.model()).traces;
        return estimate_marginal_value_from_data(traces, prices, options.bootstrap_reps,
                                                 options.seed, options.roundtrip);
    }

    MarginalValueReport r;
    r.gamma = prices.quantile_level();
    r.x_star = spec.quantile(r.gamma);
    r.rho = options.roundtrip;
    const std::size_t n = spec.horizon();

    if (spec.kind() == ProcessKind::iid && !options.monte_carlo) {
        // P{xi_k > x, xi_{k+1} < x} = (1 - Phi(x)) Phi(x) for continuous iid marginals.
        const double phi = spec.cdf(0, r.x_star);
        r.method = MarginalValueMethod::exact_iid;
        r.expected_downcrossings = static_cast<double>(n - 1) * (1.0 - phi) * phi;
        r.tail_probability = 1.0 - phi;
        r.formula_value = assemble(prices, r.rho, r.expected_downcrossings, r.tail_probability);
        return r;
    }

    if (options.paths < 2) throw InvalidArgument("marginal value estimate needs >= 2 paths");
    r.method = MarginalValueMethod::monte_carlo;
    r.samples = options.paths;
    r.seed = options.seed;
    std::vector<double> crossings(options.paths);
    std::vector<double> tails(options.paths);
    std::vector<double> values(options.paths);
    parallel_for(options.paths, [&](std::size_t i) {
        const SamplePath p = spec.sample_path(options.seed, i);
        const CrossingStats s = crossing_stats(r.x_star, p.view());
        crossings[i] = static_cast<double>(s.downcrossings);
        tails[i] = s.last_period_above ? 1.0 : 0.0;
        values[i] = assemble(prices, r.rho, crossings[i], tails[i]);
    });
    const SampleSummary sc = summarize(crossings);
    const SampleSummary st = summarize(tails);
    const SampleSummary sv = summarize(values);
    r.expected_downcrossings = sc.mean;
    r.downcrossings_se = sc.std_error;
    r.tail_probability = st.mean;
    r.tail_se = st.std_error;
    r.formula_value = sv.mean;
    r.formula_se = sv.std_error;
    return r;
}

namespace {

struct PlugIn {
    double level = 0.0;
    double downcrossings = 0.0;
    double tail = 0.0;
};

// Pooled inf-quantile of a row-weighted trace matrix. `order` sorts all
// entries by value; weights[i] is how often row i appears in the sample.
double weighted_quantile(const TraceMatrix& traces, const std::vector<std::size_t>& order,
                         const std::vector<std::size_t>& weights, double gamma) {
    const std::size_t total =
        std::accumulate(weights.begin(), weights.end(), std::size_t{0}) * traces.columns();
    const double dn = static_cast<double>(total);
    std::size_t cumulative = 0;
    const auto data = traces.data();
    for (const std::size_t idx : order) {
        cumulative += weights[idx / traces.columns()];
        if (static_cast<double>(cumulative) / dn >= gamma) return data[idx];
    }
    return data[order.back()];
}

PlugIn plug_in(const TraceMatrix& traces, const std::vector<std::size_t>& order,
               const std::vector<std::size_t>& weights, double gamma) {
    PlugIn out;
    out.level = weighted_quantile(traces, order, weights, gamma);
    std::size_t rows = 0;
    std::size_t crossings = 0;
    std::size_t tails = 0;
    for (std::size_t i = 0; i < traces.rows(); ++i) {
        if (weights[i] == 0) continue;
        const CrossingStats s = crossing_stats(out.level, traces.row(i));
        rows += weights[i];
        crossings += weights[i] * s.downcrossings;
        tails += s.last_period_above ? weights[i] : 0;
    }
    out.downcrossings = static_cast<double>(crossings) / static_cast<double>(rows);
    out.tail = static_cast<double>(tails) / static_cast<double>(rows);
    return out;
}

double percentile(std::vector<double> sorted_values, double q) {
    std::sort(sorted_values.begin(), sorted_values.end());
    const double pos = q * static_cast<double>(sorted_values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted_values.size() - 1);
    const double t = pos - static_cast<double>(lo);
    return sorted_values[lo] + t * (sorted_values[hi] - sorted_values[lo]);
}

}  // namespace

MarginalValueReport estimate_marginal_value_from_data(const TraceMatrix& traces,
                                                      const MarketPrices& prices,
                                                      std::size_t bootstrap_reps, Seed seed,
                                                      double roundtrip) {
    prices.validate();
    check_roundtrip(roundtrip);
    if (traces.rows() < 2 || traces.columns() < 1)
        throw InvalidArgument("empirical estimator needs >= 2 non-empty trace rows");

    MarginalValueReport r;
    r.method = MarginalValueMethod::plug_in;
    r.gamma = prices.quantile_level();
    r.rho = roundtrip;
    r.samples = traces.rows();
    r.seed = seed;
    r.bootstrap_reps = bootstrap_reps;

    std::vector<std::size_t> order(traces.rows() * traces.columns());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto data = traces.data();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return data[a] < data[b]; });

    const std::vector<std::size_t> unit(traces.rows(), 1);
    const PlugIn point = plug_in(traces, order, unit, r.gamma);
    r.x_star = point.level;
    r.expected_downcrossings = point.downcrossings;
    r.tail_probability = point.tail;
    r.formula_value = assemble(prices, roundtrip, point.downcrossings, point.tail);
    for (std::size_t i = 0; i < traces.rows(); ++i) {
        const CrossingStats s = crossing_stats(r.x_star, traces.row(i));
        r.tie_count += s.tie_count;
        r.tie_rows += s.tie_count > 0 ? 1 : 0;
    }

    if (bootstrap_reps == 0) {
        r.interval_lower = r.interval_upper = r.formula_value;
        return r;
    }

    std::vector<double> rep_values(bootstrap_reps);
    std::vector<double> rep_crossings(bootstrap_reps);
    std::vector<double> rep_tails(bootstrap_reps);
    parallel_for(bootstrap_reps, [&](std::size_t b) {
        auto rng = substream(seed, b);
        std::uniform_int_distribution<std::size_t> pick(0, traces.rows() - 1);
        std::vector<std::size_t> weights(traces.rows(), 0);
        for (std::size_t i = 0; i < traces.rows(); ++i) ++weights[pick(rng)];
        const PlugIn rep = plug_in(traces, order, weights, r.gamma);
        rep_crossings[b] = rep.downcrossings;
        rep_tails[b] = rep.tail;
        rep_values[b] = assemble(prices, roundtrip, rep.downcrossings, rep.tail);
    });
    r.formula_se = summarize(rep_values).std_dev;
    r.downcrossings_se = summarize(rep_crossings).std_dev;
    r.tail_se = summarize(rep_tails).std_dev;
    r.interval_lower = percentile(rep_values, 0.025);
    r.interval_upper = percentile(rep_values, 0.975);
    return r;
}

FiniteDifferenceReport finite_difference_marginal_value(const WindProcessSpec& spec,
                                                        const MarketPrices& prices,
                                                        const StorageType& storage,
                                                        double epsilon, std::size_t paths,
                                                        Seed seed, double tol) {
    prices.validate();
    StorageType base = storage;
    base.capacity = 0.0;
    base.validate();
    if (!(epsilon > 0.0)) throw InvalidArgument("finite-difference epsilon must be > 0");
    if (epsilon > base.rate)
        throw InvalidArgument("finite-difference epsilon must not exceed the rate r");
    if (paths < 2) throw InvalidArgument("finite difference needs >= 2 paths");

    StorageType perturbed = base;
    perturbed.capacity = epsilon;

    const PathSet set = PathSet::sample(spec, paths, seed);
    const ContractSolution at_zero = optimize_contract(base, set, prices, tol);
    const ContractSolution at_eps = optimize_contract(perturbed, set, prices, tol);

    const auto p0 = path_profits(at_zero.x_star, base, set, prices);
    const auto p1 = path_profits(at_eps.x_star, perturbed, set, prices);
    std::vector<double> diff(paths);
    std::vector<unsigned char> violated(paths, 0);
    parallel_for(paths, [&](std::size_t i) {
        diff[i] = (p1[i] - p0[i]) / epsilon;
        for (const double xi : set.path(i)) {
            if (std::abs(xi - at_zero.x_star) < epsilon) {
                violated[i] = 1;
                break;
            }
        }
    });
    const SampleSummary s = summarize(diff);

    FiniteDifferenceReport r;
    r.value = s.mean;
    r.std_error = s.std_error;
    r.epsilon = epsilon;
    r.x_star_base = at_zero.x_star;
    r.x_star_perturbed = at_eps.x_star;
    r.value_base = at_zero.value;
    r.value_perturbed = at_eps.value;
    r.violation_fraction = static_cast<double>(std::count(violated.begin(), violated.end(), 1)) /
                           static_cast<double>(paths);
    r.paths = paths;
    r.seed = seed;
    return r;
}

}  // namespace storval
