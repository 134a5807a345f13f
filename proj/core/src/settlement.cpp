#include "storval/settlement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "storval/errors.hpp"
#include "storval/parallel.hpp"

namespace storval {

void MarketPrices::validate() const {
    auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
    if (!ok(da_price)) throw InvalidArgument("day-ahead price p must be finite and >= 0");
    if (!ok(shortfall_penalty)) throw InvalidArgument("m_alpha must be finite and >= 0");
    if (!ok(surplus_penalty)) throw InvalidArgument("m_beta must be finite and >= 0");
    if (da_price > shortfall_penalty) {
        std::ostringstream msg;
        msg << "price assumption p <= m_alpha violated: p = " << da_price
            << " exceeds m_alpha = " << shortfall_penalty;
        throw AssumptionViolation(msg.str());
    }
}

double MarketPrices::gamma() const {
    const double denom = shortfall_penalty + surplus_penalty;
    if (!(denom > 0.0)) throw AssumptionViolation("gamma undefined: m_alpha + m_beta = 0");
    return (da_price + surplus_penalty) / denom;
}

double MarketPrices::quantile_level() const {
    const double g = gamma();
    if (!(g > 0.0)) throw AssumptionViolation("gamma = 0 (p = m_beta = 0): contract quantile is degenerate");
    return g;
}

double stage_cost(double contract, double input, double supply, const MarketPrices& prices) {
    // Same rounding as the policy's x - xi, so a fully covered deviation settles to exactly 0.
    const double imbalance = (contract - supply) - input;
    return prices.shortfall_penalty * std::max(imbalance, 0.0) +
           prices.surplus_penalty * std::max(-imbalance, 0.0);
}

double path_imbalance_cost(double contract, const StorageType& theta,
                           std::span<const double> path, const MarketPrices& prices) {
    double z = 0.0;
    double cost = 0.0;
    for (const double xi : path) {
        const double u = threshold_policy(contract, theta, z, xi);
        z = step(theta, z, u);
        cost += stage_cost(contract, u, xi, prices);
    }
    return cost;
}

namespace {

using Rational = boost::multiprecision::cpp_rational;

Rational exact_cost(const Rational& x, const StorageType& theta, std::span<const double> path,
                    const Rational& m_alpha, const Rational& m_beta) {
    if (!theta.is_ideal())
        throw InvalidArgument("exact cost comparison supports ideal storage only");
    const Rational b(theta.capacity);
    const Rational r(theta.rate);
    Rational z = 0;
    Rational shortfall = 0;
    Rational surplus = 0;
    for (const double xi : path) {
        const Rational d = x - Rational(xi);
        if (d >= 0) {
            const Rational u = std::min<Rational>({d, z, r});
            z -= u;
            shortfall += d - u;
        } else {
            const Rational u = std::min<Rational>({Rational(-d), b - z, r});
            z += u;
            surplus += -d - u;
        }
    }
    return m_alpha * shortfall + m_beta * surplus;
}

}  // namespace

int compare_imbalance_cost_exact(double contract, const StorageType& a, const StorageType& b,
                                 std::span<const double> path, const MarketPrices& prices) {
    a.validate();
    b.validate();
    const Rational x(contract);
    const Rational ma(prices.shortfall_penalty);
    const Rational mb(prices.surplus_penalty);
    const Rational ca = exact_cost(x, a, path, ma, mb);
    const Rational cb = exact_cost(x, b, path, ma, mb);
    return ca < cb ? -1 : (cb < ca ? 1 : 0);
}

double path_profit(double contract, const StorageType& theta, std::span<const double> path,
                   const MarketPrices& prices) {
    const double revenue = static_cast<double>(path.size()) * prices.da_price * contract;
    return revenue - path_imbalance_cost(contract, theta, path, prices);
}

std::vector<double> path_profits(double contract, const StorageType& theta, const PathSet& paths,
                                 const MarketPrices& prices) {
    std::vector<double> out(paths.size());
    parallel_for(paths.size(), [&](std::size_t i) {
        out[i] = path_profit(contract, theta, paths.path(i), prices);
    });
    return out;
}

ProfitEstimate expected_profit(double contract, const StorageType& theta, const PathSet& paths,
                               const MarketPrices& prices) {
    theta.validate();
    prices.validate();
    if (paths.size() < 2) throw InvalidArgument("expected_profit needs >= 2 paths");
    const auto profits = path_profits(contract, theta, paths, prices);
    const SampleSummary s = summarize(profits);
    return {s.mean, s.std_error, paths.size(), paths.seed()};
}

ProfitEstimate expected_profit(double contract, const StorageType& theta,
                               const WindProcessSpec& spec, const MarketPrices& prices,
                               std::size_t paths, Seed seed) {
    theta.validate();
    prices.validate();
    if (paths < 2) throw InvalidArgument("expected_profit needs >= 2 paths");
    std::vector<double> profits(paths);
    parallel_for(paths, [&](std::size_t i) {
        const SamplePath p = spec.sample_path(seed, i);
        profits[i] = path_profit(contract, theta, p.view(), prices);
    });
    const SampleSummary s = summarize(profits);
    return {s.mean, s.std_error, paths, seed};
}

}  // namespace storval
