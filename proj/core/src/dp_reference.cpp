#include "storval/dp_reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "storval/errors.hpp"

namespace storval {

void DiscreteProcess::validate() const {
    if (periods.empty()) throw InvalidArgument("discrete process needs >= 1 period");
    for (const auto& p : periods) {
        if (p.values.empty() || p.values.size() != p.probabilities.size())
            throw InvalidArgument("discrete period needs matching non-empty values/probabilities");
        double total = 0.0;
        for (std::size_t s = 0; s < p.values.size(); ++s) {
            if (!(p.values[s] >= 0.0 && p.values[s] <= 1.0))
                throw InvalidArgument("discrete support value outside [0, 1]");
            if (!(p.probabilities[s] >= 0.0)) throw InvalidArgument("negative probability");
            total += p.probabilities[s];
        }
        if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("probabilities must sum to 1");
    }
}

double dp_reference_value(double contract, const StorageType& theta,
                          const DiscreteProcess& process, const MarketPrices& prices,
                          double grid_step) {
    theta.validate();
    process.validate();
    if (!theta.is_ideal()) throw InvalidArgument("DP reference supports ideal storage only");
    if (!(grid_step > 0.0)) throw InvalidArgument("grid step must be > 0");

    const auto levels = static_cast<std::size_t>(std::floor(theta.capacity / grid_step + 1e-9));
    if (theta.capacity > 0.0 && (levels == 0 || theta.rate + 1e-12 < grid_step))
        throw InvalidArgument("storage grid too coarse: no feasible nonzero move");

    std::vector<double> z(levels + 1);
    for (std::size_t i = 0; i <= levels; ++i) z[i] = static_cast<double>(i) * grid_step;

    // cost_to_go[i] = min expected imbalance cost from the current period on.
    std::vector<double> cost_to_go(levels + 1, 0.0);
    std::vector<double> next(levels + 1);
    for (std::size_t k = process.horizon(); k-- > 0;) {
        const auto& period = process.periods[k];
        for (std::size_t i = 0; i <= levels; ++i) {
            double expected = 0.0;
            for (std::size_t s = 0; s < period.values.size(); ++s) {
                const double xi = period.values[s];
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j <= levels; ++j) {
                    const double u = z[i] - z[j];
                    if (std::abs(u) > theta.rate + 1e-12) continue;
                    best = std::min(best, stage_cost(contract, u, xi, prices) + cost_to_go[j]);
                }
                expected += period.probabilities[s] * best;
            }
            next[i] = expected;
        }
        std::swap(cost_to_go, next);
    }
    const double revenue = static_cast<double>(process.horizon()) * prices.da_price * contract;
    return revenue - cost_to_go[0];
}

namespace {

double enumerate_cost(double contract, const StorageType& theta, const DiscreteProcess& process,
                      const MarketPrices& prices, std::size_t k, double z) {
    if (k == process.horizon()) return 0.0;
    const auto& period = process.periods[k];
    double expected = 0.0;
    for (std::size_t s = 0; s < period.values.size(); ++s) {
        const double xi = period.values[s];
        const double u = threshold_policy(contract, theta, z, xi);
        const double cost = stage_cost(contract, u, xi, prices) +
                            enumerate_cost(contract, theta, process, prices, k + 1,
                                           step(theta, z, u));
        expected += period.probabilities[s] * cost;
    }
    return expected;
}

}  // namespace

double threshold_policy_exact_value(double contract, const StorageType& theta,
                                    const DiscreteProcess& process, const MarketPrices& prices) {
    theta.validate();
    process.validate();
    const double revenue = static_cast<double>(process.horizon()) * prices.da_price * contract;
    return revenue - enumerate_cost(contract, theta, process, prices, 0, 0.0);
}

}  // namespace storval
