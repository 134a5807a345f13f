#ifndef STORVAL_SETTLEMENT_HPP
#define STORVAL_SETTLEMENT_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "storval/random.hpp"
#include "storval/storage.hpp"
#include "storval/wind_process.hpp"

namespace storval {

// Day-ahead price and mean real-time imbalance prices ($/MWh). Random
// imbalance prices enter the stage cost linearly and are independent of
// supply, so only their means are needed.
struct MarketPrices {
    double da_price = 0.0;           // p
    double shortfall_penalty = 0.0;  // m_alpha
    double surplus_penalty = 0.0;    // m_beta

    // Throws InvalidArgument for negative or non-finite prices and
    // AssumptionViolation when p > m_alpha.
    void validate() const;

    // gamma = (p + m_beta) / (m_alpha + m_beta). Throws AssumptionViolation
    // when m_alpha + m_beta = 0.
    double gamma() const;

    // Like gamma(), but also rejects gamma = 0 (p = m_beta = 0), where the
    // inf-quantile is degenerate.
    double quantile_level() const;
};

struct ProfitEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t paths = 0;
    Seed seed = 0;
};

// g = m_alpha (x - xi - u)^+ + m_beta (xi + u - x)^+
double stage_cost(double contract, double input, double supply, const MarketPrices& prices);

// N p x - sum_k g(x, u_k, xi_k) along the threshold-policy trajectory.
double path_profit(double contract, const StorageType& theta, std::span<const double> path,
                   const MarketPrices& prices);

// Total imbalance cost sum_k g along the threshold-policy trajectory.
double path_imbalance_cost(double contract, const StorageType& theta,
                           std::span<const double> path, const MarketPrices& prices);

// Compares the imbalance cost of two ideal storages on one path in exact rational arithmetic.
// Returns -1, 0 or 1 as cost(a) is below, equal to or above cost(b).
int compare_imbalance_cost_exact(double contract, const StorageType& a, const StorageType& b,
                                 std::span<const double> path, const MarketPrices& prices);

// path_profit for every path of the set, in path order.
std::vector<double> path_profits(double contract, const StorageType& theta, const PathSet& paths,
                                 const MarketPrices& prices);

// Sample-average estimate of the expected profit under the threshold policy.
// Paths come from per-index substreams of `seed`; the result is bitwise
// reproducible for any worker count. Requires paths >= 2.
ProfitEstimate expected_profit(double contract, const StorageType& theta,
                               const WindProcessSpec& spec, const MarketPrices& prices,
                               std::size_t paths, Seed seed);

// Same estimate over a fixed path set (common random numbers).
ProfitEstimate expected_profit(double contract, const StorageType& theta, const PathSet& paths,
                               const MarketPrices& prices);

}  // namespace storval

#endif  // STORVAL_SETTLEMENT_HPP
