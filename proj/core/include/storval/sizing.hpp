#ifndef STORVAL_SIZING_HPP
#define STORVAL_SIZING_HPP

#include <cstddef>

#include "storval/contract.hpp"
#include "storval/crossing.hpp"

namespace storval {

// Linear capital cost C(theta) = c_b b + c_r r.
struct CapitalCost {
    double per_capacity = 0.0;  // c_b
    double per_rate = 0.0;      // c_r
};

struct SizingOptions {
    double max_capacity = 1.0;  // b_max
    double max_rate = 1.0;      // r_max
    std::size_t paths = 2000;
    Seed seed = 0;
    double size_tol = 1e-3;
    double contract_tol = kDefaultContractTol;
    std::size_t max_rounds = 6;
};

struct SizingResult {
    double capacity = 0.0;
    double rate = 0.0;
    double value = 0.0;      // J*(theta_hat) on the common path set
    double net_value = 0.0;  // value - C(theta_hat)
    double value_without_storage = 0.0;  // J*(0) on the same paths
    double contract = 0.0;   // x*(theta_hat)
    double marginal_value_at_origin = 0.0;
    // Concavity of J* makes the first unit the most valuable: investing pays
    // only when the marginal value at the origin exceeds c_b.
    bool invest = false;
    std::size_t rounds = 0;
    std::size_t value_evaluations = 0;
};

// max over theta in [0, b_max] x [0, r_max] of J*(theta) - C(theta) by
// coordinate ascent with golden-section line searches on one path set.
// theta = 0 is always a candidate, so net_value >= value_without_storage.
SizingResult optimize_storage_size(const WindProcessSpec& spec, const MarketPrices& prices,
                                   const CapitalCost& cost, const SizingOptions& options = {});

}  // namespace storval

#endif  // STORVAL_SIZING_HPP
