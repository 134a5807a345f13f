#ifndef STORVAL_DP_REFERENCE_HPP
#define STORVAL_DP_REFERENCE_HPP

#include <vector>

#include "storval/settlement.hpp"
#include "storval/storage.hpp"

namespace storval {

// Supply process with independent periods and finite support.
struct DiscreteProcess {
    struct Period {
        std::vector<double> values;         // in [0, 1]
        std::vector<double> probabilities;  // sum to 1
    };
    std::vector<Period> periods;

    std::size_t horizon() const { return periods.size(); }
    // Throws InvalidArgument for empty supports, mismatched sizes, values
    // outside [0, 1] or probabilities that do not sum to 1 (within 1e-9).
    void validate() const;
};

// Backward induction over storage states z in {0, h, 2h, ...} <= b and moves
// between grid states with |u| <= r; the input is chosen after xi_k is seen.
// Returns the optimal expected profit N p x - min E[sum g] on that grid.
// Ideal storage only. Throws InvalidArgument when b > 0 but the grid admits
// no nonzero move (h > b or h > r).
double dp_reference_value(double contract, const StorageType& theta,
                          const DiscreteProcess& process, const MarketPrices& prices,
                          double grid_step);

// Exact expected profit of the threshold policy by enumerating every path.
double threshold_policy_exact_value(double contract, const StorageType& theta,
                                    const DiscreteProcess& process, const MarketPrices& prices);

}  // namespace storval

#endif  // STORVAL_DP_REFERENCE_HPP
