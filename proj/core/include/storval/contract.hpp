#ifndef STORVAL_CONTRACT_HPP
#define STORVAL_CONTRACT_HPP

#include <string>
#include <vector>

#include "storval/settlement.hpp"

namespace storval {

enum class ContractMethod { quantile_closed_form, golden_section_saa };

std::string to_string(ContractMethod m);

inline constexpr double kDefaultContractTol = 1e-4;

// x*(theta) and its estimated value J*(theta).
struct ContractSolution {
    double x_star = 0.0;
    double value = 0.0;
    double value_se = 0.0;
    ContractMethod method = ContractMethod::quantile_closed_form;
    double bracket_width = 0.0;
    std::size_t paths = 0;
    Seed seed = 0;
};

// Without storage the optimal contract is the inf-quantile F^{-1}(gamma).
// The value is the sample-average profit at that contract with b = 0.
ContractSolution optimal_contract_no_storage(const WindProcessSpec& spec,
                                             const MarketPrices& prices, std::size_t paths,
                                             Seed seed);

// Golden-section search on [0, 1] over the sample-average objective, which
// is concave in x. Any x > 1 is weakly dominated: supply never exceeds 1 and
// each extra unit earns p but is short with certainty at expected cost
// m_alpha >= p.
ContractSolution optimize_contract(const StorageType& theta, const PathSet& paths,
                                   const MarketPrices& prices, double tol = kDefaultContractTol);

ContractSolution optimize_contract(const StorageType& theta, const WindProcessSpec& spec,
                                   const MarketPrices& prices, std::size_t paths, Seed seed,
                                   double tol = kDefaultContractTol);

// J*(theta): closed-form quantile contract when b = 0, golden-section search
// otherwise, evaluated on the paths of `seed`.
ContractSolution optimal_value(const StorageType& theta, const WindProcessSpec& spec,
                               const MarketPrices& prices, std::size_t paths, Seed seed,
                               double tol = kDefaultContractTol);

struct SupplyPoint {
    double price = 0.0;
    double contract = 0.0;
};

// x*(p) for b = 0 over a grid of day-ahead prices in [0, m_alpha]. Throws
// AssumptionViolation for grid points outside that range or with gamma = 0,
// and NumericalValidationError if the curve is not nondecreasing.
std::vector<SupplyPoint> supply_function(const WindProcessSpec& spec, double shortfall_penalty,
                                         double surplus_penalty,
                                         const std::vector<double>& price_grid);

}  // namespace storval

#endif  // STORVAL_CONTRACT_HPP
