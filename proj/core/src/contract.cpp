#include "storval/contract.hpp"

#include <algorithm>
#include <sstream>

#include "storval/errors.hpp"
#include "storval/golden_section.hpp"

namespace storval {

std::string to_string(ContractMethod m) {
    switch (m) {
        case ContractMethod::quantile_closed_form: return "quantile-closed-form";
        case ContractMethod::golden_section_saa: return "golden-section-saa";
    }
    return "unknown";
}

ContractSolution optimal_contract_no_storage(const WindProcessSpec& spec,
                                             const MarketPrices& prices, std::size_t paths,
                                             Seed seed) {
    prices.validate();
    const double x = spec.quantile(prices.quantile_level());
    const ProfitEstimate est = expected_profit(x, StorageType{}, spec, prices, paths, seed);
    ContractSolution sol;
    sol.x_star = x;
    sol.value = est.mean;
    sol.value_se = est.std_error;
    sol.method = ContractMethod::quantile_closed_form;
    sol.bracket_width = 0.0;
    sol.paths = paths;
    sol.seed = seed;
    return sol;
}

ContractSolution optimize_contract(const StorageType& theta, const PathSet& paths,
                                   const MarketPrices& prices, double tol) {
    theta.validate();
    prices.validate();
    if (paths.size() < 2) throw InvalidArgument("optimize_contract needs >= 2 paths");
    if (!(tol > 0.0)) throw InvalidArgument("contract tolerance must be > 0");

    auto objective = [&](double x) {
        return expected_profit(x, theta, paths, prices).mean;
    };
    const GoldenSectionResult gs = golden_section_maximize(objective, 0.0, 1.0, tol);
    const ProfitEstimate at = expected_profit(gs.argmax, theta, paths, prices);

    ContractSolution sol;
    sol.x_star = gs.argmax;
    sol.value = at.mean;
    sol.value_se = at.std_error;
    sol.method = ContractMethod::golden_section_saa;
    sol.bracket_width = gs.bracket_width();
    sol.paths = paths.size();
    sol.seed = paths.seed();
    return sol;
}

ContractSolution optimize_contract(const StorageType& theta, const WindProcessSpec& spec,
                                   const MarketPrices& prices, std::size_t paths, Seed seed,
                                   double tol) {
    theta.validate();
    prices.validate();
    if (paths < 2) throw InvalidArgument("optimize_contract needs >= 2 paths");
    return optimize_contract(theta, PathSet::sample(spec, paths, seed), prices, tol);
}

ContractSolution optimal_value(const StorageType& theta, const WindProcessSpec& spec,
                               const MarketPrices& prices, std::size_t paths, Seed seed,
                               double tol) {
    theta.validate();
    if (theta.capacity == 0.0) return optimal_contract_no_storage(spec, prices, paths, seed);
    return optimize_contract(theta, spec, prices, paths, seed, tol);
}

std::vector<SupplyPoint> supply_function(const WindProcessSpec& spec, double shortfall_penalty,
                                         double surplus_penalty,
                                         const std::vector<double>& price_grid) {
    std::vector<SupplyPoint> curve;
    curve.reserve(price_grid.size());
    for (const double p : price_grid) {
        const MarketPrices prices{p, shortfall_penalty, surplus_penalty};
        prices.validate();
        curve.push_back({p, spec.quantile(prices.quantile_level())});
    }

    std::vector<SupplyPoint> sorted = curve;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const SupplyPoint& a, const SupplyPoint& b) { return a.price < b.price; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].contract < sorted[i - 1].contract) {
            std::ostringstream msg;
            msg << "supply function decreases between p = " << sorted[i - 1].price
                << " and p = " << sorted[i].price;
            throw NumericalValidationError(msg.str());
        }
    }
    return curve;
}

}  // namespace storval
