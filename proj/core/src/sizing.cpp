#include "storval/sizing.hpp"

#include <cmath>

#include "storval/errors.hpp"
#include "storval/golden_section.hpp"

namespace storval {

SizingResult optimize_storage_size(const WindProcessSpec& spec, const MarketPrices& prices,
                                   const CapitalCost& cost, const SizingOptions& options) {
    prices.validate();
    if (!(cost.per_capacity >= 0.0) || !(cost.per_rate >= 0.0))
        throw InvalidArgument("capital cost slopes must be >= 0");
    if (!(options.max_capacity > 0.0) || !(options.max_rate > 0.0))
        throw InvalidArgument("storage sizing box bounds must be > 0");
    if (options.paths < 2) throw InvalidArgument("storage sizing needs >= 2 paths");

    const PathSet set = PathSet::sample(spec, options.paths, options.seed);
    SizingResult out;

    auto optimum = [&](double b, double r) {
        ++out.value_evaluations;
        return optimize_contract(StorageType::ideal(b, r), set, prices, options.contract_tol);
    };
    auto net = [&](double b, double r) {
        return optimum(b, r).value - cost.per_capacity * b - cost.per_rate * r;
    };

    double b = 0.5 * options.max_capacity;
    double r = 0.5 * options.max_rate;
    for (out.rounds = 1; out.rounds <= options.max_rounds; ++out.rounds) {
        const double prev_b = b;
        const double prev_r = r;
        // Zero-cost plateaus resolve toward the larger size.
        b = golden_section_maximize([&](double v) { return net(v, r); }, 0.0,
                                    options.max_capacity, options.size_tol, TieBreak::upper)
                .argmax;
        r = golden_section_maximize([&](double v) { return net(b, v); }, 0.0, options.max_rate,
                                    options.size_tol, TieBreak::upper)
                .argmax;
        if (std::abs(b - prev_b) <= options.size_tol && std::abs(r - prev_r) <= options.size_tol)
            break;
    }
    out.rounds = std::min(out.rounds, options.max_rounds);

    const ContractSolution best = optimum(b, r);
    const ContractSolution none = optimum(0.0, 0.0);
    out.value_without_storage = none.value;
    out.capacity = b;
    out.rate = r;
    out.value = best.value;
    out.contract = best.x_star;
    out.net_value = best.value - cost.per_capacity * b - cost.per_rate * r;
    if (out.net_value < none.value) {
        out.capacity = 0.0;
        out.rate = 0.0;
        out.value = none.value;
        out.contract = none.x_star;
        out.net_value = none.value;
    }

    MarginalValueOptions mv;
    mv.paths = options.paths;
    mv.seed = options.seed;
    out.marginal_value_at_origin = marginal_value(spec, prices, mv).formula_value;
    out.invest = out.marginal_value_at_origin > cost.per_capacity;
    return out;
}

}  // namespace storval
