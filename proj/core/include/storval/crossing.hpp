#ifndef STORVAL_CROSSING_HPP
#define STORVAL_CROSSING_HPP

#include <cstddef>
#include <span>
#include <string>

#include "storval/contract.hpp"
#include "storval/settlement.hpp"
#include "storval/storage.hpp"
#include "storval/wind_process.hpp"

namespace storval {

// Strict level-crossing statistics of one path against a level x.
// A downcrossing at k means a_k > x > a_{k+1}; an upcrossing a_k < x < a_{k+1}.
// Periods with a_k == x are ties: neither above nor below, never a crossing.
struct CrossingStats {
    std::size_t downcrossings = 0;
    std::size_t upcrossings = 0;
    std::size_t above_count = 0;  // |K+|: a_k > x
    std::size_t below_count = 0;  // |K-|: a_k < x
    std::size_t tie_count = 0;
    bool last_period_above = false;
};

CrossingStats crossing_stats(double level, std::span<const double> path);

// Monte Carlo check of the shortfall-frequency identities at x* = F^{-1}(gamma)
// with b = 0: E|K-|/N = gamma, E|K+|/N = 1 - gamma, |K-| + |K+| = N.
struct ShortfallFrequencyReport {
    double gamma = 0.0;
    double x_star = 0.0;
    double below_fraction = 0.0;
    double below_se = 0.0;
    double below_z = 0.0;  // (below_fraction - gamma) / below_se
    double above_fraction = 0.0;
    double above_se = 0.0;
    double above_z = 0.0;
    std::size_t paths = 0;
    std::size_t identity_violations = 0;  // paths with |K-| + |K+| != N
    Seed seed = 0;
};

// Throws InvalidArgument for the empirical kind (ties break the identity).
ShortfallFrequencyReport verify_shortfall_frequency(const WindProcessSpec& spec, const MarketPrices& prices,
                                        std::size_t paths, Seed seed);

enum class MarginalValueMethod { exact_iid, monte_carlo, plug_in };

std::string to_string(MarginalValueMethod m);

// Marginal value of storage capacity at b = 0 and its ingredients:
//   (rho m_alpha + m_beta) E[Lambda(x*, xi)] + m_beta P{xi_{N-1} > x*}
// with rho = 1 for lossless storage.
struct MarginalValueReport {
    double formula_value = 0.0;
    double formula_se = 0.0;
    double expected_downcrossings = 0.0;
    double downcrossings_se = 0.0;
    double tail_probability = 0.0;
    double tail_se = 0.0;
    double x_star = 0.0;
    double gamma = 0.0;
    double rho = 1.0;
    MarginalValueMethod method = MarginalValueMethod::exact_iid;
    std::size_t samples = 0;  // paths or trace rows; 0 for exact
    Seed seed = 0;
    // Empirical estimator only.
    std::size_t tie_count = 0;  // entries equal to the level across all rows
    std::size_t tie_rows = 0;   // rows containing at least one tie
    std::size_t bootstrap_reps = 0;
    double interval_lower = 0.0;  // 2.5% / 97.5% bootstrap percentiles
    double interval_upper = 0.0;
};

struct MarginalValueOptions {
    std::size_t paths = 100000;
    Seed seed = 0;
    double roundtrip = 1.0;      // rho in (0, 1]
    bool monte_carlo = false;    // force sampling for iid kinds
    std::size_t bootstrap_reps = 1000;  // empirical kind
};

// iid parametric kinds are evaluated exactly from Phi(x*) unless
// monte_carlo is set; nonstationary kinds are sampled; empirical kinds use
// the plug-in estimator over their trace rows.
MarginalValueReport marginal_value(const WindProcessSpec& spec, const MarketPrices& prices,
                                   const MarginalValueOptions& options = {});

// Distribution-free value for any iid process with continuous marginals:
//   (N-1)(rho m_alpha + m_beta)(1-gamma)gamma + m_beta(1-gamma)
double marginal_value_iid_closed_form(const MarketPrices& prices, std::size_t horizon,
                                      double roundtrip = 1.0);

// Plug-in estimator from data: empirical pooled quantile, mean strict
// downcrossing count over rows and fraction of rows ending above the level.
// Uncertainty from a row bootstrap (bootstrap_reps = 0 disables it).
MarginalValueReport estimate_marginal_value_from_data(const TraceMatrix& traces,
                                                      const MarketPrices& prices,
                                                      std::size_t bootstrap_reps = 1000,
                                                      Seed seed = 0, double roundtrip = 1.0);

struct FiniteDifferenceReport {
    double value = 0.0;
    double std_error = 0.0;
    double epsilon = 0.0;
    double x_star_base = 0.0;
    double x_star_perturbed = 0.0;
    double value_base = 0.0;
    double value_perturbed = 0.0;
    // Fraction of paths with some |xi_k - x*| < epsilon, i.e. where a capacity
    // of epsilon is not fully cycled at every crossing.
    double violation_fraction = 0.0;
    std::size_t paths = 0;
    Seed seed = 0;
};

// Forward difference (J*(epsilon) - J*(0)) / epsilon with both optima found
// by golden-section search over one common path set. `storage` supplies r and
// the loss parameters; its capacity is ignored. Throws InvalidArgument unless
// 0 < epsilon <= r.
FiniteDifferenceReport finite_difference_marginal_value(const WindProcessSpec& spec,
                                                        const MarketPrices& prices,
                                                        const StorageType& storage,
                                                        double epsilon, std::size_t paths,
                                                        Seed seed, double tol = 1e-7);

}  // namespace storval

#endif  // STORVAL_CROSSING_HPP
