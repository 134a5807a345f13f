#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "storval/crossing.hpp"
#include "storval/errors.hpp"

using namespace storval;

TEST_CASE("crossing counts follow the strict definitions") {
    // Three strict downcrossings of 0.5, as in the level-crossing illustration.
    const std::vector<double> fig{0.7, 0.3, 0.6, 0.2, 0.8, 0.1, 0.4};
    const CrossingStats f = crossing_stats(0.5, fig);
    CHECK(f.downcrossings == 3);
    CHECK(f.upcrossings == 2);

    const CrossingStats flat = crossing_stats(0.3, std::vector<double>(5, 0.6));
    CHECK(flat.downcrossings == 0);
    CHECK(flat.upcrossings == 0);
    CHECK(flat.above_count == 5);

    const CrossingStats s = crossing_stats(0.5, std::vector<double>{0.8, 0.2, 0.9, 0.1});
    CHECK(s.downcrossings == 2);
    CHECK(s.upcrossings == 1);
    CHECK(s.above_count == 2);
    CHECK(s.below_count == 2);
    CHECK(s.tie_count == 0);
    CHECK_FALSE(s.last_period_above);
}

TEST_CASE("ties are counted separately and never cross") {
    const CrossingStats s = crossing_stats(0.5, std::vector<double>{0.8, 0.5, 0.2, 0.5, 0.9});
    CHECK(s.tie_count == 2);
    CHECK(s.downcrossings == 0);
    CHECK(s.upcrossings == 0);
    CHECK(s.above_count == 2);
    CHECK(s.below_count == 1);
    CHECK(s.last_period_above);
}

TEST_CASE("property: crossing bookkeeping") {
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> grid(0, 10);
    for (int t = 0; t < 5000; ++t) {
        std::vector<double> path(1 + t % 30);
        for (auto& v : path) v = grid(rng) / 10.0;  // coarse grid: ties happen
        const double level = grid(rng) / 10.0;
        const CrossingStats s = crossing_stats(level, path);
        CHECK(s.above_count + s.below_count + s.tie_count == path.size());
        const long diff = static_cast<long>(s.downcrossings) - static_cast<long>(s.upcrossings);
        // Adjacent-pair counting lets a tie hide a crossing, so alternation needs tie-free paths.
        if (s.tie_count == 0) CHECK(std::abs(diff) <= 1);
        CHECK(s.downcrossings <= s.above_count);
        CHECK(s.downcrossings <= s.below_count);
    }
}

TEST_CASE("shortfall frequency at the quantile contract") {
    const auto spec = WindProcessSpec::iid(24, Marginal::uniform());
    const auto r = verify_shortfall_frequency(spec, MarketPrices{0.0, 1.0, 1.0}, 100000, 5);
    CHECK(r.gamma == 0.5);
    CHECK(std::abs(r.below_fraction - 0.5) <= 3.0 * r.below_se);
    CHECK(std::abs(r.above_fraction - 0.5) <= 3.0 * r.above_se);
    CHECK(r.identity_violations == 0);

    // gamma = 1 puts the contract at the right endpoint: nothing exceeds it.
    const auto top = verify_shortfall_frequency(spec, MarketPrices{1.0, 1.0, 0.0}, 2000, 5);
    CHECK(top.x_star == 1.0);
    CHECK(top.above_fraction == 0.0);
    CHECK(top.above_z == 0.0);

    const auto emp = WindProcessSpec::empirical(TraceMatrix::from_rows({{0.2, 0.8}, {0.6, 0.4}}));
    CHECK_THROWS_AS(verify_shortfall_frequency(emp, MarketPrices{0.0, 1.0, 1.0}, 10, 1),
                    InvalidArgument);
}

TEST_CASE("iid closed form") {
    CHECK(marginal_value_iid_closed_form(MarketPrices{0.0, 1.0, 1.0}, 24) == doctest::Approx(12.0));
    CHECK(marginal_value_iid_closed_form(MarketPrices{0.0, 1.0, 1.0}, 2) == doctest::Approx(1.0));
    const MarketPrices p{0.2, 1.0, 0.4};
    const double g = 0.6 / 1.4;
    CHECK(marginal_value_iid_closed_form(p, 1) == doctest::Approx(0.4 * (1.0 - g)));
    CHECK(marginal_value_iid_closed_form(MarketPrices{1.0, 1.0, 0.0}, 24) == 0.0);
    CHECK_THROWS_AS(marginal_value_iid_closed_form(MarketPrices{0.0, 1.0, 0.0}, 24),
                    AssumptionViolation);
}

TEST_CASE("marginal value examples") {
    const MarketPrices unit{0.0, 1.0, 1.0};
    for (const auto& m : {Marginal::uniform(), Marginal::beta(2.0, 5.0),
                          Marginal::truncated_normal(0.3, 0.2)}) {
        const auto r = marginal_value(WindProcessSpec::iid(2, m), unit);
        CHECK(r.method == MarginalValueMethod::exact_iid);
        CHECK(r.formula_value == doctest::Approx(1.0).epsilon(1e-10));  // 1*2*0.5*0.5 + 0.5
    }
    const auto single = marginal_value(WindProcessSpec::iid(1, Marginal::beta(2.0, 5.0)),
                                       MarketPrices{0.2, 1.0, 0.4});
    CHECK(single.expected_downcrossings == 0.0);
    CHECK(single.formula_value == doctest::Approx(0.4 * (1.0 - 0.6 / 1.4)).epsilon(1e-10));

    // Lossy assembly: rho = 0.5, m_alpha = 2, m_beta = 1, p = 0 -> gamma = 1/3.
    MarginalValueOptions opt;
    opt.roundtrip = 0.5;
    const auto lossy = marginal_value(WindProcessSpec::iid(24, Marginal::uniform()),
                                      MarketPrices{0.0, 2.0, 1.0}, opt);
    const double lam = lossy.expected_downcrossings;
    const double tail = lossy.tail_probability;
    CHECK(lam == doctest::Approx(23.0 * (2.0 / 3.0) * (1.0 / 3.0)).epsilon(1e-10));
    CHECK(tail == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(lossy.formula_value == doctest::Approx((0.5 * 2.0 + 1.0) * lam + 1.0 * tail));
    CHECK(lossy.formula_value ==
          doctest::Approx(marginal_value_iid_closed_form(MarketPrices{0.0, 2.0, 1.0}, 24, 0.5)));
}

TEST_CASE("exact expected downcrossings reproduce (N-1)(1-gamma)gamma") {
    const std::size_t n = 24;
    for (const auto& m : {Marginal::uniform(), Marginal::beta(2.0, 5.0),
                          Marginal::truncated_normal(0.6, 0.3),
                          Marginal::piecewise_linear({0.0, 0.2, 1.0}, {0.0, 0.7, 1.0})}) {
        CAPTURE(m.name());
        for (double p : {0.0, 0.2, 0.45}) {
            const MarketPrices prices{p, 1.0, 0.5};
            const double g = prices.gamma();
            const auto r = marginal_value(WindProcessSpec::iid(n, m), prices);
            CHECK(std::abs(r.expected_downcrossings - (n - 1) * (1.0 - g) * g) <= 1e-12);
        }
    }
}

TEST_CASE("Monte Carlo marginal value matches the closed form for iid marginals") {
    MarginalValueOptions opt;
    opt.monte_carlo = true;
    opt.paths = 50000;
    opt.seed = 3;
    const MarketPrices prices{0.1, 1.0, 0.6};
    const double target = marginal_value_iid_closed_form(prices, 12);
    for (const auto& m : {Marginal::uniform(), Marginal::beta(2.0, 5.0)}) {
        const auto r = marginal_value(WindProcessSpec::iid(12, m), prices, opt);
        CHECK(r.method == MarginalValueMethod::monte_carlo);
        CHECK(std::abs(r.formula_value - target) <= 3.0 * r.formula_se);
    }
}

TEST_CASE("property: formula is nondecreasing in rho and homogeneous in prices") {
    const auto spec = WindProcessSpec::nonstationary(
        {Marginal::uniform(0.0, 0.7), Marginal::beta(2.0, 2.0), Marginal::uniform(0.3, 1.0),
         Marginal::beta(5.0, 2.0)});
    MarginalValueOptions opt;
    opt.paths = 5000;
    opt.seed = 2;
    const MarketPrices prices{0.2, 1.0, 0.5};
    double prev = -1.0;
    for (double rho : {0.1, 0.3, 0.5, 0.7695, 0.9, 1.0}) {
        opt.roundtrip = rho;
        const double v = marginal_value(spec, prices, opt).formula_value;
        CHECK(v >= prev);
        prev = v;
    }
    opt.roundtrip = 1.0;
    const double base = marginal_value(spec, prices, opt).formula_value;
    const double doubled = marginal_value(spec, MarketPrices{0.4, 2.0, 1.0}, opt).formula_value;
    CHECK(doubled == doctest::Approx(2.0 * base).epsilon(1e-14));
}

TEST_CASE("empirical estimator") {
    const auto gen = WindProcessSpec::iid(24, Marginal::uniform());
    const PathSet set = PathSet::sample(gen, 10000, 123);
    const TraceMatrix traces(set.size(), set.horizon(),
                             std::vector<double>(set.data().begin(), set.data().end()));
    const MarketPrices prices{0.0, 1.0, 1.0};
    const auto r = estimate_marginal_value_from_data(traces, prices, 200, 1);
    CHECK(r.method == MarginalValueMethod::plug_in);
    CHECK(std::abs(r.formula_value - 12.0) <= 0.05 * 12.0);
    CHECK(r.formula_se > 0.0);
    CHECK(r.interval_lower <= r.formula_value);
    CHECK(r.interval_upper >= r.formula_value);
    CHECK(r.tie_rows >= 1);  // the pooled quantile is itself a data point

    const auto flat = TraceMatrix::from_rows({{0.3, 0.3, 0.3}, {0.7, 0.7, 0.7}, {0.4, 0.4, 0.4}});
    const auto f = estimate_marginal_value_from_data(flat, prices, 100, 1);
    CHECK(f.expected_downcrossings == 0.0);

    const auto twin = TraceMatrix::from_rows({{0.9, 0.1, 0.8}, {0.9, 0.1, 0.8}});
    const auto t = estimate_marginal_value_from_data(twin, prices, 100, 1);
    CHECK(t.formula_se == 0.0);
    CHECK(t.downcrossings_se == 0.0);

    CHECK_THROWS_AS(estimate_marginal_value_from_data(TraceMatrix::from_rows({{0.1, 0.2}}), prices),
                    InvalidArgument);
    CHECK_THROWS_AS(estimate_marginal_value_from_data(TraceMatrix{}, prices), InvalidArgument);
}

TEST_CASE("empirical spec routes marginal_value to the plug-in estimator") {
    const auto traces = TraceMatrix::from_rows({{0.9, 0.1, 0.8}, {0.2, 0.6, 0.3}, {0.7, 0.4, 0.9}});
    MarginalValueOptions opt;
    opt.bootstrap_reps = 50;
    const auto r = marginal_value(WindProcessSpec::empirical(traces), MarketPrices{0.0, 1.0, 1.0}, opt);
    const auto d = estimate_marginal_value_from_data(traces, MarketPrices{0.0, 1.0, 1.0}, 50, 0);
    CHECK(r.method == MarginalValueMethod::plug_in);
    CHECK(r.formula_value == d.formula_value);
    CHECK(r.formula_se == d.formula_se);
}

TEST_CASE("finite difference agrees with the crossing formula") {
    const MarketPrices prices{0.0, 1.0, 1.0};
    const auto ideal = StorageType::ideal(0.0, 1.0);

    const auto regime = WindProcessSpec::nonstationary([] {
        std::vector<Marginal> ms;
        for (int k = 0; k < 24; ++k)
            ms.push_back(k < 12 ? Marginal::uniform(0.0, 0.7) : Marginal::uniform(0.3, 1.0));
        return ms;
    }());
    const auto iid = WindProcessSpec::iid(24, Marginal::uniform());
    for (const auto* spec : {&iid, &regime}) {
        const auto fd = finite_difference_marginal_value(*spec, prices, ideal, 1e-3, 40000, 11);
        MarginalValueOptions opt;
        opt.monte_carlo = true;
        opt.paths = 40000;
        opt.seed = 12;
        const auto mv = marginal_value(*spec, prices, opt);
        const double se = std::hypot(fd.std_error, mv.formula_se);
        CHECK(std::abs(fd.value - mv.formula_value) <=
              std::max(0.05 * mv.formula_value, 3.0 * se));
        CHECK(fd.violation_fraction >= 0.0);
        CHECK(fd.violation_fraction <= 1.0);
    }
}

TEST_CASE("finite difference edge cases") {
    const auto spec = WindProcessSpec::iid(6, Marginal::uniform());
    const auto zero = finite_difference_marginal_value(spec, MarketPrices{0.0, 0.0, 0.0},
                                                       StorageType::ideal(0.0, 1.0), 1e-3, 500, 1);
    CHECK(zero.value == 0.0);
    CHECK_THROWS_AS(finite_difference_marginal_value(spec, MarketPrices{0.0, 1.0, 1.0},
                                                     StorageType::ideal(0.0, 0.01), 0.1, 100, 1),
                    InvalidArgument);
    CHECK_THROWS_AS(finite_difference_marginal_value(spec, MarketPrices{0.0, 1.0, 1.0},
                                                     StorageType::ideal(0.0, 1.0), 0.0, 100, 1),
                    InvalidArgument);
}
