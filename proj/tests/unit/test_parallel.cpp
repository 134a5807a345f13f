#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "storval/parallel.hpp"
#include "storval/random.hpp"

using namespace storval;

TEST_CASE("pairwise_sum matches a plain sum on exactly representable data") {
    std::vector<double> v(1000);
    std::iota(v.begin(), v.end(), 1.0);
    CHECK(pairwise_sum(v) == 500500.0);
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("summarize reproduces a constant sample exactly") {
    std::vector<double> v(7, 0.1);
    const SampleSummary s = summarize(v);
    CHECK(s.mean == 0.1);
    CHECK(s.std_error == 0.0);
    CHECK(s.count == 7);
}

TEST_CASE("summarize: mean and standard error of a small sample") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const SampleSummary s = summarize(v);
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.std_dev == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
}

TEST_CASE("parallel_for visits every index once, for any worker count") {
    for (std::size_t workers : {1u, 2u, 3u, 8u}) {
        set_worker_count(workers);
        std::vector<int> hits(1001, 0);
        parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits) CHECK(h == 1);
    }
    set_worker_count(0);
}

TEST_CASE("parallel_for propagates exceptions") {
    set_worker_count(4);
    CHECK_THROWS_AS(parallel_for(100,
                                 [](std::size_t i) {
                                     if (i == 57) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
    set_worker_count(0);
}

TEST_CASE("substreams are reproducible and distinct") {
    auto a = substream(42, 7);
    auto b = substream(42, 7);
    auto c = substream(42, 8);
    auto d = substream(43, 7);
    const auto va = a();
    CHECK(va == b());
    CHECK(va != c());
    CHECK(va != d());
    auto e = substream(1, 0);
    for (int i = 0; i < 1000; ++i) {
        const double u = uniform01(e);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}
