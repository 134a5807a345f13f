#ifndef STORVAL_PARALLEL_HPP
#define STORVAL_PARALLEL_HPP

#include <cstddef>
#include <functional>
#include <span>

namespace storval {

// Number of worker threads used by the Monte Carlo evaluators.
// Resolution order: set_worker_count() override, then the STORVAL_THREADS
// environment variable (0 = auto), then std::thread::hardware_concurrency().
std::size_t worker_count();

// Overrides the worker count for this process; 0 restores env/auto resolution.
void set_worker_count(std::size_t n);

// Runs body(i) for every i in [0, n). Indices are split into contiguous
// chunks, one per worker. Bodies must only write to per-index storage.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Pairwise (cascade) summation in a fixed order. The result depends only on
// the input sequence, never on how it was produced.
double pairwise_sum(std::span<const double> values);

struct SampleSummary {
    double mean = 0.0;
    double std_dev = 0.0;    // sample standard deviation (n-1 denominator)
    double std_error = 0.0;  // std_dev / sqrt(n)
    std::size_t count = 0;
};

// Mean and spread of a sample. Deviations are taken from the first element,
// so a constant sample reproduces that constant exactly.
SampleSummary summarize(std::span<const double> values);

}  // namespace storval

#endif  // STORVAL_PARALLEL_HPP
