#include "storval/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace storval {

namespace {

std::atomic<std::size_t> g_override{0};

std::size_t from_environment() {
    const char* env = std::getenv("STORVAL_THREADS");
    if (env == nullptr || *env == '\0') return 0;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || v < 0) return 0;
    return static_cast<std::size_t>(v);
}

}  // namespace

std::size_t worker_count() {
    if (const std::size_t n = g_override.load(); n > 0) return n;
    if (const std::size_t n = from_environment(); n > 0) return n;
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void set_worker_count(std::size_t n) { g_override.store(n); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    if (n == 0) return;
    const std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
    const std::size_t chunk = (n + workers - 1) / workers;
    {
        std::vector<std::jthread> threads;
        threads.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            if (begin >= end) break;
            threads.emplace_back([&, begin, end] {
                try {
                    for (std::size_t i = begin; i < end; ++i) body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t kLeaf = 8;
    if (values.size() <= kLeaf) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

SampleSummary summarize(std::span<const double> values) {
    SampleSummary out;
    out.count = values.size();
    if (values.empty()) return out;

    const double shift = values.front();
    const std::size_t n = values.size();
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) dev[i] = values[i] - shift;
    const double mean_dev = pairwise_sum(dev) / static_cast<double>(n);
    out.mean = shift + mean_dev;

    if (n >= 2) {
        for (std::size_t i = 0; i < n; ++i) {
            const double d = dev[i] - mean_dev;
            dev[i] = d * d;
        }
        const double var = pairwise_sum(dev) / static_cast<double>(n - 1);
        out.std_dev = std::sqrt(var);
        out.std_error = out.std_dev / std::sqrt(static_cast<double>(n));
    }
    return out;
}

}  // namespace storval
