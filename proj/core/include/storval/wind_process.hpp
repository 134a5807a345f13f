#ifndef STORVAL_WIND_PROCESS_HPP
#define STORVAL_WIND_PROCESS_HPP

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "storval/marginal.hpp"
#include "storval/random.hpp"

namespace storval {

// One realization xi_0..xi_{N-1} of the supply process, in [0, 1].
struct SamplePath {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t k) const { return values[k]; }
    std::span<const double> view() const { return values; }
};

// Row-major matrix of historical (or synthetic) supply traces.
// Every row is one path of length `columns`; entries lie in [0, 1].
class TraceMatrix {
public:
    TraceMatrix() = default;
    TraceMatrix(std::size_t rows, std::size_t columns, std::vector<double> data);
    static TraceMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t columns() const { return columns_; }
    std::span<const double> row(std::size_t i) const;
    double at(std::size_t i, std::size_t k) const { return data_[i * columns_ + k]; }
    std::span<const double> data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t columns_ = 0;
    std::vector<double> data_;
};

struct IidProcess {
    Marginal marginal;
};

struct NonstationaryProcess {
    std::vector<Marginal> marginals;  // one per period
};

struct EmpiricalProcess {
    TraceMatrix traces;
};

enum class ProcessKind { iid, nonstationary, empirical };

// Generative model of the supply process: per-period CDFs Phi_k, the
// time-averaged CDF F, its inf-quantile and reproducible path sampling.
class WindProcessSpec {
public:
    using Model = std::variant<IidProcess, NonstationaryProcess, EmpiricalProcess>;

    static WindProcessSpec iid(std::size_t horizon, Marginal marginal);
    static WindProcessSpec nonstationary(std::vector<Marginal> marginals);
    // Requires >= 2 rows; horizon is the column count.
    static WindProcessSpec empirical(TraceMatrix traces);

    std::size_t horizon() const { return horizon_; }
    ProcessKind kind() const;
    const Model& model() const { return model_; }

    // Parametric kinds have continuous marginals; empirical data can tie.
    bool absolutely_continuous() const { return kind() != ProcessKind::empirical; }

    // Phi_k(x). Throws InvalidArgument for k >= horizon.
    double cdf(std::size_t k, double x) const;

    // F(x) = (1/N) sum_k Phi_k(x).
    double time_avg_cdf(double x) const;

    // inf{x : F(x) >= gamma} for gamma in (0, 1]. Parametric kinds bisect on
    // [0, 1] down to adjacent doubles and return the upper end, so
    // F(q) >= gamma always holds; the empirical kind returns a pooled order
    // statistic.
    double quantile(double gamma) const;

    // Deterministic in (seed, path_index); safe to call concurrently.
    SamplePath sample_path(Seed seed, std::uint64_t path_index) const;

private:
    WindProcessSpec(std::size_t horizon, Model model);

    std::size_t horizon_;
    Model model_;
    std::vector<double> pooled_sorted_;  // empirical kind only
};

// Fixed set of sample paths reused across evaluations (common random numbers).
class PathSet {
public:
    PathSet(std::size_t count, std::size_t horizon, std::vector<double> data, Seed seed);

    // Paths 0..count-1 of `spec` under `seed`, sampled in parallel.
    static PathSet sample(const WindProcessSpec& spec, std::size_t count, Seed seed);

    std::size_t size() const { return count_; }
    std::size_t horizon() const { return horizon_; }
    Seed seed() const { return seed_; }
    std::span<const double> path(std::size_t i) const;
    std::span<const double> data() const { return data_; }

private:
    std::size_t count_;
    std::size_t horizon_;
    std::vector<double> data_;
    Seed seed_;
};

}  // namespace storval

#endif  // STORVAL_WIND_PROCESS_HPP
