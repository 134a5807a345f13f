#include "storval/wind_process.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "storval/errors.hpp"
#include "storval/parallel.hpp"

namespace storval {

TraceMatrix::TraceMatrix(std::size_t rows, std::size_t columns, std::vector<double> data)
    : rows_(rows), columns_(columns), data_(std::move(data)) {
    if (data_.size() != rows_ * columns_)
        throw InvalidArgument("trace matrix data size does not match rows x columns");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        const double v = data_[i];
        if (!(v >= 0.0 && v <= 1.0))
            throw InvalidArgument("trace entry (" + std::to_string(i / columns_) + ", " +
                                  std::to_string(i % columns_) + ") outside [0, 1]");
    }
}

TraceMatrix TraceMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return TraceMatrix{};
    const std::size_t columns = rows.front().size();
    std::vector<double> data;
    data.reserve(rows.size() * columns);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != columns)
            throw InvalidArgument("ragged trace matrix: row " + std::to_string(i) + " has " +
                                  std::to_string(rows[i].size()) + " entries, expected " +
                                  std::to_string(columns));
        data.insert(data.end(), rows[i].begin(), rows[i].end());
    }
    return TraceMatrix(rows.size(), columns, std::move(data));
}

std::span<const double> TraceMatrix::row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * columns_, columns_);
}

WindProcessSpec::WindProcessSpec(std::size_t horizon, Model model)
    : horizon_(horizon), model_(std::move(model)) {
    if (horizon_ < 1) throw InvalidArgument("horizon must be >= 1");
    if (const auto* emp = std::get_if<EmpiricalProcess>(&model_)) {
        const auto all = emp->traces.data();
        pooled_sorted_.assign(all.begin(), all.end());
        std::sort(pooled_sorted_.begin(), pooled_sorted_.end());
    }
}

WindProcessSpec WindProcessSpec::iid(std::size_t horizon, Marginal marginal) {
    return WindProcessSpec(horizon, IidProcess{std::move(marginal)});
}

WindProcessSpec WindProcessSpec::nonstationary(std::vector<Marginal> marginals) {
    if (marginals.empty()) throw InvalidArgument("nonstationary process needs >= 1 marginal");
    const std::size_t n = marginals.size();
    return WindProcessSpec(n, NonstationaryProcess{std::move(marginals)});
}

WindProcessSpec WindProcessSpec::empirical(TraceMatrix traces) {
    if (traces.rows() < 2) throw InvalidArgument("empirical process needs >= 2 trace rows");
    if (traces.columns() < 1) throw InvalidArgument("empirical traces need >= 1 column");
    const std::size_t n = traces.columns();
    return WindProcessSpec(n, EmpiricalProcess{std::move(traces)});
}

ProcessKind WindProcessSpec::kind() const {
    switch (model_.index()) {
        case 0: return ProcessKind::iid;
        case 1: return ProcessKind::nonstationary;
        default: return ProcessKind::empirical;
    }
}

double WindProcessSpec::cdf(std::size_t k, double x) const {
    if (k >= horizon_)
        throw InvalidArgument("period index " + std::to_string(k) + " out of range for horizon " +
                              std::to_string(horizon_));
    if (x < 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    struct Visitor {
        std::size_t k;
        double x;
        double operator()(const IidProcess& p) const { return p.marginal.cdf(x); }
        double operator()(const NonstationaryProcess& p) const { return p.marginals[k].cdf(x); }
        double operator()(const EmpiricalProcess& p) const {
            std::size_t count = 0;
            for (std::size_t i = 0; i < p.traces.rows(); ++i)
                if (p.traces.at(i, k) <= x) ++count;
            return static_cast<double>(count) / static_cast<double>(p.traces.rows());
        }
    };
    return std::visit(Visitor{k, x}, model_);
}

double WindProcessSpec::time_avg_cdf(double x) const {
    if (x < 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    switch (kind()) {
        case ProcessKind::iid:
            return std::get<IidProcess>(model_).marginal.cdf(x);
        case ProcessKind::nonstationary: {
            const auto& ms = std::get<NonstationaryProcess>(model_).marginals;
            std::vector<double> values(ms.size());
            for (std::size_t k = 0; k < ms.size(); ++k) values[k] = ms[k].cdf(x);
            return std::min(1.0, pairwise_sum(values) / static_cast<double>(ms.size()));
        }
        case ProcessKind::empirical: {
            const auto it = std::upper_bound(pooled_sorted_.begin(), pooled_sorted_.end(), x);
            return static_cast<double>(it - pooled_sorted_.begin()) /
                   static_cast<double>(pooled_sorted_.size());
        }
    }
    return 0.0;
}

double WindProcessSpec::quantile(double gamma) const {
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw InvalidArgument("quantile level must lie in (0, 1], got " + std::to_string(gamma));

    if (kind() == ProcessKind::empirical) {
        // Smallest j with F(sorted[j]) = (j+1)/n >= gamma, using the same
        // floating-point division as time_avg_cdf.
        const std::size_t n = pooled_sorted_.size();
        const double dn = static_cast<double>(n);
        auto reaches = [&](std::size_t j) { return static_cast<double>(j + 1) / dn >= gamma; };
        std::size_t j = static_cast<std::size_t>(std::ceil(gamma * dn));
        j = std::min(j == 0 ? 0 : j - 1, n - 1);
        while (j > 0 && reaches(j - 1)) --j;
        while (j + 1 < n && !reaches(j)) ++j;
        return pooled_sorted_[j];
    }

    if (time_avg_cdf(0.0) >= gamma) return 0.0;
    double lo = 0.0;  // F(lo) < gamma
    double hi = 1.0;  // F(hi) >= gamma
    // Bisect until lo and hi are adjacent doubles, well inside 1e-12.
    for (;;) {
        const double mid = lo + 0.5 * (hi - lo);
        if (!(mid > lo && mid < hi)) break;
        if (time_avg_cdf(mid) >= gamma)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

SamplePath WindProcessSpec::sample_path(Seed seed, std::uint64_t path_index) const {
    auto rng = substream(seed, path_index);
    SamplePath path;
    struct Visitor {
        std::mt19937_64& rng;
        std::size_t horizon;
        std::vector<double>& out;
        void operator()(const IidProcess& p) const {
            out.resize(horizon);
            for (auto& v : out) v = p.marginal.sample(rng);
        }
        void operator()(const NonstationaryProcess& p) const {
            out.resize(horizon);
            for (std::size_t k = 0; k < horizon; ++k) out[k] = p.marginals[k].sample(rng);
        }
        void operator()(const EmpiricalProcess& p) const {
            std::uniform_int_distribution<std::size_t> pick(0, p.traces.rows() - 1);
            const auto row = p.traces.row(pick(rng));
            out.assign(row.begin(), row.end());
        }
    };
    std::visit(Visitor{rng, horizon_, path.values}, model_);
    return path;
}

PathSet::PathSet(std::size_t count, std::size_t horizon, std::vector<double> data, Seed seed)
    : count_(count), horizon_(horizon), data_(std::move(data)), seed_(seed) {
    if (data_.size() != count_ * horizon_)
        throw InvalidArgument("path set data size does not match count x horizon");
}

PathSet PathSet::sample(const WindProcessSpec& spec, std::size_t count, Seed seed) {
    const std::size_t n = spec.horizon();
    std::vector<double> data(count * n);
    parallel_for(count, [&](std::size_t i) {
        const SamplePath p = spec.sample_path(seed, i);
        std::copy(p.values.begin(), p.values.end(), data.begin() + static_cast<std::ptrdiff_t>(i * n));
    });
    return PathSet(count, n, std::move(data), seed);
}

std::span<const double> PathSet::path(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * horizon_, horizon_);
}

}  // namespace storval
