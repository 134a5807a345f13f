#include "storval_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "storval/marginal.hpp"
#include "storval/trace_csv.hpp"

namespace storval::cli {

using nlohmann::json;

ConfigError::ConfigError(std::string field, const std::string& what)
    : InvalidArgument(field + ": " + what), field_(std::move(field)) {}

namespace {

std::string join(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

const json& require(const json& obj, const std::string& parent, const std::string& key) {
    if (!obj.is_object()) throw ConfigError(parent.empty() ? "<root>" : parent, "must be an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(join(parent, key), "missing required field");
    return *it;
}

const json* optional_field(const json& obj, const std::string& key) {
    const auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double as_number(const json& v, const std::string& field) {
    if (!v.is_number()) throw ConfigError(field, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(field, "must be finite");
    return d;
}

double number_or(const json& obj, const std::string& parent, const std::string& key, double fallback) {
    const json* v = optional_field(obj, key);
    return v ? as_number(*v, join(parent, key)) : fallback;
}

std::uint64_t as_count(const json& v, const std::string& field) {
    if (!v.is_number_integer() || (v.is_number_integer() && v.get<std::int64_t>() < 0 &&
                                    !v.is_number_unsigned()))
        throw ConfigError(field, "must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::uint64_t count_or(const json& obj, const std::string& parent, const std::string& key,
                       std::uint64_t fallback) {
    const json* v = optional_field(obj, key);
    return v ? as_count(*v, join(parent, key)) : fallback;
}

std::vector<double> number_list(const json& v, const std::string& field) {
    if (!v.is_array()) throw ConfigError(field, "must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(as_number(v[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

// Re-throws library validation errors with the config field attached.
template <class F>
auto with_field(const std::string& field, F&& make) -> decltype(make()) {
    try {
        return make();
    } catch (const ConfigError&) {
        throw;
    } catch (const AssumptionViolation& e) {
        throw ConfigError(field, e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(field, e.what());
    }
}

Marginal parse_marginal(const json& m, const std::string& field) {
    const json& fam = require(m, field, "family");
    if (!fam.is_string()) throw ConfigError(join(field, "family"), "must be a string");
    const std::string family = fam.get<std::string>();
    return with_field(field, [&] {
        if (family == "uniform")
            return Marginal::uniform(number_or(m, field, "lower", 0.0), number_or(m, field, "upper", 1.0));
        if (family == "beta")
            return Marginal::beta(as_number(require(m, field, "alpha"), join(field, "alpha")),
                                  as_number(require(m, field, "beta"), join(field, "beta")));
        if (family == "truncated_normal")
            return Marginal::truncated_normal(
                as_number(require(m, field, "mean"), join(field, "mean")),
                as_number(require(m, field, "sigma"), join(field, "sigma")));
        if (family == "piecewise_linear")
            return Marginal::piecewise_linear(
                number_list(require(m, field, "knots"), join(field, "knots")),
                number_list(require(m, field, "cdf"), join(field, "cdf")));
        throw ConfigError(join(field, "family"),
                          "unknown family '" + family +
                              "' (expected uniform, beta, truncated_normal or piecewise_linear)");
    });
}

WindProcessSpec parse_process(const json& p, std::size_t horizon,
                              const std::filesystem::path& base_dir) {
    const json& kind_v = require(p, "process", "kind");
    if (!kind_v.is_string()) throw ConfigError("process.kind", "must be a string");
    const std::string kind = kind_v.get<std::string>();

    const int given = (p.contains("marginal") ? 1 : 0) + (p.contains("marginals") ? 1 : 0) +
                      (p.contains("trace_file") ? 1 : 0);
    if (given != 1)
        throw ConfigError("process",
                          "exactly one of marginal, marginals or trace_file must be given");

    if (kind == "iid") {
        const Marginal m = parse_marginal(require(p, "process", "marginal"), "process.marginal");
        return with_field("horizon", [&] { return WindProcessSpec::iid(horizon, m); });
    }
    if (kind == "nonstationary") {
        const json& list = require(p, "process", "marginals");
        if (!list.is_array()) throw ConfigError("process.marginals", "must be an array");
        if (list.size() != horizon)
            throw ConfigError("process.marginals", "has " + std::to_string(list.size()) +
                                                       " entries but horizon is " +
                                                       std::to_string(horizon));
        std::vector<Marginal> ms;
        for (std::size_t k = 0; k < list.size(); ++k)
            ms.push_back(parse_marginal(list[k], "process.marginals[" + std::to_string(k) + "]"));
        return with_field("process.marginals",
                          [&] { return WindProcessSpec::nonstationary(std::move(ms)); });
    }
    if (kind == "empirical") {
        const json& file_v = require(p, "process", "trace_file");
        if (!file_v.is_string()) throw ConfigError("process.trace_file", "must be a string");
        std::filesystem::path file = file_v.get<std::string>();
        if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
        TraceMatrix traces = with_field("process.trace_file", [&] { return read_trace_csv(file); });
        if (traces.columns() != horizon)
            throw ConfigError("process.trace_file", "has " + std::to_string(traces.columns()) +
                                                        " columns but horizon is " +
                                                        std::to_string(horizon));
        return with_field("process.trace_file",
                          [&] { return WindProcessSpec::empirical(std::move(traces)); });
    }
    throw ConfigError("process.kind",
                      "unknown kind '" + kind + "' (expected iid, nonstationary or empirical)");
}

}  // namespace

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) throw ConfigError("<root>", "config must be a JSON object");

    const std::uint64_t horizon = as_count(require(doc, "", "horizon"), "horizon");
    if (horizon == 0) throw ConfigError("horizon", "must be >= 1");

    const json& pj = require(doc, "", "prices");
    MarketPrices prices{as_number(require(pj, "prices", "p"), "prices.p"),
                        as_number(require(pj, "prices", "m_alpha"), "prices.m_alpha"),
                        as_number(require(pj, "prices", "m_beta"), "prices.m_beta")};
    with_field("prices", [&] { prices.validate(); });

    StorageType storage{0.0, 1.0, 1.0, 1.0, 1.0};
    if (const json* s = optional_field(doc, "storage")) {
        storage.capacity = number_or(*s, "storage", "b", storage.capacity);
        storage.rate = number_or(*s, "storage", "r", storage.rate);
        storage.leakage = number_or(*s, "storage", "lambda", storage.leakage);
        storage.eta_in = number_or(*s, "storage", "eta_in", storage.eta_in);
        storage.eta_out = number_or(*s, "storage", "eta_out", storage.eta_out);
    }
    with_field("storage", [&] { storage.validate(); });

    McSettings mc;
    if (const json* m = optional_field(doc, "mc")) {
        mc.paths = count_or(*m, "mc", "paths", mc.paths);
        mc.seed = count_or(*m, "mc", "seed", mc.seed);
        mc.tol = number_or(*m, "mc", "tol", mc.tol);
    }
    if (mc.paths < 2) throw ConfigError("mc.paths", "must be >= 2");
    if (!(mc.tol > 0.0)) throw ConfigError("mc.tol", "must be > 0");

    CommandOptions opt;
    if (const json* o = optional_field(doc, "options")) {
        const std::string f = "options";
        if (const json* v = optional_field(*o, "contract")) opt.contract = as_number(*v, "options.contract");
        opt.trajectories = count_or(*o, f, "trajectories", opt.trajectories);
        if (const json* v = optional_field(*o, "grid")) opt.grid = number_list(*v, "options.grid");
        if (const json* v = optional_field(*o, "closed_form")) {
            if (!v->is_boolean()) throw ConfigError("options.closed_form", "must be true or false");
            opt.closed_form = v->get<bool>();
        }
        if (const json* v = optional_field(*o, "validate_fd"))
            opt.validate_fd = as_number(*v, "options.validate_fd");
        opt.bootstrap_reps = count_or(*o, f, "bootstrap_reps", opt.bootstrap_reps);
        opt.c_b = number_or(*o, f, "c_b", opt.c_b);
        opt.c_r = number_or(*o, f, "c_r", opt.c_r);
        opt.b_max = number_or(*o, f, "b_max", opt.b_max);
        opt.r_max = number_or(*o, f, "r_max", opt.r_max);
        opt.size_tol = number_or(*o, f, "size_tol", opt.size_tol);
        opt.curve_points = count_or(*o, f, "curve_points", opt.curve_points);
        if (const json* v = optional_field(*o, "curve_csv")) {
            if (!v->is_string()) throw ConfigError("options.curve_csv", "must be a string");
            std::filesystem::path p = v->get<std::string>();
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            opt.curve_csv = p;
        }
    }
    if (opt.contract && !(*opt.contract >= 0.0 && *opt.contract <= 1.0))
        throw ConfigError("options.contract", "must lie in [0, 1]");
    if (opt.validate_fd && !(*opt.validate_fd > 0.0))
        throw ConfigError("options.validate_fd", "must be > 0");
    if (opt.curve_points < 2) throw ConfigError("options.curve_points", "must be >= 2");

    WindProcessSpec process = parse_process(require(doc, "", "process"), horizon, base_dir);
    return RunConfig{horizon, std::move(process), prices, storage, mc, opt};
}

RunConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("--config", "cannot open " + file.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc, file.parent_path());
}

}  // namespace storval::cli
