#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "storval/errors.hpp"
#include "storval/random.hpp"
#include "storval/settlement.hpp"
#include "storval/storage.hpp"
#include "storval/wind_process.hpp"

namespace storval::cli {

// Invalid configuration; field() is the dotted path of the offending entry.
class ConfigError : public InvalidArgument {
public:
    ConfigError(std::string field, const std::string& what);
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct McSettings {
    std::size_t paths = 10000;
    Seed seed = 1;
    double tol = 1e-4;
};

struct CommandOptions {
    std::optional<double> contract;
    std::size_t trajectories = 10;
    std::vector<double> grid;
    bool closed_form = false;
    std::optional<double> validate_fd;
    std::size_t bootstrap_reps = 1000;
    double c_b = 0.0;
    double c_r = 0.0;
    double b_max = 1.0;
    double r_max = 1.0;
    double size_tol = 1e-3;
    std::size_t curve_points = 21;
    std::optional<std::filesystem::path> curve_csv;
};

struct RunConfig {
    std::size_t horizon = 0;
    WindProcessSpec process;
    MarketPrices prices;
    StorageType storage;
    McSettings mc;
    CommandOptions options;
};

RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& file);

}  // namespace storval::cli
