#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "storval_cli/config.hpp"

namespace storval::cli {

enum ExitCode : int { kSuccess = 0, kUnexpected = 1, kConfigError = 2, kValidationFailure = 3 };

nlohmann::json cmd_contract(const RunConfig& config);
nlohmann::json cmd_marginal_value(const RunConfig& config);
nlohmann::json cmd_simulate(const RunConfig& config);
nlohmann::json cmd_supply_function(const RunConfig& config);
nlohmann::json cmd_size_storage(const RunConfig& config);
// result["passed"] tells whether every property check held.
nlohmann::json cmd_validate(const RunConfig& config);

// Full command line entry point; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace storval::cli
