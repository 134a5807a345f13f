#include "storval/storage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "storval/errors.hpp"

namespace storval {

namespace {

// Avoids -0.0 leaking out of -min{...} when the minimum is zero.
double negate(double v) { return v == 0.0 ? 0.0 : -v; }

void require_state(const StorageType& theta, double z) {
    if (!(z >= 0.0 && z <= theta.capacity))
        throw PreconditionError("storage state " + std::to_string(z) + " outside [0, " +
                                std::to_string(theta.capacity) + "]");
}

}  // namespace

void StorageType::validate() const {
    auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
    if (!(capacity >= 0.0) || !std::isfinite(capacity))
        throw InvalidArgument("storage capacity b must be finite and >= 0");
    if (!(rate >= 0.0) || !std::isfinite(rate))
        throw InvalidArgument("storage rate r must be finite and >= 0");
    if (!in_unit(leakage)) throw InvalidArgument("storage lambda must lie in (0, 1]");
    if (!in_unit(eta_in)) throw InvalidArgument("storage eta_in must lie in (0, 1]");
    if (!in_unit(eta_out)) throw InvalidArgument("storage eta_out must lie in (0, 1]");
}

InputInterval feasible_input(const StorageType& theta, double z) {
    const double kept = theta.leakage * z;
    const double extract = std::min(theta.eta_out * kept, theta.rate);
    const double inject = std::min((theta.capacity - kept) / theta.eta_in, theta.rate);
    return {negate(std::max(inject, 0.0)), std::max(extract, 0.0)};
}

double step(const StorageType& theta, double z, double u) {
    require_state(theta, z);
    if (!feasible_input(theta, z).contains(u))
        throw PreconditionError("input " + std::to_string(u) + " infeasible at state " +
                                std::to_string(z));
    double next;
    if (u > 0.0)
        next = theta.leakage * z - u / theta.eta_out;
    else
        next = theta.leakage * z + theta.eta_in * (-u);
    return std::clamp(next, 0.0, theta.capacity);
}

double threshold_policy(double contract, const StorageType& theta, double z, double xi) {
    const InputInterval range = feasible_input(theta, z);
    if (xi <= contract) return std::min(contract - xi, range.upper);
    return negate(std::min(xi - contract, -range.lower));
}

Trajectory simulate_policy(double contract, const StorageType& theta,
                           std::span<const double> path) {
    Trajectory t;
    t.states.resize(path.size() + 1);
    t.inputs.resize(path.size());
    double z = 0.0;
    t.states[0] = z;
    for (std::size_t k = 0; k < path.size(); ++k) {
        const double u = threshold_policy(contract, theta, z, path[k]);
        z = step(theta, z, u);
        t.inputs[k] = u;
        t.states[k + 1] = z;
    }
    return t;
}

std::vector<double> small_capacity_inputs(double contract, double epsilon,
                                          std::span<const double> path, double rate) {
    if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
    if (epsilon > rate) throw PreconditionError("epsilon exceeds the rate limit");
    for (std::size_t k = 0; k < path.size(); ++k) {
        if (path[k] == contract)
            throw PreconditionError("supply equals the contract at period " + std::to_string(k));
        if (epsilon > std::abs(path[k] - contract))
            throw PreconditionError("epsilon exceeds |xi - x| at period " + std::to_string(k));
    }

    std::vector<double> u(path.size(), 0.0);
    if (path.empty()) return u;
    if (path[0] > contract) u[0] = -epsilon;
    for (std::size_t k = 1; k < path.size(); ++k) {
        const bool down = path[k - 1] > contract && contract > path[k];
        const bool up = path[k - 1] < contract && contract < path[k];
        if (down) u[k] = epsilon;
        if (up) u[k] = -epsilon;
    }
    return u;
}

}  // namespace storval
