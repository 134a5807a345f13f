#ifndef STORVAL_STORAGE_HPP
#define STORVAL_STORAGE_HPP

#include <span>
#include <vector>

#include "storval/wind_process.hpp"

namespace storval {

// Storage type theta = (b, r) with loss parameters. Energy is in units of
// nameplate-normalized MWh; inputs u > 0 extract, u < 0 inject.
struct StorageType {
    double capacity = 0.0;  // b
    double rate = 0.0;      // r, per-period |u| limit
    double leakage = 1.0;   // lambda, fraction of stored energy kept per period
    double eta_in = 1.0;
    double eta_out = 1.0;

    static StorageType ideal(double capacity, double rate) { return {capacity, rate, 1.0, 1.0, 1.0}; }

    // Throws InvalidArgument unless b, r >= 0 and the loss factors are in (0, 1].
    void validate() const;
    bool is_ideal() const { return leakage == 1.0 && eta_in == 1.0 && eta_out == 1.0; }
    // rho = lambda * eta_in * eta_out
    double roundtrip() const { return leakage * eta_in * eta_out; }
};

struct InputInterval {
    double lower = 0.0;  // most negative input (largest injection)
    double upper = 0.0;  // largest extraction
    bool contains(double u) const { return u >= lower && u <= upper; }
};

// Inputs that keep the next state in [0, b] and respect |u| <= r.
// Ideal storage: [-min(b - z, r), min(z, r)].
InputInterval feasible_input(const StorageType& theta, double z);

// z' = lambda z - u^+ / eta_out + eta_in (-u)^+, clamped to [0, b] so that
// rounding never leaves the state space. Reduces to z - u for ideal storage.
// Throws PreconditionError if z is outside [0, b] or u is infeasible.
double step(const StorageType& theta, double z, double u);

// Myopic threshold rule: discharge toward a deficit, charge away a surplus,
// clipped by stored energy, headroom and rate. For ideal storage
//   u = min{x - xi, z, r}         if xi <= x
//   u = -min{xi - x, b - z, r}    if xi > x.
// For lossy storage the state terms become lambda*eta_out*z and
// (b - lambda z)/eta_in; this greedy extension is a heuristic, not a proven
// optimum.
double threshold_policy(double contract, const StorageType& theta, double z, double xi);

struct Trajectory {
    std::vector<double> states;  // z_0..z_N, z_0 = 0
    std::vector<double> inputs;  // u_0..u_{N-1}
};

Trajectory simulate_policy(double contract, const StorageType& theta,
                           std::span<const double> path);

// Closed-form input sequence for ideal storage of capacity epsilon when
// epsilon <= min{r, min_k |xi_k - x|}: charge epsilon on an initial surplus,
// then discharge epsilon right after each strict downcrossing and charge
// epsilon right after each strict upcrossing. Throws PreconditionError if
// epsilon is too large or some xi_k equals x.
std::vector<double> small_capacity_inputs(double contract, double epsilon,
                                          std::span<const double> path, double rate);

}  // namespace storval

#endif  // STORVAL_STORAGE_HPP
