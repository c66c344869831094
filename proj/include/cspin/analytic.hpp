// analytic.hpp: Closed-form special cases with no wave-function collapse.

#pragma once

#include <cstddef>
#include <vector>

#include "cspin/model.hpp"
#include "cspin/universe.hpp"

namespace cspin {

enum class AnalyticKind { zero_h_zero_T, nu_zero_const_h };

struct AnalyticState {
    SystemState phi;
    double probability;
};

// All h_j = 0 with the environment in its ground state: a single trajectory
//   a_up e^{-i tau E} |up> + a_down e^{+i tau E} |down>,  tau = t - t0,
// with probability 1.
AnalyticState zero_h_solution(const SystemAmplitudes& alphas, double energy, double t);

// Splitting energy that makes zero_h_solution exact up to a global phase:
// nu * sum_j s_j over the ground state of mu * sum sz_j. Equal to the
// environment ground-state energy when mu = nu (delta = 0).
// Throws std::invalid_argument unless every h_j is 0 and mu != 0.
double zero_h_energy(const ModelParams& params);

// Overload that checks the preconditions on params and evaluates at t.
AnalyticState zero_h_solution(const ModelParams& params, const SystemAmplitudes& alphas,
                              double t);

// nu = 0 with constant h, in the N -> infinity limit. At recovery times
// t = m pi / sqrt(mu^2 + h^2) (|sin| below node_tol) the initial state has
// probability 1; otherwise a_up|up> + a_down|down> and a_up|up> - a_down|down>
// each have probability 1/2. t is measured from t0 = 0. n_env only documents
// the environment size the limit is applied to and must be >= 1.
std::vector<AnalyticState> nu_zero_solution(const SystemAmplitudes& alphas, double mu, double h,
                                            double t, std::size_t n_env,
                                            double node_tol = 1e-12);

// Validates params for nu_zero_solution (nu == 0 and constant h) and forwards.
std::vector<AnalyticState> nu_zero_solution(const ModelParams& params,
                                            const SystemAmplitudes& alphas, double t);

// Which special case (if any) params satisfy.
bool satisfies(const ModelParams& params, AnalyticKind kind);

}  // namespace cspin
