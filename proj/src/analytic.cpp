#include "cspin/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cspin {

AnalyticState zero_h_solution(const SystemAmplitudes& alphas, double energy, double t) {
    alphas.validate();
    return {{alphas.up * std::polar(1.0, -t * energy), alphas.down * std::polar(1.0, t * energy)},
            1.0};
}

bool satisfies(const ModelParams& params, AnalyticKind kind) {
    const auto h = params.couplings();
    switch (kind) {
        case AnalyticKind::zero_h_zero_T:
            return params.mu() != 0.0 &&
                   std::all_of(h.begin(), h.end(), [](double x) { return x == 0.0; });
        case AnalyticKind::nu_zero_const_h:
            return params.nu() == 0.0 && params.constant_coupling();
    }
    return false;
}

double zero_h_energy(const ModelParams& params) {
    if (!satisfies(params, AnalyticKind::zero_h_zero_T)) {
        throw std::invalid_argument("zero_h_energy: requires all h_j = 0 and mu != 0");
    }
    // Ground state has s_j = -sign(mu) for every spin.
    const double spin_sum = -std::copysign(static_cast<double>(params.env_size()), params.mu());
    return params.nu() * spin_sum;
}

AnalyticState zero_h_solution(const ModelParams& params, const SystemAmplitudes& alphas,
                              double t) {
    return zero_h_solution(alphas, zero_h_energy(params), params.elapsed(t));
}

std::vector<AnalyticState> nu_zero_solution(const SystemAmplitudes& alphas, double mu, double h,
                                            double t, std::size_t n_env, double node_tol) {
    alphas.validate();
    if (n_env < 1) {
        throw std::invalid_argument("nu_zero_solution: environment size must be >= 1");
    }
    const double omega = std::hypot(mu, h);
    if (omega == 0.0 || std::abs(std::sin(omega * t)) <= node_tol) {
        return {{{alphas.up, alphas.down}, 1.0}};
    }
    return {{{alphas.up, alphas.down}, 0.5}, {{alphas.up, -alphas.down}, 0.5}};
}

std::vector<AnalyticState> nu_zero_solution(const ModelParams& params,
                                            const SystemAmplitudes& alphas, double t) {
    if (!satisfies(params, AnalyticKind::nu_zero_const_h)) {
        throw std::invalid_argument("nu_zero_solution: requires nu = 0 and constant h");
    }
    return nu_zero_solution(alphas, params.mu(), params.coupling(0), params.elapsed(t),
                            params.env_size());
}

}  // namespace cspin
