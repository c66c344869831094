#include "cspin/universe.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cspin {

namespace {

void check_cap(const ModelParams& params, std::size_t cap) {
    if (params.env_size() > cap) {
        throw std::invalid_argument("exact universe: N = " + std::to_string(params.env_size()) +
                                    " exceeds cap " + std::to_string(cap));
    }
}

int env_spin(std::uint64_t env_index, std::size_t n, std::size_t j) {
    return ((env_index >> (n - 1 - j)) & 1u) ? -1 : 1;
}

double env_energy(const ModelParams& params, std::uint64_t env_index) {
    const std::size_t n = params.env_size();
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        total += env_spin(env_index, n, j);
    }
    return params.mu() * total;
}

Eigen::VectorXcd initial_universe(std::size_t n, std::uint64_t env_index,
                                  const SystemAmplitudes& alphas) {
    const std::size_t dim = std::size_t{2} << n;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    psi(static_cast<Eigen::Index>(env_index)) = alphas.up;
    psi(static_cast<Eigen::Index>((std::uint64_t{1} << n) | env_index)) = alphas.down;
    return psi;
}

void check_ensemble(const ModelParams& params, const ThermalEnsemble& ensemble) {
    if (ensemble.weights.size() != (std::size_t{1} << params.env_size())) {
        throw std::invalid_argument("ensemble size " + std::to_string(ensemble.weights.size()) +
                                    " does not match 2^N");
    }
}

}  // namespace

EnvBasisState EnvBasisState::from_index(const ModelParams& params, std::uint64_t index) {
    const std::size_t n = params.env_size();
    if (n < 64 && index >= (std::uint64_t{1} << n)) {
        throw std::out_of_range("EnvBasisState: index out of range");
    }
    EnvBasisState st{std::vector<int>(n), env_energy(params, index)};
    for (std::size_t j = 0; j < n; ++j) {
        st.spins[j] = env_spin(index, n, j);
    }
    return st;
}

std::uint64_t EnvBasisState::index() const {
    const std::size_t n = spins.size();
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (spins[j] < 0) {
            idx |= std::uint64_t{1} << (n - 1 - j);
        }
    }
    return idx;
}

ThermalEnsemble ThermalEnsemble::thermal(const ModelParams& params, std::size_t cap) {
    check_cap(params, cap);
    const std::size_t count = std::size_t{1} << params.env_size();
    std::vector<double> log_w(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
        log_w[idx] = -params.beta() * env_energy(params, idx);
    }
    const double peak = *std::max_element(log_w.begin(), log_w.end());
    double sum = 0.0;
    for (double lw : log_w) {
        sum += std::exp(lw - peak);
    }
    const double log_z = peak + std::log(sum);
    ThermalEnsemble out{std::vector<double>(count), log_z};
    for (std::size_t idx = 0; idx < count; ++idx) {
        out.weights[idx] = std::exp(log_w[idx] - log_z);
    }
    return out;
}

ThermalEnsemble ThermalEnsemble::ground_state(const ModelParams& params, std::size_t cap) {
    check_cap(params, cap);
    if (params.mu() == 0.0) {
        throw std::invalid_argument("ground_state: mu = 0 leaves the environment degenerate");
    }
    const std::size_t n = params.env_size();
    // mu > 0 favours s_j = -1 (all bits set); mu < 0 favours s_j = +1.
    const std::uint64_t gs = params.mu() > 0.0 ? (std::uint64_t{1} << n) - 1 : 0;
    return pure(n, gs);
}

ThermalEnsemble ThermalEnsemble::pure(std::size_t n_env, std::uint64_t index) {
    const std::size_t count = std::size_t{1} << n_env;
    if (index >= count) {
        throw std::out_of_range("ThermalEnsemble::pure: index out of range");
    }
    ThermalEnsemble out{std::vector<double>(count, 0.0), 0.0};
    out.weights[index] = 1.0;
    return out;
}

double phase_distance(const SystemState& a, const SystemState& b) {
    const complex overlap = std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
    return 1.0 - std::abs(overlap);
}

Eigen::MatrixXcd build_hamiltonian(const ModelParams& params, std::size_t cap) {
    check_cap(params, cap);
    const std::size_t n = params.env_size();
    const std::size_t dim = std::size_t{2} << n;
    const double mu = params.mu();
    const double nu = params.nu();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        const double sz_sys = ((i >> n) & 1u) ? -1.0 : 1.0;
        const auto row = static_cast<Eigen::Index>(i);
        double diag = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double s = env_spin(i & ((std::uint64_t{1} << n) - 1), n, j);
            diag += mu * s + sz_sys * nu * s;
            const auto col = static_cast<Eigen::Index>(i ^ (std::uint64_t{1} << (n - 1 - j)));
            h(row, col) += sz_sys * params.coupling(j);
        }
        h(row, row) += diag;
    }
    return h;
}

UniversePropagator::UniversePropagator(const ModelParams& params, std::size_t cap)
    : params_(params) {
    const Eigen::MatrixXcd h = build_hamiltonian(params, cap);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("UniversePropagator: eigendecomposition failed");
    }
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
}

Eigen::VectorXcd UniversePropagator::evolve(const Eigen::VectorXcd& psi, double t) const {
    const double tau = params_.elapsed(t);
    Eigen::VectorXcd coeff = vectors_.adjoint() * psi;
    for (Eigen::Index k = 0; k < coeff.size(); ++k) {
        coeff(k) *= std::polar(1.0, -tau * energies_(k));
    }
    return vectors_ * coeff;
}

std::vector<TrajectoryOutcome> UniversePropagator::outcomes(const SystemAmplitudes& alphas,
                                                            const ThermalEnsemble& ensemble,
                                                            double t) const {
    alphas.validate();
    check_ensemble(params_, ensemble);
    const std::size_t n = params_.env_size();
    const std::uint64_t count = std::uint64_t{1} << n;
    std::vector<TrajectoryOutcome> out;
    for (std::uint64_t initial = 0; initial < count; ++initial) {
        const double f = ensemble.weights[initial];
        if (!(f > 0.0)) {
            continue;
        }
        const Eigen::VectorXcd psi = evolve(initial_universe(n, initial, alphas), t);
        for (std::uint64_t final = 0; final < count; ++final) {
            const complex up = psi(static_cast<Eigen::Index>(final));
            const complex down = psi(static_cast<Eigen::Index>(count | final));
            const double g = std::norm(up) + std::norm(down);
            TrajectoryOutcome o{{complex{}, complex{}}, f * g, final, initial};
            if (g > 0.0) {
                const double inv = 1.0 / std::sqrt(g);
                o.phi = {up * inv, down * inv};
            }
            out.push_back(o);
        }
    }
    return out;
}

std::vector<TrajectoryOutcome> trajectory_ensemble(const ModelParams& params,
                                                   const SystemAmplitudes& alphas,
                                                   const ThermalEnsemble& ensemble, double t,
                                                   std::size_t cap) {
    return UniversePropagator(params, cap).outcomes(alphas, ensemble, t);
}

double reduced_density_check(const std::vector<TrajectoryOutcome>& outcomes,
                             const ModelParams& params, const SystemAmplitudes& alphas,
                             const ThermalEnsemble& ensemble, double t, std::size_t cap) {
    check_ensemble(params, ensemble);
    const std::size_t n = params.env_size();
    const std::uint64_t count = std::uint64_t{1} << n;

    Eigen::Matrix2cd mixture = Eigen::Matrix2cd::Zero();
    for (const auto& o : outcomes) {
        if (o.final_index >= count || o.initial_index >= count) {
            throw std::invalid_argument("reduced_density_check: outcome labels do not match N");
        }
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                mixture(a, b) += o.weight * o.phi[a] * std::conj(o.phi[b]);
            }
        }
    }

    const double tau = params.elapsed(t);
    const Eigen::MatrixXcd gen = complex(0.0, -tau) * build_hamiltonian(params, cap);
    const Eigen::MatrixXcd u = gen.exp();

    Eigen::Matrix2cd traced = Eigen::Matrix2cd::Zero();
    for (std::uint64_t initial = 0; initial < count; ++initial) {
        const double f = ensemble.weights[initial];
        if (f == 0.0) {
            continue;
        }
        const Eigen::VectorXcd psi = u * initial_universe(n, initial, alphas);
        for (std::uint64_t env = 0; env < count; ++env) {
            const complex c[2] = {psi(static_cast<Eigen::Index>(env)),
                                  psi(static_cast<Eigen::Index>(count | env))};
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    traced(a, b) += f * c[a] * std::conj(c[b]);
                }
            }
        }
    }
    return (traced - mixture).cwiseAbs().maxCoeff();
}

}  // namespace cspin
