// universe.hpp: Brute-force system + environment propagation for small N.
//
// Basis ordering of the 2^(N+1)-dimensional universe space:
//   index = (system_bit << N) | env_index
//   system_bit 0 = |up>, 1 = |down>
//   environment spin j (1-based) lives at bit N-j of env_index; bit 0 = s_j = +1
// so for N = 1 the order is |up,+>, |up,->, |down,+>, |down,->.
//
// Memory: the dense complex Hamiltonian and its eigenvectors take
// 2 * 16 * 4^(N+1) bytes, i.e. ~2 GiB at the default cap N = 12.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "cspin/model.hpp"

namespace cspin {

inline constexpr std::size_t kDefaultUniverseCap = 12;

struct EnvBasisState {
    std::vector<int> spins;  // s_1 .. s_N
    double energy;           // mu * sum_j s_j

    static EnvBasisState from_index(const ModelParams& params, std::uint64_t index);
    std::uint64_t index() const;
};

// Weights f_n over the 2^N product basis states.
struct ThermalEnsemble {
    std::vector<double> weights;
    double log_partition;  // log Z; 0 for non-thermal ensembles

    // f_n = exp(-beta E_n) / Z.
    static ThermalEnsemble thermal(const ModelParams& params,
                                   std::size_t cap = kDefaultUniverseCap);
    // Unit weight on the ground state of mu * sum sz_j; requires mu != 0.
    static ThermalEnsemble ground_state(const ModelParams& params,
                                        std::size_t cap = kDefaultUniverseCap);
    // Unit weight on a single basis state.
    static ThermalEnsemble pure(std::size_t n_env, std::uint64_t index);
};

using SystemState = std::array<complex, 2>;

struct TrajectoryOutcome {
    SystemState phi;  // zero vector when weight == 0
    double weight;
    std::uint64_t final_index;    // n'
    std::uint64_t initial_index;  // n
};

// 1 - |<a|b>| for normalized states; insensitive to global phase.
double phase_distance(const SystemState& a, const SystemState& b);

Eigen::MatrixXcd build_hamiltonian(const ModelParams& params,
                                   std::size_t cap = kDefaultUniverseCap);

// Eigendecomposition of H, reusable across many t.
class UniversePropagator {
public:
    explicit UniversePropagator(const ModelParams& params,
                                std::size_t cap = kDefaultUniverseCap);

    const ModelParams& params() const noexcept { return params_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(energies_.size()); }

    // exp(-i (t - t0) H) applied to a universe vector.
    Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi, double t) const;

    // Outcomes for every initial n with f_n > 0 and every final n'.
    std::vector<TrajectoryOutcome> outcomes(const SystemAmplitudes& alphas,
                                            const ThermalEnsemble& ensemble, double t) const;

private:
    ModelParams params_;
    Eigen::VectorXd energies_;
    Eigen::MatrixXcd vectors_;
};

std::vector<TrajectoryOutcome> trajectory_ensemble(const ModelParams& params,
                                                   const SystemAmplitudes& alphas,
                                                   const ThermalEnsemble& ensemble, double t,
                                                   std::size_t cap = kDefaultUniverseCap);

// Max elementwise |Tr_E rho(t) - sum P |phi><phi||. rho(t) is propagated with a
// matrix exponential of the full Hamiltonian, independent of the
// eigendecomposition used to produce the outcomes.
double reduced_density_check(const std::vector<TrajectoryOutcome>& outcomes,
                             const ModelParams& params, const SystemAmplitudes& alphas,
                             const ThermalEnsemble& ensemble, double t,
                             std::size_t cap = kDefaultUniverseCap);

}  // namespace cspin
