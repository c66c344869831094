// engine.hpp: Outcome distributions of the projection u = |<up|phi>|^2.
//
// For a flip pattern d the trajectory wave-function is
//   phi = (a_up G_up, a_down G_down) / sqrt(g),  g = |a_up|^2 W_up + |a_down|^2 W_down
// with W_S = |G_S|^2 = prod_j |G_S,j|^2 depending on d only. Summing
// P = f_n g over initial states n with fixed d leaves weight(d) = g(d), so
// the law of d is a two-component mixture of product Bernoulli laws:
//   with probability |a_up|^2   flip spin j independently w.p. |G_up,j|^2_flip
//   with probability |a_down|^2 flip spin j independently w.p. |G_down,j|^2_flip.
// sample_outcomes draws from exactly this mixture, so sampled, enumerated
// and binomial distributions describe the same law. None of them depends on
// the initial ensemble f_n or on beta.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cspin/model.hpp"
#include "cspin/universe.hpp"

namespace cspin {

inline constexpr std::size_t kEnumerationCap = 20;
inline constexpr double kDroppedWeight = 1e-300;
inline constexpr double kMergeTolerance = 1e-12;
inline constexpr std::size_t kSampleBlock = 4096;

enum class DistributionKind : std::uint8_t { exact, binomial, sampled, universe };

const char* to_string(DistributionKind k) noexcept;

struct OutcomeAtom {
    double u;
    double weight;
    std::optional<std::uint64_t> pattern;  // FlipPattern::mask(), enumeration only

    friend bool operator==(const OutcomeAtom&, const OutcomeAtom&) = default;
};

struct ProjectionDistribution {
    std::vector<OutcomeAtom> atoms;
    DistributionKind kind = DistributionKind::exact;
    std::size_t sample_count = 0;
    std::uint64_t seed = 0;
    std::size_t env_size = 0;
    std::size_t dropped = 0;  // atoms below kDroppedWeight left out

    double total_weight() const noexcept;

    friend bool operator==(const ProjectionDistribution&,
                           const ProjectionDistribution&) = default;
};

// Both branch significances vanish: g = 0 and phi is undefined. Only occurs
// on a measure-zero set of times.
class DegenerateNodeError : public std::runtime_error {
public:
    explicit DegenerateNodeError(const std::string& what) : std::runtime_error(what) {}
};

// u and 1 - u from log(|a_up|^2 W_up) and log(|a_down|^2 W_down), each computed
// without cancellation. Throws DegenerateNodeError when both logs are -inf.
struct ProjectionSplit {
    double u;
    double complement;
};
ProjectionSplit split_from_logs(double log_up, double log_down);

double u_of_pattern(const ModelParams& params, const SystemAmplitudes& alphas, double t,
                    const FlipPattern& pattern);

ProjectionDistribution enumerate_outcomes(const ModelParams& params,
                                          const SystemAmplitudes& alphas, double t,
                                          std::size_t cap = kEnumerationCap);

// Seed of RNG stream k derived from the user seed:
//   splitmix64(seed + (k + 1) * 0x9E3779B97F4A7C15)
// where splitmix64 is the standard finalizer (Steele, Lea, Flood 2014).
// Sample block k (samples [k * kSampleBlock, (k+1) * kSampleBlock)) always
// uses stream k, so results do not depend on the number of workers.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

ProjectionDistribution sample_outcomes(const ModelParams& params,
                                       const SystemAmplitudes& alphas, double t,
                                       std::size_t count, std::uint64_t seed,
                                       std::size_t workers = 1);

// Requires every h_j equal; atoms are indexed by flip count and merged by u.
ProjectionDistribution binomial_exact(const ModelParams& params,
                                      const SystemAmplitudes& alphas, double t);

// Normalized (a_up G_up, a_down G_down) / sqrt(g) with the complex
// significances; initial_spins are s_1..s_N in {+1, -1}.
SystemState wavefunction_of_pattern(const ModelParams& params, const SystemAmplitudes& alphas,
                                    double t, std::span<const int> initial_spins,
                                    const FlipPattern& pattern);

// Sort by u and merge atoms whose u lies within tol of the first atom of the
// current group. Patterns are discarded.
ProjectionDistribution merge_by_u(const ProjectionDistribution& dist,
                                  double tol = kMergeTolerance);

// u-atoms of the brute-force universe outcomes (zero-weight outcomes skipped).
ProjectionDistribution universe_distribution(const std::vector<TrajectoryOutcome>& outcomes,
                                             std::size_t env_size);

}  // namespace cspin
