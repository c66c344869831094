// observables.hpp: Classical/quantum classification and time series of
// (P_up, P_down, P_q).

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cspin/engine.hpp"
#include "cspin/model.hpp"

namespace cspin {

inline constexpr double kDefaultEpsilon = 1e-3;

// Closeness threshold for counting u as classical; 0 < epsilon < 0.5.
class ClassicalityError {
public:
    explicit ClassicalityError(double epsilon = kDefaultEpsilon);
    double value() const noexcept { return epsilon_; }

private:
    double epsilon_;
};

enum class Classification : std::uint8_t { down, up, quantum };

const char* to_string(Classification c) noexcept;

// down if u <= eps, up if u >= 1 - eps, otherwise quantum (closed intervals).
Classification classify(double u, ClassicalityError eps);

struct ClassProbabilities {
    double p_up = 0.0;
    double p_down = 0.0;
    double p_q = 0.0;
};

// Weighted mass per class. Mass is normalized by the distribution's total so
// that dropped sub-1e-300 atoms do not leak into p_q.
ClassProbabilities probabilities(const ProjectionDistribution& dist, ClassicalityError eps);

enum class Method : std::uint8_t { automatic, exact, binomial, sampled, exact_universe };

const char* to_string(Method m) noexcept;
Method parse_method(const std::string& name);

// automatic -> exact for N <= 16, binomial for constant h, sampled otherwise.
Method resolve_method(const ModelParams& params, Method requested);

struct SamplingBudget {
    std::size_t count = 100000;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
};

// Distribution at one time with the selected engine. Sampled runs use
// stream_seed(budget.seed, point_index) as their seed.
ProjectionDistribution distribution_at(const ModelParams& params,
                                       const SystemAmplitudes& alphas, double t, Method method,
                                       const SamplingBudget& budget,
                                       std::uint64_t point_index = 0);

// t_i = start + (i + 1/2) (end - start) / steps, i = 0..steps-1.
std::vector<double> offset_grid(double start, double end, std::size_t steps);

struct NodePerturbation {
    std::size_t index;
    double requested;
    double used;
};

struct ObservableSeries {
    std::vector<double> times;
    std::vector<double> p_up;
    std::vector<double> p_down;
    std::vector<double> p_q;
    double epsilon = kDefaultEpsilon;
    Method method = Method::exact;
    std::optional<ModelParams> params;
    std::size_t dropped_atoms = 0;
    std::vector<NodePerturbation> perturbations;

    std::size_t size() const noexcept { return times.size(); }
};

// Failure of an engine at a specific grid time.
class SeriesError : public std::runtime_error {
public:
    SeriesError(double t, const std::string& what);
    double time() const noexcept { return time_; }

private:
    double time_;
};

// Per-point probabilities. A DegenerateNodeError at t is retried at the next
// representable double above t (up to 64 times) and recorded in perturbations.
// Grid points are evaluated in parallel with budget.workers threads except for
// the sampled method, which parallelizes inside each point.
ObservableSeries time_series(const ModelParams& params, const SystemAmplitudes& alphas,
                             const std::vector<double>& grid, ClassicalityError eps,
                             Method method, const SamplingBudget& budget = {});

// {m pi / omega_down : m = 1..m_max} for constant h. For dispersed h, the
// per-spin node times m pi / omega_down_j are returned sorted (diagnostic).
std::vector<double> resurrection_times(const ModelParams& params, std::size_t m_max);

// First grid time with p_q below threshold (operational collapse time).
std::optional<double> collapse_time(const ObservableSeries& series, double threshold = 0.01);

// 200 uniform bins over (0, 1) plus point masses at exactly 0 and 1.
struct ProjectionHistogram {
    static constexpr std::size_t kBins = 200;
    double at_zero = 0.0;
    double at_one = 0.0;
    std::vector<double> bins = std::vector<double>(kBins, 0.0);

    double total() const noexcept;
};

ProjectionHistogram histogram(const ProjectionDistribution& dist);

// sup_u |F_a(u) - F_b(u)| between two u-distributions; u values closer than
// tol are treated as equal so rounding-level differences between engines do
// not register as CDF jumps.
double ks_distance(const ProjectionDistribution& a, const ProjectionDistribution& b,
                   double tol = kMergeTolerance);

}  // namespace cspin
