#include "cspin/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cspin/parallel.hpp"
#include "cspin/universe.hpp"

namespace cspin {

namespace {

constexpr std::size_t kMaxNodeRetries = 64;
constexpr std::size_t kAutoExactCap = 16;

struct PointResult {
    ClassProbabilities probs;
    std::size_t dropped = 0;
    std::optional<NodePerturbation> perturbation;
};

}  // namespace

ClassicalityError::ClassicalityError(double epsilon) : epsilon_(epsilon) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw std::invalid_argument("epsilon must lie in (0, 0.5)");
    }
}

const char* to_string(Classification c) noexcept {
    switch (c) {
        case Classification::down: return "down";
        case Classification::up: return "up";
        case Classification::quantum: return "quantum";
    }
    return "unknown";
}

Classification classify(double u, ClassicalityError eps) {
    if (u <= eps.value()) {
        return Classification::down;
    }
    if (u >= 1.0 - eps.value()) {
        return Classification::up;
    }
    return Classification::quantum;
}

ClassProbabilities probabilities(const ProjectionDistribution& dist, ClassicalityError eps) {
    if (dist.atoms.empty()) {
        throw std::invalid_argument("probabilities: empty distribution");
    }
    double mass[3] = {0.0, 0.0, 0.0};
    for (const auto& atom : dist.atoms) {
        mass[static_cast<int>(classify(atom.u, eps))] += atom.weight;
    }
    const double total = mass[0] + mass[1] + mass[2];
    if (!(total > 0.0)) {
        throw std::invalid_argument("probabilities: distribution has no mass");
    }
    ClassProbabilities p;
    p.p_down = mass[static_cast<int>(Classification::down)] / total;
    p.p_up = mass[static_cast<int>(Classification::up)] / total;
    p.p_q = mass[static_cast<int>(Classification::quantum)] / total;
    return p;
}

const char* to_string(Method m) noexcept {
    switch (m) {
        case Method::automatic: return "auto";
        case Method::exact: return "exact";
        case Method::binomial: return "binomial";
        case Method::sampled: return "sampled";
        case Method::exact_universe: return "exact-universe";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    for (Method m : {Method::automatic, Method::exact, Method::binomial, Method::sampled,
                     Method::exact_universe}) {
        if (name == to_string(m)) {
            return m;
        }
    }
    throw std::invalid_argument("unknown method '" + name +
                                "' (expected auto, exact, binomial, sampled, exact-universe)");
}

Method resolve_method(const ModelParams& params, Method requested) {
    if (requested != Method::automatic) {
        return requested;
    }
    if (params.env_size() <= kAutoExactCap) {
        return Method::exact;
    }
    return params.constant_coupling() ? Method::binomial : Method::sampled;
}

ProjectionDistribution distribution_at(const ModelParams& params,
                                       const SystemAmplitudes& alphas, double t, Method method,
                                       const SamplingBudget& budget, std::uint64_t point_index) {
    switch (resolve_method(params, method)) {
        case Method::exact:
            return enumerate_outcomes(params, alphas, t);
        case Method::binomial:
            return binomial_exact(params, alphas, t);
        case Method::sampled:
            return sample_outcomes(params, alphas, t, budget.count,
                                   stream_seed(budget.seed, point_index), budget.workers);
        case Method::exact_universe: {
            const auto outcomes = trajectory_ensemble(
                params, alphas, ThermalEnsemble::thermal(params), t);
            return universe_distribution(outcomes, params.env_size());
        }
        case Method::automatic:
            break;
    }
    throw std::logic_error("distribution_at: unresolved method");
}

std::vector<double> offset_grid(double start, double end, std::size_t steps) {
    if (steps < 1) {
        throw std::invalid_argument("grid steps must be >= 1");
    }
    if (!(end > start)) {
        throw std::invalid_argument("grid end must exceed start");
    }
    std::vector<double> grid(steps);
    const double step = (end - start) / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        grid[i] = start + (static_cast<double>(i) + 0.5) * step;
    }
    return grid;
}

SeriesError::SeriesError(double t, const std::string& what)
    : std::runtime_error("at t = " + std::to_string(t) + ": " + what), time_(t) {}

ObservableSeries time_series(const ModelParams& params, const SystemAmplitudes& alphas,
                             const std::vector<double>& grid, ClassicalityError eps,
                             Method method, const SamplingBudget& budget) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("time_series: grid must be strictly increasing");
        }
    }
    const Method resolved = resolve_method(params, method);

    std::optional<UniversePropagator> propagator;
    std::optional<ThermalEnsemble> ensemble;
    if (resolved == Method::exact_universe) {
        propagator.emplace(params);
        ensemble = ThermalEnsemble::thermal(params);
    }

    auto evaluate = [&](double t, std::size_t index) {
        if (propagator) {
            return universe_distribution(propagator->outcomes(alphas, *ensemble, t),
                                         params.env_size());
        }
        SamplingBudget inner = budget;
        if (resolved != Method::sampled) {
            inner.workers = 1;
        }
        return distribution_at(params, alphas, t, resolved, inner, index);
    };

    std::vector<PointResult> results(grid.size());
    auto run_point = [&](std::size_t i) {
        const double requested = grid[i];
        double t = requested;
        for (std::size_t attempt = 0;; ++attempt) {
            try {
                const ProjectionDistribution dist = evaluate(t, i);
                results[i].probs = probabilities(dist, eps);
                results[i].dropped = dist.dropped;
                if (t != requested) {
                    results[i].perturbation = NodePerturbation{i, requested, t};
                }
                return;
            } catch (const DegenerateNodeError& e) {
                if (attempt + 1 >= kMaxNodeRetries) {
                    throw SeriesError(requested, e.what());
                }
                t = std::nextafter(t, std::numeric_limits<double>::infinity());
            } catch (const SeriesError&) {
                throw;
            } catch (const std::exception& e) {
                throw SeriesError(requested, e.what());
            }
        }
    };

    const std::size_t outer_workers = resolved == Method::sampled ? 1 : budget.workers;
    detail::parallel_for(grid.size(), outer_workers, run_point);

    ObservableSeries series;
    series.times = grid;
    series.epsilon = eps.value();
    series.method = resolved;
    series.params = params;
    series.p_up.reserve(grid.size());
    series.p_down.reserve(grid.size());
    series.p_q.reserve(grid.size());
    for (const auto& r : results) {
        series.p_up.push_back(r.probs.p_up);
        series.p_down.push_back(r.probs.p_down);
        series.p_q.push_back(r.probs.p_q);
        series.dropped_atoms += r.dropped;
        if (r.perturbation) {
            series.perturbations.push_back(*r.perturbation);
        }
    }
    return series;
}

std::vector<double> resurrection_times(const ModelParams& params, std::size_t m_max) {
    std::vector<double> out;
    if (m_max == 0) {
        return out;
    }
    const std::size_t spins = params.constant_coupling() ? 1 : params.env_size();
    for (std::size_t j = 0; j < spins; ++j) {
        const double omega = spin_spectral(params, Branch::down, j).omega;
        if (omega == 0.0) {
            continue;
        }
        for (std::size_t m = 1; m <= m_max; ++m) {
            out.push_back(params.t0() + static_cast<double>(m) * std::numbers::pi / omega);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<double> collapse_time(const ObservableSeries& series, double threshold) {
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.p_q[i] < threshold) {
            return series.times[i];
        }
    }
    return std::nullopt;
}

double ProjectionHistogram::total() const noexcept {
    double sum = at_zero + at_one;
    for (double b : bins) {
        sum += b;
    }
    return sum;
}

ProjectionHistogram histogram(const ProjectionDistribution& dist) {
    ProjectionHistogram h;
    for (const auto& atom : dist.atoms) {
        if (atom.u <= 0.0) {
            h.at_zero += atom.weight;
        } else if (atom.u >= 1.0) {
            h.at_one += atom.weight;
        } else {
            const auto bin = std::min<std::size_t>(
                ProjectionHistogram::kBins - 1,
                static_cast<std::size_t>(atom.u * static_cast<double>(ProjectionHistogram::kBins)));
            h.bins[bin] += atom.weight;
        }
    }
    return h;
}

double ks_distance(const ProjectionDistribution& a, const ProjectionDistribution& b,
                   double tol) {
    struct Step {
        double u;
        double delta;
    };
    std::vector<Step> steps;
    steps.reserve(a.atoms.size() + b.atoms.size());
    const double wa = a.total_weight();
    const double wb = b.total_weight();
    for (const auto& atom : a.atoms) {
        steps.push_back({atom.u, atom.weight / wa});
    }
    for (const auto& atom : b.atoms) {
        steps.push_back({atom.u, -atom.weight / wb});
    }
    std::sort(steps.begin(), steps.end(), [](const Step& x, const Step& y) { return x.u < y.u; });
    double diff = 0.0;
    double worst = 0.0;
    std::size_t i = 0;
    while (i < steps.size()) {
        // Atoms within tol of the group start count as the same u.
        const double group_start = steps[i].u;
        while (i < steps.size() && steps[i].u - group_start <= tol) {
            diff += steps[i].delta;
            ++i;
        }
        worst = std::max(worst, std::abs(diff));
    }
    return worst;
}

}  // namespace cspin
