#include "cspin/oracle_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "cspin/engine.hpp"
#include "cspin/observables.hpp"
#include "cspin/universe.hpp"

namespace cspin {

namespace {

std::string fmt(double x) {
    std::ostringstream out;
    out.precision(3);
    out << std::scientific << x;
    return out.str();
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

ModelParams random_params(std::mt19937_64& rng, std::size_t n, double beta) {
    std::vector<double> h(n);
    for (auto& x : h) {
        x = uniform(rng, 0.05, 1.0);
    }
    return ModelParams(uniform(rng, -0.6, 0.6), std::move(h), beta);
}

// Largest |u| or |weight| difference between two merged atom lists; +inf on
// a size mismatch.
double atom_set_difference(const ProjectionDistribution& a, const ProjectionDistribution& b) {
    const auto ma = merge_by_u(a);
    const auto mb = merge_by_u(b);
    if (ma.atoms.size() != mb.atoms.size()) {
        return std::numeric_limits<double>::infinity();
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < ma.atoms.size(); ++i) {
        worst = std::max({worst, std::abs(ma.atoms[i].u - mb.atoms[i].u),
                          std::abs(ma.atoms[i].weight - mb.atoms[i].weight)});
    }
    return worst;
}

}  // namespace

std::vector<CheckResult> run_oracle_check(std::uint64_t seed) {
    std::vector<CheckResult> results;
    std::mt19937_64 rng(seed);
    const auto alphas = SystemAmplitudes::from_probability(0.4, 0.3);

    {
        double worst = 0.0;
        for (std::size_t n = 1; n <= 3; ++n) {
            for (double beta : {0.0, 0.5}) {
                const auto params = random_params(rng, n, beta);
                const auto ensemble = ThermalEnsemble::thermal(params);
                for (double t : {0.5, 5.0, 50.0}) {
                    const auto outcomes = trajectory_ensemble(params, alphas, ensemble, t);
                    worst = std::max(worst, reduced_density_check(outcomes, params, alphas,
                                                                  ensemble, t));
                }
            }
        }
        results.push_back({"density-matrix identity (N<=3)", worst <= 1e-9,
                           "max deviation " + fmt(worst)});
    }

    {
        double worst_u = 0.0;
        double worst_g = 0.0;
        const auto params = random_params(rng, 3, 0.5);
        const auto ensemble = ThermalEnsemble::thermal(params);
        const double t = 5.0;
        const auto outcomes = trajectory_ensemble(params, alphas, ensemble, t);
        const auto exact = enumerate_outcomes(params, alphas, t);
        for (const auto& o : outcomes) {
            const std::uint64_t mask = o.final_index ^ o.initial_index;
            const auto it = std::find_if(exact.atoms.begin(), exact.atoms.end(),
                                         [&](const OutcomeAtom& a) { return a.pattern == mask; });
            if (it == exact.atoms.end()) {
                worst_g = std::max(worst_g, o.weight);
                continue;
            }
            const double g = o.weight / ensemble.weights[o.initial_index];
            worst_g = std::max(worst_g, std::abs(g - it->weight));
            worst_u = std::max(worst_u, std::abs(std::norm(o.phi[0]) - it->u));
        }
        results.push_back({"enumeration == exact universe (N=3)",
                           worst_u <= 1e-9 && worst_g <= 1e-9,
                           "max |du| " + fmt(worst_u) + ", max |dg| " + fmt(worst_g)});
    }

    {
        double worst = 0.0;
        for (std::size_t n : {10, 16}) {
            const ModelParams params(0.0, std::vector<double>(n, 0.01));
            for (double t : {50.0, 150.0, 250.0}) {
                worst = std::max(worst, atom_set_difference(binomial_exact(params, alphas, t),
                                                            enumerate_outcomes(params, alphas, t)));
            }
        }
        results.push_back({"binomial == enumeration (N=10,16)", worst <= 1e-12,
                           "max atom difference " + fmt(worst)});
    }

    {
        const ModelParams params(0.0, std::vector<double>(10, 0.01));
        const ClassicalityError eps;
        const std::size_t count = 100000;
        bool ok = true;
        double worst_ks = 0.0;
        double worst_ratio = 0.0;
        for (double t : {20.0, 50.0, 100.0}) {
            const auto exact = enumerate_outcomes(params, alphas, t);
            const auto sampled = sample_outcomes(params, alphas, t, count, seed + 17);
            const auto pe = probabilities(exact, eps);
            const auto ps = probabilities(sampled, eps);
            const double p[3] = {pe.p_up, pe.p_down, pe.p_q};
            const double q[3] = {ps.p_up, ps.p_down, ps.p_q};
            for (int c = 0; c < 3; ++c) {
                const double bound = 3.0 * std::sqrt(p[c] * (1.0 - p[c]) / count);
                const double dev = std::abs(p[c] - q[c]);
                ok = ok && dev <= bound;
                if (bound > 0.0) {
                    worst_ratio = std::max(worst_ratio, dev / bound);
                }
            }
            worst_ks = std::max(worst_ks, ks_distance(exact, sampled));
        }
        ok = ok && worst_ks <= 0.01;
        results.push_back({"sampling == enumeration (N=10, 1e5 draws)", ok,
                           "worst deviation / 3-sigma " + fmt(worst_ratio) + ", KS " +
                               fmt(worst_ks)});
    }

    {
        const auto params = random_params(rng, 10, 0.0);
        const double t = 37.0;
        const SignificanceTable table(params, t);
        double pair = 0.0;
        for (Branch b : {Branch::up, Branch::down}) {
            for (const auto& f : table.branch(b)) {
                pair = std::max(pair, std::abs(f.keep + f.flip - 1.0));
            }
        }
        double full = 0.0;
        for (Branch b : {Branch::up, Branch::down}) {
            double sum = 0.0;
            for (std::uint64_t mask = 0; mask < (1u << 10); ++mask) {
                sum += std::exp(table.log_significance(b, FlipPattern::from_mask(mask, 10)));
            }
            full = std::max(full, std::abs(sum - 1.0));
        }
        results.push_back({"sum rules (N=10)", pair <= 1e-12 && full <= 1e-9,
                           "pair " + fmt(pair) + ", full " + fmt(full)});
    }

    {
        const ModelParams cold(0.0, std::vector<double>(12, 0.01), 0.0);
        const ModelParams hot = cold.with_beta(1.0);
        const double t = 75.0;
        const bool same =
            enumerate_outcomes(cold, alphas, t) == enumerate_outcomes(hot, alphas, t) &&
            binomial_exact(cold, alphas, t) == binomial_exact(hot, alphas, t) &&
            sample_outcomes(cold, alphas, t, 20000, seed) ==
                sample_outcomes(hot, alphas, t, 20000, seed);
        results.push_back({"beta independence (bitwise)", same, same ? "identical" : "differs"});
    }

    {
        const ModelParams params(0.0, dispersed_couplings(0.01, 0.02, 40));
        const auto one = sample_outcomes(params, alphas, 60.0, 50000, seed, 1);
        const auto four = sample_outcomes(params, alphas, 60.0, 50000, seed, 4);
        const bool same = one == four;
        results.push_back({"worker-count independence", same, same ? "identical" : "differs"});
    }

    return results;
}

}  // namespace cspin
