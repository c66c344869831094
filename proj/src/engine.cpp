#include "cspin/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cspin/parallel.hpp"

namespace cspin {

namespace {

// Neumaier summation; merged groups can hold ~1e6 atoms.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) {
    return x > 0.0 ? std::log(x) : kNegInf;
}

// log(e^a + e^b) with -inf handled.
double log_add(double a, double b) {
    const double m = std::max(a, b);
    if (m == kNegInf) {
        return kNegInf;
    }
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// count * log_factor, with 0 * (-inf) taken as 0.
double scaled_log(std::size_t count, double log_factor) {
    if (count == 0) {
        return 0.0;
    }
    return static_cast<double>(count) * log_factor;
}

// Partial log-significance sums of a contiguous run of spins, indexed so that
// bit (len - 1 - k) of the index flips spin offset + k.
std::vector<double> half_sums(std::span<const SpinSignificance> factors, std::size_t offset,
                              std::size_t len) {
    std::vector<double> sums(std::size_t{1} << len);
    for (std::size_t idx = 0; idx < sums.size(); ++idx) {
        double acc = 0.0;
        for (std::size_t k = 0; k < len; ++k) {
            const auto& f = factors[offset + k];
            acc += ((idx >> (len - 1 - k)) & 1u) ? f.log_flip : f.log_keep;
        }
        sums[idx] = acc;
    }
    return sums;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

const char* to_string(DistributionKind k) noexcept {
    switch (k) {
        case DistributionKind::exact: return "exact";
        case DistributionKind::binomial: return "binomial";
        case DistributionKind::sampled: return "sampled";
        case DistributionKind::universe: return "exact-universe";
    }
    return "unknown";
}

double ProjectionDistribution::total_weight() const noexcept {
    CompensatedSum total;
    for (const auto& a : atoms) {
        total.add(a.weight);
    }
    return total.value();
}

ProjectionSplit split_from_logs(double log_up, double log_down) {
    if (log_up == kNegInf && log_down == kNegInf) {
        throw DegenerateNodeError("both branch significances vanish (g = 0)");
    }
    if (log_up == kNegInf) {
        return {0.0, 1.0};
    }
    if (log_down == kNegInf) {
        return {1.0, 0.0};
    }
    const double logit = log_down - log_up;
    return {1.0 / (1.0 + std::exp(logit)), 1.0 / (1.0 + std::exp(-logit))};
}

double u_of_pattern(const ModelParams& params, const SystemAmplitudes& alphas, double t,
                    const FlipPattern& pattern) {
    alphas.validate();
    const SignificanceTable table(params, t);
    const double lu = safe_log(alphas.p_up()) + table.log_significance(Branch::up, pattern);
    const double ld = safe_log(alphas.p_down()) + table.log_significance(Branch::down, pattern);
    return split_from_logs(lu, ld).u;
}

ProjectionDistribution enumerate_outcomes(const ModelParams& params,
                                          const SystemAmplitudes& alphas, double t,
                                          std::size_t cap) {
    alphas.validate();
    const std::size_t n = params.env_size();
    if (n > cap) {
        throw std::invalid_argument("enumerate_outcomes: N = " + std::to_string(n) +
                                    " exceeds cap " + std::to_string(cap));
    }
    const SignificanceTable table(params, t);
    const std::size_t hi_len = n / 2;
    const std::size_t lo_len = n - hi_len;
    const auto up_hi = half_sums(table.branch(Branch::up), 0, hi_len);
    const auto up_lo = half_sums(table.branch(Branch::up), hi_len, lo_len);
    const auto dn_hi = half_sums(table.branch(Branch::down), 0, hi_len);
    const auto dn_lo = half_sums(table.branch(Branch::down), hi_len, lo_len);
    const double la_up = safe_log(alphas.p_up());
    const double la_dn = safe_log(alphas.p_down());

    ProjectionDistribution dist;
    dist.kind = DistributionKind::exact;
    dist.env_size = n;
    for (std::size_t a = 0; a < up_hi.size(); ++a) {
        for (std::size_t b = 0; b < up_lo.size(); ++b) {
            const double lu = la_up + up_hi[a] + up_lo[b];
            const double ld = la_dn + dn_hi[a] + dn_lo[b];
            const double w = std::exp(log_add(lu, ld));
            if (!(w >= kDroppedWeight)) {
                ++dist.dropped;
                continue;
            }
            const std::uint64_t mask = (static_cast<std::uint64_t>(a) << lo_len) | b;
            dist.atoms.push_back({split_from_logs(lu, ld).u, w, mask});
        }
    }
    return dist;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(seed + (stream + 1) * 0x9E3779B97F4A7C15ull);
}

ProjectionDistribution sample_outcomes(const ModelParams& params,
                                       const SystemAmplitudes& alphas, double t,
                                       std::size_t count, std::uint64_t seed,
                                       std::size_t workers) {
    alphas.validate();
    if (count < 1) {
        throw std::invalid_argument("sample_outcomes: count must be >= 1");
    }
    const SignificanceTable table(params, t);
    const std::size_t n = params.env_size();
    const double p_up = alphas.p_up();
    const double la_up = safe_log(p_up);
    const double la_dn = safe_log(alphas.p_down());
    const double weight = 1.0 / static_cast<double>(count);
    const auto up = table.branch(Branch::up);
    const auto down = table.branch(Branch::down);

    ProjectionDistribution dist;
    dist.kind = DistributionKind::sampled;
    dist.sample_count = count;
    dist.seed = seed;
    dist.env_size = n;
    dist.atoms.resize(count);

    const std::size_t blocks = (count + kSampleBlock - 1) / kSampleBlock;
    detail::parallel_for(blocks, workers, [&](std::size_t block) {
        std::mt19937_64 rng(stream_seed(seed, block));
        const std::size_t begin = block * kSampleBlock;
        const std::size_t end = std::min(count, begin + kSampleBlock);
        for (std::size_t i = begin; i < end; ++i) {
            const auto drawn = unit_uniform(rng) < p_up ? up : down;
            double lu = la_up;
            double ld = la_dn;
            for (std::size_t j = 0; j < n; ++j) {
                if (unit_uniform(rng) < drawn[j].flip) {
                    lu += up[j].log_flip;
                    ld += down[j].log_flip;
                } else {
                    lu += up[j].log_keep;
                    ld += down[j].log_keep;
                }
            }
            dist.atoms[i] = {split_from_logs(lu, ld).u, weight, std::nullopt};
        }
    });
    return dist;
}

ProjectionDistribution binomial_exact(const ModelParams& params,
                                      const SystemAmplitudes& alphas, double t) {
    alphas.validate();
    if (!params.constant_coupling()) {
        throw std::invalid_argument("binomial_exact: couplings h_j are not all equal");
    }
    const std::size_t n = params.env_size();
    const SignificanceTable table(params, t);
    const SpinSignificance& up = table.at(Branch::up, 0);
    const SpinSignificance& dn = table.at(Branch::down, 0);
    const double la_up = safe_log(alphas.p_up());
    const double la_dn = safe_log(alphas.p_down());
    const double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);

    ProjectionDistribution raw;
    raw.kind = DistributionKind::binomial;
    raw.env_size = n;
    for (std::size_t k = 0; k <= n; ++k) {
        const double lu = la_up + scaled_log(n - k, up.log_keep) + scaled_log(k, up.log_flip);
        const double ld = la_dn + scaled_log(n - k, dn.log_keep) + scaled_log(k, dn.log_flip);
        const double log_choose = log_n_fact - std::lgamma(static_cast<double>(k) + 1.0) -
                                  std::lgamma(static_cast<double>(n - k) + 1.0);
        const double w = std::exp(log_choose + log_add(lu, ld));
        if (!(w >= kDroppedWeight)) {
            ++raw.dropped;
            continue;
        }
        raw.atoms.push_back({split_from_logs(lu, ld).u, w, std::nullopt});
    }
    ProjectionDistribution merged = merge_by_u(raw);
    merged.dropped = raw.dropped;
    return merged;
}

SystemState wavefunction_of_pattern(const ModelParams& params, const SystemAmplitudes& alphas,
                                    double t, std::span<const int> initial_spins,
                                    const FlipPattern& pattern) {
    alphas.validate();
    const std::size_t n = params.env_size();
    if (initial_spins.size() != n || pattern.size() != n) {
        throw std::invalid_argument("wavefunction_of_pattern: spins/pattern length must be N");
    }
    double log_w[2] = {safe_log(alphas.p_up()), safe_log(alphas.p_down())};
    double phase[2] = {std::arg(alphas.up), std::arg(alphas.down)};
    const Branch branches[2] = {Branch::up, Branch::down};
    for (int s = 0; s < 2; ++s) {
        for (std::size_t j = 0; j < n; ++j) {
            const complex g = spin_amplitude(params, branches[s], j, t, initial_spins[j],
                                             pattern.flipped(j));
            log_w[s] += safe_log(std::norm(g));
            phase[s] += std::arg(g);
        }
    }
    const ProjectionSplit split = split_from_logs(log_w[0], log_w[1]);
    return {std::polar(std::sqrt(split.u), phase[0]),
            std::polar(std::sqrt(split.complement), phase[1])};
}

ProjectionDistribution merge_by_u(const ProjectionDistribution& dist, double tol) {
    std::vector<OutcomeAtom> sorted = dist.atoms;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const OutcomeAtom& a, const OutcomeAtom& b) { return a.u < b.u; });
    ProjectionDistribution out = dist;
    out.atoms.clear();
    CompensatedSum group;
    for (const auto& atom : sorted) {
        if (!out.atoms.empty() && atom.u - out.atoms.back().u <= tol) {
            group.add(atom.weight);
        } else {
            if (!out.atoms.empty()) {
                out.atoms.back().weight = group.value();
            }
            out.atoms.push_back({atom.u, atom.weight, std::nullopt});
            group = CompensatedSum{};
            group.add(atom.weight);
        }
    }
    if (!out.atoms.empty()) {
        out.atoms.back().weight = group.value();
    }
    return out;
}

ProjectionDistribution universe_distribution(const std::vector<TrajectoryOutcome>& outcomes,
                                             std::size_t env_size) {
    ProjectionDistribution dist;
    dist.kind = DistributionKind::universe;
    dist.env_size = env_size;
    for (const auto& o : outcomes) {
        if (o.weight > 0.0) {
            dist.atoms.push_back({std::norm(o.phi[0]), o.weight, std::nullopt});
        }
    }
    return dist;
}

}  // namespace cspin
