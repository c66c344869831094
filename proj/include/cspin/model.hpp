// model.hpp: Central spin model parameters and per-spin significance algebra.
//
// One spin-1/2 system couples to N environment spins through
//   H = mu * sum_j sz_j + sz_S * sum_j (h_j sx_j + nu sz_j),
// with energy measured in units of mu + nu = 1. Conditioned on the system
// branch S, environment spin j evolves under a_S sz + b_S sx with
//   up:   a = mu + nu = 1,  b = +h_j
//   down: a = mu - nu = d,  b = -h_j
// so every quantity below reduces to a 2x2 problem per spin.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace cspin {

using complex = std::complex<double>;

enum class Branch : std::uint8_t { up, down };

const char* to_string(Branch b) noexcept;

// Immutable description of the central-spin universe.
//   delta    = mu - nu (mu + nu = 1 is fixed by the unit of energy)
//   couplings = h_1 .. h_N (0-based in code: couplings()[j] is h_{j+1})
//   beta     = inverse temperature of the initial environment ensemble
//   t0       = time at which the system state is prepared
class ModelParams {
public:
    ModelParams(double delta, std::vector<double> couplings, double beta = 0.0, double t0 = 0.0);

    double delta() const noexcept { return delta_; }
    double mu() const noexcept { return 0.5 * (1.0 + delta_); }
    double nu() const noexcept { return 0.5 * (1.0 - delta_); }
    double beta() const noexcept { return beta_; }
    double t0() const noexcept { return t0_; }
    std::size_t env_size() const noexcept { return couplings_.size(); }
    std::span<const double> couplings() const noexcept { return couplings_; }
    double coupling(std::size_t j) const;

    // True when every h_j is bitwise equal (binomial reduction applies).
    bool constant_coupling() const noexcept;

    ModelParams with_beta(double beta) const;
    ModelParams with_delta(double delta) const;

    // Elapsed time t - t0; throws std::invalid_argument for t < t0.
    double elapsed(double t) const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;

private:
    double delta_;
    std::vector<double> couplings_;
    double beta_;
    double t0_;
};

// h_j = h + (j-1) * dh / N for j = 1..N.
std::vector<double> dispersed_couplings(double h, double dh, std::size_t n);

struct SystemAmplitudes {
    complex up;
    complex down;

    // |up|^2 = p_up, relative phase applied to the down component.
    static SystemAmplitudes from_probability(double p_up, double phase = 0.0);

    double p_up() const noexcept { return std::norm(up); }
    double p_down() const noexcept { return std::norm(down); }
    // Throws std::invalid_argument unless |up|^2 + |down|^2 = 1 within 1e-12.
    void validate() const;
};

// Frequency and longitudinal ratio of one environment spin on one branch.
// ratio * omega^2 == a^2. For omega == 0 (d = h_j = 0 on the down branch)
// the evolution is the identity and ratio is reported as 1.
struct SpinSpectral {
    Branch branch;
    double omega;
    double ratio;
    // 1 - ratio evaluated as b^2 / omega^2, free of cancellation.
    double transverse;
};

SpinSpectral spin_spectral(const ModelParams& params, Branch branch, std::size_t j);

// Exact <s'_j| exp(-i tau (a sz + b sx)) |s_j> with tau = t - t0.
// spin is the initial s_j in {+1, -1}; flipped means s'_j = -s_j.
complex spin_amplitude(const ModelParams& params, Branch branch, std::size_t j, double t,
                       int spin, bool flipped);

// Modulus-squared factors of one spin at one time, computed without complex
// arithmetic. flip + keep == 1 up to rounding.
struct SpinSignificance {
    double keep;      // |G_j|^2 for d_j = +1
    double flip;      // |G_j|^2 for d_j = -1
    double log_keep;  // -inf when keep == 0
    double log_flip;  // -inf when flip == 0
};

SpinSignificance spin_significance(const ModelParams& params, Branch branch, std::size_t j,
                                   double t);

// d_j = s_j * s'_j for every environment spin; +1 means not flipped.
class FlipPattern {
public:
    explicit FlipPattern(std::vector<std::int8_t> d);

    // Spin j (0-based) is flipped iff bit (N-1-j) of mask is set, matching the
    // environment basis ordering of the exact-universe module.
    static FlipPattern from_mask(std::uint64_t mask, std::size_t n);
    static FlipPattern none(std::size_t n);

    std::size_t size() const noexcept { return d_.size(); }
    std::span<const std::int8_t> values() const noexcept { return d_; }
    bool flipped(std::size_t j) const { return d_.at(j) < 0; }
    std::size_t flip_count() const noexcept;
    std::uint64_t mask() const;

    friend bool operator==(const FlipPattern&, const FlipPattern&) = default;

private:
    std::vector<std::int8_t> d_;
};

// Per-branch table of spin significances at one time. Shared by every
// engine that evaluates many patterns at the same t.
class SignificanceTable {
public:
    SignificanceTable(const ModelParams& params, double t);

    std::size_t env_size() const noexcept { return up_.size(); }
    const SpinSignificance& at(Branch b, std::size_t j) const {
        return b == Branch::up ? up_.at(j) : down_.at(j);
    }
    std::span<const SpinSignificance> branch(Branch b) const noexcept {
        return b == Branch::up ? std::span<const SpinSignificance>(up_)
                               : std::span<const SpinSignificance>(down_);
    }

    // Sum over j of the log factor selected by the pattern.
    double log_significance(Branch b, const FlipPattern& pattern) const;

private:
    std::vector<SpinSignificance> up_;
    std::vector<SpinSignificance> down_;
};

// Natural log of |G^S_{n',n}|^2 = prod_j |G^S_j|^2; -inf when any factor is 0.
double log_significance(const ModelParams& params, Branch branch, double t,
                        const FlipPattern& pattern);

}  // namespace cspin
