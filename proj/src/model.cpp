#include "cspin/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cspin {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct BranchField {
    double a;  // sz coefficient
    double b;  // sx coefficient
};

BranchField branch_field(const ModelParams& params, Branch branch, std::size_t j) {
    const double h = params.coupling(j);
    if (branch == Branch::up) {
        return {1.0, h};
    }
    return {params.delta(), -h};
}

double safe_log(double x) {
    return x > 0.0 ? std::log(x) : kNegInf;
}

}  // namespace

const char* to_string(Branch b) noexcept {
    return b == Branch::up ? "up" : "down";
}

ModelParams::ModelParams(double delta, std::vector<double> couplings, double beta, double t0)
    : delta_(delta), couplings_(std::move(couplings)), beta_(beta), t0_(t0) {
    if (couplings_.empty()) {
        throw std::invalid_argument("ModelParams: environment size must be >= 1");
    }
    if (!std::isfinite(delta_)) {
        throw std::invalid_argument("ModelParams: delta must be finite");
    }
    if (!std::isfinite(beta_) || beta_ < 0.0) {
        throw std::invalid_argument("ModelParams: beta must be finite and >= 0");
    }
    if (!std::isfinite(t0_)) {
        throw std::invalid_argument("ModelParams: t0 must be finite");
    }
    for (std::size_t j = 0; j < couplings_.size(); ++j) {
        if (!std::isfinite(couplings_[j])) {
            throw std::invalid_argument("ModelParams: coupling h_" + std::to_string(j + 1) +
                                        " is not finite");
        }
    }
}

double ModelParams::coupling(std::size_t j) const {
    if (j >= couplings_.size()) {
        throw std::out_of_range("ModelParams: spin index " + std::to_string(j) +
                                " out of range for N=" + std::to_string(couplings_.size()));
    }
    return couplings_[j];
}

bool ModelParams::constant_coupling() const noexcept {
    return std::all_of(couplings_.begin(), couplings_.end(),
                       [&](double h) { return h == couplings_.front(); });
}

ModelParams ModelParams::with_beta(double beta) const {
    return ModelParams(delta_, couplings_, beta, t0_);
}

ModelParams ModelParams::with_delta(double delta) const {
    return ModelParams(delta, couplings_, beta_, t0_);
}

double ModelParams::elapsed(double t) const {
    if (!(t >= t0_)) {
        throw std::invalid_argument("time " + std::to_string(t) + " precedes t0 = " +
                                    std::to_string(t0_));
    }
    return t - t0_;
}

std::vector<double> dispersed_couplings(double h, double dh, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = h + static_cast<double>(j) * dh / static_cast<double>(n);
    }
    return out;
}

SystemAmplitudes SystemAmplitudes::from_probability(double p_up, double phase) {
    if (!(p_up >= 0.0 && p_up <= 1.0)) {
        throw std::invalid_argument("SystemAmplitudes: |alpha_up|^2 must lie in [0, 1]");
    }
    return {complex(std::sqrt(p_up), 0.0), std::polar(std::sqrt(1.0 - p_up), phase)};
}

void SystemAmplitudes::validate() const {
    const double norm = std::norm(up) + std::norm(down);
    if (!(std::abs(norm - 1.0) <= 1e-12)) {
        throw std::invalid_argument("SystemAmplitudes: not normalized (|a_up|^2+|a_down|^2 = " +
                                    std::to_string(norm) + ")");
    }
}

SpinSpectral spin_spectral(const ModelParams& params, Branch branch, std::size_t j) {
    const auto [a, b] = branch_field(params, branch, j);
    const double omega = std::hypot(a, b);
    if (omega == 0.0) {
        return {branch, 0.0, 1.0, 0.0};
    }
    const double w2 = omega * omega;
    return {branch, omega, (a * a) / w2, (b * b) / w2};
}

complex spin_amplitude(const ModelParams& params, Branch branch, std::size_t j, double t,
                       int spin, bool flipped) {
    if (spin != 1 && spin != -1) {
        throw std::invalid_argument("spin_amplitude: spin must be +1 or -1");
    }
    const double tau = params.elapsed(t);
    const auto [a, b] = branch_field(params, branch, j);
    const double omega = std::hypot(a, b);
    if (omega == 0.0) {
        return flipped ? complex(0.0, 0.0) : complex(1.0, 0.0);
    }
    const double s = std::sin(omega * tau);
    const double c = std::cos(omega * tau);
    // exp(-i tau (a sz + b sx)) = cos(w tau) I - i sin(w tau) (a sz + b sx) / w
    if (flipped) {
        return {0.0, -s * b / omega};
    }
    return {c, -s * a * static_cast<double>(spin) / omega};
}

SpinSignificance spin_significance(const ModelParams& params, Branch branch, std::size_t j,
                                   double t) {
    const double tau = params.elapsed(t);
    const SpinSpectral sp = spin_spectral(params, branch, j);
    if (sp.omega == 0.0) {
        return {1.0, 0.0, 0.0, kNegInf};
    }
    const double s = std::sin(sp.omega * tau);
    const double c = std::cos(sp.omega * tau);
    const double s2 = s * s;
    SpinSignificance out{};
    out.keep = c * c + sp.ratio * s2;
    out.flip = sp.transverse * s2;
    out.log_keep = safe_log(out.keep);
    out.log_flip = safe_log(out.flip);
    return out;
}

FlipPattern::FlipPattern(std::vector<std::int8_t> d) : d_(std::move(d)) {
    for (auto v : d_) {
        if (v != 1 && v != -1) {
            throw std::invalid_argument("FlipPattern: entries must be +1 or -1");
        }
    }
}

FlipPattern FlipPattern::from_mask(std::uint64_t mask, std::size_t n) {
    if (n > 64) {
        throw std::invalid_argument("FlipPattern::from_mask: N > 64");
    }
    std::vector<std::int8_t> d(n, 1);
    for (std::size_t j = 0; j < n; ++j) {
        if ((mask >> (n - 1 - j)) & 1u) {
            d[j] = -1;
        }
    }
    return FlipPattern(std::move(d));
}

FlipPattern FlipPattern::none(std::size_t n) {
    return FlipPattern(std::vector<std::int8_t>(n, 1));
}

std::size_t FlipPattern::flip_count() const noexcept {
    return static_cast<std::size_t>(std::count(d_.begin(), d_.end(), std::int8_t{-1}));
}

std::uint64_t FlipPattern::mask() const {
    const std::size_t n = d_.size();
    if (n > 64) {
        throw std::logic_error("FlipPattern::mask: N > 64");
    }
    std::uint64_t m = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (d_[j] < 0) {
            m |= std::uint64_t{1} << (n - 1 - j);
        }
    }
    return m;
}

SignificanceTable::SignificanceTable(const ModelParams& params, double t) {
    const std::size_t n = params.env_size();
    up_.reserve(n);
    down_.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        up_.push_back(spin_significance(params, Branch::up, j, t));
        down_.push_back(spin_significance(params, Branch::down, j, t));
    }
}

double SignificanceTable::log_significance(Branch b, const FlipPattern& pattern) const {
    const auto factors = branch(b);
    if (pattern.size() != factors.size()) {
        throw std::invalid_argument("log_significance: pattern length " +
                                    std::to_string(pattern.size()) + " != N = " +
                                    std::to_string(factors.size()));
    }
    double acc = 0.0;
    const auto d = pattern.values();
    for (std::size_t j = 0; j < factors.size(); ++j) {
        const double term = d[j] < 0 ? factors[j].log_flip : factors[j].log_keep;
        if (term == kNegInf) {
            return kNegInf;
        }
        acc += term;
    }
    return acc;
}

double log_significance(const ModelParams& params, Branch branch, double t,
                        const FlipPattern& pattern) {
    return SignificanceTable(params, t).log_significance(branch, pattern);
}

}  // namespace cspin
