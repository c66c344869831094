#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "cspin/model.hpp"
#include "oracles.hpp"

using namespace cspin;

namespace {

const double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("ModelParams derives mu and nu from delta") {
    const ModelParams p(0.2, {0.1, 0.3}, 0.5);
    CHECK(p.mu() == doctest::Approx(0.6));
    CHECK(p.nu() == doctest::Approx(0.4));
    CHECK(p.mu() + p.nu() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.env_size() == 2);
    CHECK_FALSE(p.constant_coupling());
    CHECK(ModelParams(0.0, {0.01, 0.01, 0.01}).constant_coupling());
}

TEST_CASE("ModelParams rejects invalid inputs") {
    CHECK_THROWS_AS(ModelParams(0.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(0.0, {0.1}, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(std::nan(""), {0.1}), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(0.0, {std::numeric_limits<double>::infinity()}),
                    std::invalid_argument);
    const ModelParams p(0.0, {0.1}, 0.0, 2.0);
    CHECK_THROWS_AS(p.elapsed(1.0), std::invalid_argument);
    CHECK(p.elapsed(3.5) == 1.5);
}

TEST_CASE("dispersed couplings follow h + (j-1) dh / N") {
    const auto h = dispersed_couplings(0.01, 0.02, 10);
    REQUIRE(h.size() == 10);
    CHECK(h[0] == 0.01);
    CHECK(h[9] == doctest::Approx(0.01 + 9 * 0.002).epsilon(1e-15));
}

TEST_CASE("system amplitudes validate normalization") {
    const auto a = SystemAmplitudes::from_probability(0.4, 1.0);
    CHECK(a.p_up() == doctest::Approx(0.4));
    CHECK(a.p_down() == doctest::Approx(0.6));
    CHECK_NOTHROW(a.validate());
    CHECK_THROWS_AS((SystemAmplitudes{{1.0, 0.0}, {0.1, 0.0}}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(SystemAmplitudes::from_probability(1.5), std::invalid_argument);
}

TEST_CASE("spin_spectral examples") {
    SUBCASE("delta = 0, h = 0.01, down") {
        const auto s = spin_spectral(ModelParams(0.0, {0.01}), Branch::down, 0);
        CHECK(s.omega == doctest::Approx(0.01).epsilon(1e-15));
        CHECK(s.ratio == 0.0);
    }
    SUBCASE("zero vertical coupling, up") {
        for (double delta : {-0.7, 0.0, 0.3}) {
            const auto s = spin_spectral(ModelParams(delta, {0.0}), Branch::up, 0);
            CHECK(s.omega == 1.0);
            CHECK(s.ratio == 1.0);
        }
    }
    SUBCASE("symmetric delta = h = 0.1, down") {
        const auto s = spin_spectral(ModelParams(0.1, {0.1}), Branch::down, 0);
        CHECK(s.omega == doctest::Approx(std::sqrt(0.02)).epsilon(1e-15));
        CHECK(s.ratio == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("ratio * omega^2 equals the squared longitudinal field") {
        const ModelParams p(0.37, {0.2, 1.3});
        for (std::size_t j = 0; j < 2; ++j) {
            const auto up = spin_spectral(p, Branch::up, j);
            const auto dn = spin_spectral(p, Branch::down, j);
            CHECK(up.ratio * up.omega * up.omega == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(dn.ratio * dn.omega * dn.omega == doctest::Approx(0.37 * 0.37).epsilon(1e-14));
            CHECK(up.ratio + up.transverse == doctest::Approx(1.0).epsilon(1e-15));
        }
    }
    SUBCASE("index out of range") {
        CHECK_THROWS_AS(spin_spectral(ModelParams(0.0, {0.1}), Branch::up, 1), std::out_of_range);
    }
}

TEST_CASE("spin_amplitude at t0 is the identity") {
    const ModelParams p(0.2, {0.4}, 0.0, 1.0);
    for (Branch b : {Branch::up, Branch::down}) {
        for (int s : {1, -1}) {
            CHECK(spin_amplitude(p, b, 0, 1.0, s, false) == complex(1.0, 0.0));
            CHECK(spin_amplitude(p, b, 0, 1.0, s, true) == complex(0.0, 0.0));
        }
    }
}

TEST_CASE("spin_amplitude with h = 0 on the up branch is a pure phase") {
    const ModelParams p(0.4, {0.0});
    for (double t : {0.3, 2.0, 17.5}) {
        const complex g = spin_amplitude(p, Branch::up, 0, t, 1, false);
        CHECK(std::abs(g - std::polar(1.0, -t)) < 1e-14);
    }
}

TEST_CASE("spin_amplitude matches frozen matrix-exponential values") {
    // delta = 0.3, h = 0.7, t = 2.5, from a 40-digit matrix exponential.
    const ModelParams p(0.3, {0.7});
    const complex down_keep_plus(-0.327018566577659602985622408307115370818,
                                 -0.3722607936885255095468945580831930303028);
    const complex down_flip_plus(0.0, 0.8686085186065595222760873021941170707065);
    const complex up_keep_plus(-0.9959568888605599695841793864842419643179,
                               -0.07359363998634024784678654972080201772961);
    const complex up_flip_plus(0.0, -0.05151554799043817349275058480456141241073);
    CHECK(std::abs(spin_amplitude(p, Branch::down, 0, 2.5, 1, false) - down_keep_plus) < 1e-13);
    CHECK(std::abs(spin_amplitude(p, Branch::down, 0, 2.5, -1, false) -
                   std::conj(down_keep_plus)) < 1e-13);
    CHECK(std::abs(spin_amplitude(p, Branch::down, 0, 2.5, 1, true) - down_flip_plus) < 1e-13);
    CHECK(std::abs(spin_amplitude(p, Branch::up, 0, 2.5, 1, false) - up_keep_plus) < 1e-13);
    CHECK(std::abs(spin_amplitude(p, Branch::up, 0, 2.5, 1, true) - up_flip_plus) < 1e-13);
}

TEST_CASE("spin_amplitude agrees with a 2x2 matrix exponential for random draws") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> coupling(-2.0, 2.0);
    std::uniform_real_distribution<double> time(0.0, 60.0);
    double worst = 0.0;
    double worst_modulus = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double delta = coupling(rng);
        const double h = coupling(rng);
        const double t = time(rng);
        const ModelParams p(delta, {h});
        for (Branch b : {Branch::up, Branch::down}) {
            const double a = b == Branch::up ? 1.0 : delta;
            const double bx = b == Branch::up ? h : -h;
            for (int s : {1, -1}) {
                for (bool flipped : {false, true}) {
                    const complex got = spin_amplitude(p, b, 0, t, s, flipped);
                    const complex want = oracle::spin_amplitude_expm(a, bx, t, s, flipped);
                    worst = std::max(worst, std::abs(got - want));
                }
            }
            const auto sig = spin_significance(p, b, 0, t);
            const auto naive = oracle::naive_factors(b == Branch::up, delta, h, t);
            worst_modulus = std::max({worst_modulus, std::abs(sig.keep - naive.keep),
                                      std::abs(sig.flip - naive.flip)});
            worst_modulus = std::max(
                worst_modulus,
                std::abs(std::norm(spin_amplitude(p, b, 0, t, 1, false)) - sig.keep));
            worst_modulus = std::max(
                worst_modulus, std::abs(std::norm(spin_amplitude(p, b, 0, t, 1, true)) - sig.flip));
        }
    }
    CHECK(worst < 1e-12);
    CHECK(worst_modulus < 1e-12);
}

TEST_CASE("per-spin sum rule holds to 1e-12") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst = 0.0;
    for (int trial = 0; trial < 2000; ++trial) {
        const ModelParams p(u(rng), {u(rng)});
        const double t = 50.0 * std::abs(u(rng));
        for (Branch b : {Branch::up, Branch::down}) {
            const auto s = spin_significance(p, b, 0, t);
            worst = std::max(worst, std::abs(s.keep + s.flip - 1.0));
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("zero frequency on the down branch keeps every spin") {
    const ModelParams p(0.0, {0.0});
    const auto s = spin_significance(p, Branch::down, 0, 10.0);
    CHECK(s.keep == 1.0);
    CHECK(s.flip == 0.0);
    CHECK(s.log_flip == kNegInf);
    CHECK(spin_amplitude(p, Branch::down, 0, 10.0, 1, false) == complex(1.0, 0.0));
}

TEST_CASE("FlipPattern mask convention") {
    const auto p = FlipPattern::from_mask(0b100, 3);
    CHECK(p.flipped(0));
    CHECK_FALSE(p.flipped(1));
    CHECK_FALSE(p.flipped(2));
    CHECK(p.mask() == 0b100);
    CHECK(p.flip_count() == 1);
    CHECK_THROWS_AS(FlipPattern({1, 0, -1}), std::invalid_argument);
    for (std::uint64_t m = 0; m < 64; ++m) {
        CHECK(FlipPattern::from_mask(m, 6).mask() == m);
    }
}

TEST_CASE("log_significance examples") {
    SUBCASE("no flips at t0 gives 0") {
        const ModelParams p(0.1, {0.2, 0.3, 0.4});
        CHECK(log_significance(p, Branch::up, 0.0, FlipPattern::none(3)) == 0.0);
        CHECK(log_significance(p, Branch::down, 0.0, FlipPattern::none(3)) == 0.0);
    }
    SUBCASE("any flip at t0 gives -inf") {
        const ModelParams p(0.1, {0.2, 0.3, 0.4});
        CHECK(log_significance(p, Branch::up, 0.0, FlipPattern({1, -1, 1})) == kNegInf);
        CHECK(log_significance(p, Branch::down, 0.0, FlipPattern({1, -1, 1})) == kNegInf);
    }
    SUBCASE("N = 3, delta = 0, h = 0.01, t = 100, pattern (+1, +1, -1)") {
        const ModelParams p(0.0, {0.01, 0.01, 0.01});
        const FlipPattern d({1, 1, -1});
        // 40-digit evaluation of 2 log(keep) + log(flip) on each branch.
        CHECK(log_significance(p, Branch::up, 100.0, d) ==
              doctest::Approx(-10.588610490062096131).epsilon(1e-12));
        CHECK(log_significance(p, Branch::down, 100.0, d) ==
              doctest::Approx(-2.8077133740822404056).epsilon(1e-12));
    }
    SUBCASE("length mismatch") {
        CHECK_THROWS_AS(log_significance(ModelParams(0.0, {0.1}), Branch::up, 1.0,
                                         FlipPattern::none(2)),
                        std::invalid_argument);
    }
}

TEST_CASE("log_significance matches the naive product and does not underflow at N = 80") {
    const std::vector<double> h = dispersed_couplings(0.01, 0.02, 8);
    const ModelParams p(0.05, h);
    for (double t : {3.0, 40.0, 222.0}) {
        for (std::uint64_t mask = 0; mask < 256; ++mask) {
            for (Branch b : {Branch::up, Branch::down}) {
                const double naive = oracle::naive_significance(b == Branch::up, 0.05, h, t, mask);
                const double got = log_significance(p, b, t, FlipPattern::from_mask(mask, 8));
                CHECK(std::exp(got) == doctest::Approx(naive).epsilon(1e-11));
            }
        }
    }
    const ModelParams big(0.0, std::vector<double>(80, 0.01));
    const FlipPattern all(std::vector<std::int8_t>(80, -1));
    const double lu = log_significance(big, Branch::up, 150.0, all);
    const auto one = spin_significance(big, Branch::up, 0, 150.0);
    CHECK(std::isfinite(lu));
    CHECK(lu < -745.0);  // exp(lu) underflows to 0 in linear arithmetic
    CHECK(lu == doctest::Approx(80.0 * one.log_flip).epsilon(1e-13));
}

TEST_CASE("full sum rule over all 2^N patterns") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t n : {1, 4, 8, 12}) {
        std::vector<double> h(n);
        for (auto& x : h) {
            x = u(rng);
        }
        const ModelParams p(u(rng) - 0.5, h);
        const SignificanceTable table(p, 13.0 + 40.0 * u(rng));
        for (Branch b : {Branch::up, Branch::down}) {
            double sum = 0.0;
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
                sum += std::exp(table.log_significance(b, FlipPattern::from_mask(mask, n)));
            }
            CHECK(std::abs(sum - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("log_significance is invariant under joint permutation of (h_j, d_j)") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> h(7);
    for (auto& x : h) {
        x = u(rng);
    }
    std::vector<std::int8_t> d{1, -1, -1, 1, 1, -1, 1};
    std::vector<std::size_t> perm(7);
    std::iota(perm.begin(), perm.end(), 0);
    const double t = 9.3;
    const double ref_up = log_significance(ModelParams(0.2, h), Branch::up, t, FlipPattern(d));
    const double ref_dn = log_significance(ModelParams(0.2, h), Branch::down, t, FlipPattern(d));
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<double> hp(7);
        std::vector<std::int8_t> dp(7);
        for (std::size_t j = 0; j < 7; ++j) {
            hp[j] = h[perm[j]];
            dp[j] = d[perm[j]];
        }
        const ModelParams pp(0.2, hp);
        CHECK(log_significance(pp, Branch::up, t, FlipPattern(dp)) ==
              doctest::Approx(ref_up).epsilon(1e-13));
        CHECK(log_significance(pp, Branch::down, t, FlipPattern(dp)) ==
              doctest::Approx(ref_dn).epsilon(1e-13));
    }
}
