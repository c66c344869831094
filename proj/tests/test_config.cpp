#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cspin/config.hpp"
#include "cspin/experiment.hpp"
#include "cspin/report.hpp"

using namespace cspin;

namespace {

std::string key_of(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "<none>";
}

}  // namespace

TEST_CASE("minimal config takes documented defaults") {
    const auto c = parse_config("N = 10\nh = 0.01\n# comment\nalpha_up_sq = 0.4\n");
    CHECK(c.n_env == 10);
    CHECK(c.h == 0.01);
    CHECK(c.delta == 0.0);
    CHECK(c.beta == 0.0);
    CHECK(c.epsilon == 1e-3);
    CHECK(c.t_start == 0.0);
    CHECK(c.t_end == 400.0);
    CHECK(c.steps == 600);
    CHECK(c.samples == 100000);
    CHECK(c.seed == 0);
    CHECK(c.method == Method::exact);  // auto resolved for N <= 16
    CHECK(c.format == OutputFormat::csv);
    CHECK(c.h_spec() == "h=0.01");
    CHECK(c.grid().size() == 600);
}

TEST_CASE("dispersion expands to per-spin couplings") {
    const auto c = parse_config("N = 4\nh = 0.01\ndelta_h = 0.02\nalpha_up_sq = 0.4\n");
    const auto m = c.model();
    CHECK(m.coupling(0) == doctest::Approx(0.01));
    CHECK(m.coupling(3) == doctest::Approx(0.01 + 3 * 0.02 / 4));
    CHECK(c.h_spec() == "h=0.01;dh=0.02");
    const auto big = parse_config("N = 40\nh = 0.01\ndelta_h = 0.02\nalpha_up_sq = 0.4\n");
    CHECK(big.method == Method::sampled);
    const auto list = parse_config("N = 2\ncouplings = 0.1, 0.3\nalpha_up_sq = 0.5\n");
    CHECK(list.model().coupling(1) == 0.3);
    CHECK(list.h_spec() == "list=0.1;0.3");
}

TEST_CASE("t_start defaults to t0") {
    const auto c = parse_config("N = 2\nh = 0.1\nalpha_up_sq = 0.4\nt0 = 5\nt_end = 20\n");
    CHECK(c.t_start == 5.0);
    CHECK(c.grid().front() > 5.0);
}

TEST_CASE("validation errors name the offending key") {
    CHECK(key_of("N = 10\nh = 0.01\nalpha_up_sq = 1.5\n") == "alpha_up_sq");
    CHECK(key_of("N = 10\nh = 0.01\nalpha_up_sq = 0.4\ncolour = red\n") == "colour");
    CHECK(key_of("N = 10\nh = 0.01\n") == "alpha_up_sq");
    CHECK(key_of("h = 0.01\nalpha_up_sq = 0.4\n") == "N");
    CHECK(key_of("N = 10\nalpha_up_sq = 0.4\n") == "h");
    CHECK(key_of("N = 10\nN = 11\nh = 0.01\nalpha_up_sq = 0.4\n") == "N");
    CHECK(key_of("N = 10\nh = 0.01x\nalpha_up_sq = 0.4\n") == "h");
    CHECK(key_of("N = 10\nh = 0.01\nalpha_up_sq = 0.4\nepsilon = 0.5\n") == "epsilon");
    CHECK(key_of("N = 10\nh = 0.01\nalpha_up_sq = 0.4\nbeta = -1\n") == "beta");
    CHECK(key_of("N = 10\nh = 0.01\nalpha_up_sq = 0.4\nmethod = fast\n") == "method");
    CHECK(key_of("N = 10\nh = 0.01\nalpha_up_sq = 0.4\nsteps = 0\n") == "steps");
    CHECK(key_of("N = 2\ncouplings = 0.1\nalpha_up_sq = 0.4\n") == "couplings");
    CHECK(key_of("N = 10\nh = 0.01\nalpha_up_sq = 0.4\nt0 = 5\nt_start = 1\n") == "t_start");
    CHECK(key_of("N = 21\nh = 0.01\nalpha_up_sq = 0.4\nmethod = exact\n") == "method");
    CHECK(key_of("N = 13\nh = 0.01\nalpha_up_sq = 0.4\nmethod = exact-universe\n") == "method");
    CHECK(key_of("N = 4\nh = 0.01\ndelta_h = 0.1\nalpha_up_sq = 0.4\nmethod = binomial\n") ==
          "method");
}

TEST_CASE("serialize and JSON round trips") {
    const auto c = parse_config(
        "N = 3\nh = 0.07\ndelta_h = 0.011\ndelta = -0.13\nbeta = 0.3\nalpha_up_sq = 0.37\n"
        "alpha_phase = 1.1\nepsilon = 0.002\nt_end = 12.5\nsteps = 7\nmethod = sampled\n"
        "samples = 777\nseed = 18446744073709551615\nworkers = 2\nformat = json\n"
        "histograms = true\n");
    CHECK(c.seed == 18446744073709551615ull);
    CHECK(parse_config(serialize_config(c)) == c);
    CHECK(config_from_json(config_to_json(c)) == c);
    CHECK(serialize_config(parse_config(serialize_config(c))) == serialize_config(c));
}

TEST_CASE("doubles print in shortest round-trip form") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(400.0) == "400");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("every preset member is a valid config") {
    for (const auto& name : preset_names()) {
        const auto members = preset_members(name);
        CHECK_FALSE(members.empty());
        for (const auto& m : members) {
            CHECK(m.config.preset == name);
            CHECK(parse_config(serialize_config(m.config)) == m.config);
            CHECK(m.config.alpha_up_sq == 0.4);
        }
    }
    CHECK(preset_members("fig1").size() == 3);
    CHECK(preset_members("fig3").size() == 5);
    CHECK_THROWS_AS(preset_members("fig9"), ConfigError);
    PresetOverrides o;
    o.seed = 99;
    o.method = Method::sampled;
    for (const auto& m : preset_members("fig1", o)) {
        CHECK(m.config.seed == 99);
        CHECK(m.config.method == Method::sampled);
    }
}
