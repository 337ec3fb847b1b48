#include <doctest.h>

#include "semiclassic/config.hpp"
#include "semiclassic/errors.hpp"

using namespace semiclassic;

TEST_CASE("flat dotted-key parsing with comments") {
    RunConfig cfg = RunConfig::parse("# a fixture\n"
                                     "n = 1\n"
                                     "mass = 2.0   # scalar mass\n"
                                     "potential.kind = harmonic\n"
                                     "potential.omega = 1.5\n"
                                     "problem.x0 = 0.0\n"
                                     "problem.x1 = 1.0\n"
                                     "problem.t1 = 0.75\n"
                                     "\n"
                                     "numerics.hbar = 0.5\n");
    CHECK(cfg.get_double("mass") == 2.0);
    CHECK(cfg.get_string("potential.kind") == "harmonic");
    CHECK(cfg.hbar() == 0.5);
    HamiltonianSpec spec = cfg.spec();
    CHECK(spec.mass_scalar() == 2.0);
    CHECK(spec.potential().omega() == 1.5);
    BvpProblem bvp = cfg.bvp();
    CHECK(bvp.x1[0] == 1.0);
    CHECK(bvp.t0 == 0.0);
    CHECK(bvp.t1 == 0.75);
}

TEST_CASE("validation errors carry the offending key") {
    RunConfig bad_mass = RunConfig::parse("mass = -1\npotential.kind = free\n");
    try {
        bad_mass.spec();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "mass");
    }

    RunConfig bad_kind = RunConfig::parse("potential.kind = fancy\n");
    CHECK_THROWS_AS(bad_kind.spec(), ConfigError);

    RunConfig bad_num = RunConfig::parse("mass = two\npotential.kind = free\n");
    CHECK_THROWS_AS(bad_num.spec(), ConfigError);

    CHECK_THROWS_AS(RunConfig::parse("just a line without equals\n"), ConfigError);
}

TEST_CASE("vector-valued keys for n > 1") {
    RunConfig cfg = RunConfig::parse("n = 2\n"
                                     "mass = 1.0, 2.0\n"
                                     "potential.kind = harmonic\n"
                                     "potential.omega = 1.0\n"
                                     "problem.x0 = 0.1, -0.2\n"
                                     "problem.x1 = 0.5, 0.4\n"
                                     "problem.t1 = 0.6\n");
    CHECK(cfg.spec().dof() == 2);
    CHECK(cfg.spec().mass()[1] == 2.0);
    CHECK(cfg.bvp().x0[1] == -0.2);
}

TEST_CASE("drive family keys") {
    RunConfig cfg = RunConfig::parse("potential.kind = harmonic\n"
                                     "potential.omega = 1.0\n"
                                     "drive.kind = sin\n"
                                     "drive.amplitude = 0.3\n"
                                     "drive.omega = 2.0\n"
                                     "drive.phase = 0.1\n");
    HamiltonianSpec spec = cfg.spec();
    REQUIRE(spec.drive().has_value());
    CHECK(spec.drive()->value(0.0) == doctest::Approx(0.3 * std::sin(0.1)));
}

TEST_CASE("17-digit formatting round-trips doubles") {
    for (double v : {0.1, 1.0 / 3.0, 2.0 * M_PI, 1e-300, -123456.789e12}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}
