#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "semiclassic/errors.hpp"
#include "semiclassic/gelfand_yaglom.hpp"

using namespace semiclassic;

TEST_CASE("det J values for free and harmonic systems") {
    HamiltonianSpec fre(1.0, Potential::free_particle());
    ClassicalTrajectory ftraj = integrate_ivp(fre, PhaseState(0.0, 1.0, 0.0), 2.0);
    CHECK(det_J(ftraj, 2.0) == doctest::Approx(2.0).epsilon(1e-12));

    HamiltonianSpec ho(1.0, Potential::harmonic(1.0));
    ClassicalTrajectory htraj = integrate_ivp(ho, PhaseState(0.3, 0.4, 0.0), M_PI / 2);
    CHECK(det_J(htraj, M_PI / 2) == doctest::Approx(1.0).epsilon(1e-9));

    // n = 2 isotropic: product of the 1-dof determinants
    Eigen::VectorXd mass = Eigen::VectorXd::Constant(2, 1.0);
    HamiltonianSpec ho2(mass, Potential::harmonic(1.0));
    Eigen::VectorXd x(2), y(2);
    x << 0.5, -0.4;
    y << 0.2, 0.9;
    ClassicalTrajectory traj2 = integrate_ivp(ho2, PhaseState(x, y, 0.0), M_PI / 4);
    CHECK(det_J(traj2, M_PI / 4) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("focal scan finds the harmonic focal time and nothing for free") {
    HamiltonianSpec ho(1.0, Potential::harmonic(2.0));
    ClassicalTrajectory traj = integrate_ivp(ho, PhaseState(1.0, 0.0, 0.0), 2.0);
    FocalScanReport rep = focal_scan(traj, 200);
    REQUIRE(rep.focal_times.size() == 1);
    CHECK(rep.focal_times[0] == doctest::Approx(M_PI / 2).epsilon(1e-9));
    CHECK(std::abs(det_J(traj, rep.focal_times[0])) < 1e-8);

    HamiltonianSpec fre(1.0, Potential::free_particle());
    ClassicalTrajectory ftraj = integrate_ivp(fre, PhaseState(0.0, 1.0, 0.0), 5.0);
    FocalScanReport frep = focal_scan(ftraj, 100);
    CHECK(frep.focal_times.empty());
    CHECK(frep.turning_times.empty());
    CHECK_FALSE(frep.grid_too_coarse);
}

TEST_CASE("turning-point scan: endpoint zeros are not interior roots") {
    // x = cos tau, y = -sin tau: y(0) = 0 at the endpoint, next zero at pi
    HamiltonianSpec ho(1.0, Potential::harmonic(1.0));
    ClassicalTrajectory traj = integrate_ivp(ho, PhaseState(1.0, 0.0, 0.0), 2.0);
    FocalScanReport rep = focal_scan(traj, 150);
    CHECK(rep.turning_times.empty());

    // extend past pi: exactly one turning time
    ClassicalTrajectory longer = integrate_ivp(ho, PhaseState(1.0, 0.0, 0.0), 4.0);
    FocalScanReport rep2 = focal_scan(longer, 200);
    REQUIRE(rep2.turning_times.size() == 1);
    CHECK(rep2.turning_times[0] == doctest::Approx(M_PI).epsilon(1e-9));
    // and one focal time at pi as well (det J = sin tau)
    REQUIRE(rep2.focal_times.size() == 1);
    CHECK(rep2.focal_times[0] == doctest::Approx(M_PI).epsilon(1e-9));
}

TEST_CASE("van Vleck from J: opposite inverse") {
    HamiltonianSpec fre(1.0, Potential::free_particle());
    ClassicalTrajectory ftraj = integrate_ivp(fre, PhaseState(0.0, 0.5, 0.0), 2.0);
    VanVleckMatrix m = van_vleck_from_J(integrate_variational(ftraj, 2.0));
    CHECK(m.matrix(0, 0) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(m.source == VanVleckMatrix::Source::FromJ);

    HamiltonianSpec ho(1.0, Potential::harmonic(1.0));
    ClassicalTrajectory htraj = integrate_ivp(ho, PhaseState(0.0, 1.0, 0.0), M_PI / 4);
    VanVleckMatrix mh = van_vleck_from_J(integrate_variational(htraj, M_PI / 4));
    CHECK(mh.matrix(0, 0) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-9));

    // at the focal time the inverse does not exist; the integration must
    // resolve det J below the 1e-12 contract
    ClassicalTrajectory focal =
        integrate_ivp(ho, PhaseState(0.0, 1.0, 0.0), M_PI, {1e-14, 1e-12});
    CHECK_THROWS_AS(van_vleck_from_J(integrate_variational(focal, M_PI)), FocalPoint);
}

TEST_CASE("van Vleck by finite differences of the shooting action") {
    // free: S = m (x1 - x0)^2 / (2 dt), d2S/dx1 dx0 = -m/dt = -1
    HamiltonianSpec fre(1.0, Potential::free_particle());
    VanVleckMatrix mf =
        van_vleck_fd(fre, BvpProblem(0.0, 1.0, 0.0, 1.0), ShootingConfig{}, 1e-3);
    CHECK(mf.matrix(0, 0) == doctest::Approx(-1.0).epsilon(1e-5));
    CHECK(mf.source == VanVleckMatrix::Source::FiniteDifference);

    HamiltonianSpec ho(1.0, Potential::harmonic(1.0));
    VanVleckMatrix mh =
        van_vleck_fd(ho, BvpProblem(0.0, 1.0, 0.0, M_PI / 4), ShootingConfig{}, 1e-3);
    CHECK(mh.matrix(0, 0) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-4));

    // quartic short-time: both routes agree (the Lemma, checked end to end);
    // default step h = 1e-3 max(1, |x|)
    HamiltonianSpec quart(1.0, Potential::quartic(1.0));
    BvpProblem bvp(1.0, 1.1, 0.0, 0.3);
    VanVleckMatrix fd = van_vleck_fd(quart, bvp);
    ShootingSolution sol = solve_bvp_detailed(quart, bvp);
    VanVleckMatrix from_j = van_vleck_from_J(sol.variational.at(0.3));
    CHECK(fd.matrix(0, 0) == doctest::Approx(from_j.matrix(0, 0)).epsilon(1e-4));
}

TEST_CASE("initial momentum equals minus the action gradient at x0") {
    HamiltonianSpec quart(1.0, Potential::quartic(0.6));
    BvpProblem bvp(0.8, 1.2, 0.0, 0.4);
    ShootingSolution sol = solve_bvp_detailed(quart, bvp);
    const double h = 1e-4;
    ShootingConfig warm;
    warm.y0_guess = sol.y0;
    BvpProblem up(bvp.x0[0] + h, bvp.x1[0], bvp.t0, bvp.t1);
    BvpProblem dn(bvp.x0[0] - h, bvp.x1[0], bvp.t0, bvp.t1);
    const double dS_dx0 =
        (shooting_action(quart, up, warm) - shooting_action(quart, dn, warm)) / (2 * h);
    CHECK(sol.y0[0] == doctest::Approx(-dS_dx0).epsilon(1e-4));
}
