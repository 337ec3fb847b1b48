#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "semiclassic/variational.hpp"

using namespace semiclassic;

TEST_CASE("free-particle fundamental matrix [[1, t/m],[0, 1]]") {
    HamiltonianSpec fre(2.0, Potential::free_particle());
    ClassicalTrajectory traj = integrate_ivp(fre, PhaseState(0.0, 1.0, 0.0), 3.0);
    FundamentalMatrix phi = integrate_variational(traj, 3.0);
    CHECK(phi.matrix()(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(phi.block_J()(0, 0) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(phi.matrix()(1, 0) == doctest::Approx(0.0));
    CHECK(phi.matrix()(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("harmonic fundamental matrix is the rotation") {
    HamiltonianSpec ho(1.0, Potential::harmonic(1.0));
    ClassicalTrajectory traj = integrate_ivp(ho, PhaseState(0.7, -0.3, 0.0), 2.5);
    for (double t : {0.5, 1.0, 2.0, 2.5}) {
        FundamentalMatrix phi = integrate_variational(traj, t);
        CHECK(phi.matrix()(0, 0) == doctest::Approx(std::cos(t)).epsilon(1e-9));
        CHECK(phi.matrix()(0, 1) == doctest::Approx(std::sin(t)).epsilon(1e-9));
        CHECK(phi.matrix()(1, 0) == doctest::Approx(-std::sin(t)).epsilon(1e-9));
        CHECK(phi.matrix()(1, 1) == doctest::Approx(std::cos(t)).epsilon(1e-9));
    }
    // J = sin(w t)/(m w) for general m, w
    HamiltonianSpec ho2(1.0, Potential::harmonic(2.0));
    ClassicalTrajectory traj2 = integrate_ivp(ho2, PhaseState(0.2, 0.1, 0.0), 0.5);
    CHECK(integrate_variational(traj2, 0.5).block_J()(0, 0) ==
          doctest::Approx(std::sin(1.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("identity at t0 and zero J block") {
    HamiltonianSpec quart(1.0, Potential::quartic(1.0));
    ClassicalTrajectory traj = integrate_ivp(quart, PhaseState(1.0, 0.0, 0.0), 1.0);
    FundamentalMatrix phi = integrate_variational(traj, 0.0);
    CHECK((phi.matrix() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(phi.block_J()(0, 0) == 0.0);
}

TEST_CASE("symplecticity along a quartic trajectory at 100 sample times") {
    HamiltonianSpec quart(1.0, Potential::quartic(1.0));
    ClassicalTrajectory traj = integrate_ivp(quart, PhaseState(1.0, 0.3, 0.0), 2.0);
    VariationalPath path = integrate_variational_path(traj);
    for (int k = 1; k <= 100; ++k) {
        const double tau = 2.0 * k / 100.0;
        const Eigen::MatrixXd phi = path.at(tau).matrix();
        CHECK(symplectic_defect(phi) < 1e-9);
        CHECK(std::abs(phi.determinant() - 1.0) < 1e-9);
    }
}

TEST_CASE("composition property with randomized interior times") {
    HamiltonianSpec quart(1.0, Potential::quartic(0.8));
    ClassicalTrajectory traj = integrate_ivp(quart, PhaseState(0.9, -0.2, 0.0), 1.8);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.05, 1.75);
    for (int trial = 0; trial < 5; ++trial) {
        const double tm = U(rng);
        const Eigen::MatrixXd full = integrate_variational(traj, 1.8).matrix();
        const Eigen::MatrixXd left = integrate_variational(traj, tm).matrix();
        const Eigen::MatrixXd right = variational_between(traj, tm, 1.8).matrix();
        CHECK((full - right * left).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("flow velocity is a solution of the variational equation") {
    HamiltonianSpec quart(1.0, Potential::quartic(1.0));
    ClassicalTrajectory traj = integrate_ivp(quart, PhaseState(1.1, 0.2, 0.0), 1.5);
    const Eigen::VectorXd v0 = eval_vector_field(traj.spec(), traj.initial_state());
    for (double tau : {0.4, 0.9, 1.5}) {
        const Eigen::VectorXd vt = eval_vector_field(traj.spec(), traj.state(tau));
        const Eigen::VectorXd pushed = integrate_variational(traj, tau).matrix() * v0;
        CHECK((pushed - vt).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("finite-difference flow Jacobian agrees with the variational matrix") {
    const double h = 1e-4;
    HamiltonianSpec fre(1.0, Potential::free_particle());
    Eigen::MatrixXd fd = flow_jacobian_fd(fre, PhaseState(0.0, 1.0, 0.0), 2.0, h);
    Eigen::MatrixXd expect(2, 2);
    expect << 1.0, 2.0, 0.0, 1.0;
    CHECK((fd - expect).cwiseAbs().maxCoeff() < 1e-8);

    HamiltonianSpec ho(1.0, Potential::harmonic(1.0));
    ClassicalTrajectory htraj = integrate_ivp(ho, PhaseState(0.4, 0.6, 0.0), 1.0);
    Eigen::MatrixXd hvar = integrate_variational(htraj, 1.0).matrix();
    Eigen::MatrixXd hfd = flow_jacobian_fd(ho, htraj.initial_state(), 1.0, h);
    CHECK((hvar - hfd).cwiseAbs().maxCoeff() < 1e-5);

    HamiltonianSpec quart(1.0, Potential::quartic(1.0));
    ClassicalTrajectory qtraj = integrate_ivp(quart, PhaseState(1.0, 0.0, 0.0), 0.5);
    Eigen::MatrixXd qvar = integrate_variational(qtraj, 0.5).matrix();
    Eigen::MatrixXd qfd = flow_jacobian_fd(quart, qtraj.initial_state(), 0.5, h);
    CHECK((qvar - qfd).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("n = 2 isotropic harmonic: block-diagonal J") {
    Eigen::VectorXd mass = Eigen::VectorXd::Constant(2, 1.0);
    HamiltonianSpec ho(mass, Potential::harmonic(1.0));
    Eigen::VectorXd x(2), y(2);
    x << 1.0, -0.5;
    y << 0.0, 0.3;
    ClassicalTrajectory traj = integrate_ivp(ho, PhaseState(x, y, 0.0), M_PI / 4);
    Eigen::MatrixXd j = integrate_variational(traj, M_PI / 4).block_J();
    CHECK(j(0, 0) == doctest::Approx(std::sin(M_PI / 4)).epsilon(1e-9));
    CHECK(j(1, 1) == doctest::Approx(std::sin(M_PI / 4)).epsilon(1e-9));
    CHECK(std::abs(j(0, 1)) < 1e-12);
    CHECK(j.determinant() == doctest::Approx(0.5).epsilon(1e-9));
}
