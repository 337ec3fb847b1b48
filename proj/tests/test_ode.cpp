#include <doctest.h>

#include <cmath>

#include "semiclassic/errors.hpp"
#include "semiclassic/ode.hpp"
#include "semiclassic/quadrature.hpp"

using namespace semiclassic;

TEST_CASE("dopri5 reproduces the circle to integrator tolerance") {
    OdeRhs f = [](double, const Eigen::VectorXd& u, Eigen::VectorXd& du) {
        du.resize(2);
        du[0] = u[1];
        du[1] = -u[0];
    };
    Eigen::VectorXd u0(2);
    u0 << 1.0, 0.0;
    OdeSolution sol = integrate_dopri5(f, 0.0, u0, 10.0, {1e-12, 1e-10});
    // endpoint
    CHECK(sol.at(10.0)[0] == doctest::Approx(std::cos(10.0)).epsilon(1e-9));
    CHECK(sol.at(10.0)[1] == doctest::Approx(-std::sin(10.0)).epsilon(1e-9));
    // dense output at awkward interior times
    for (double t : {0.1234, 1.718, 4.669, 7.389, 9.999}) {
        CHECK(sol.at(t, 0) == doctest::Approx(std::cos(t)).epsilon(1e-8));
        CHECK(sol.at(t, 1) == doctest::Approx(-std::sin(t)).epsilon(1e-8));
    }
}

TEST_CASE("dopri5 handles forced and stiff-free nonlinearities") {
    // logistic: u' = u (1 - u), u(0) = 0.1; exact solution known
    OdeRhs f = [](double, const Eigen::VectorXd& u, Eigen::VectorXd& du) {
        du.resize(1);
        du[0] = u[0] * (1.0 - u[0]);
    };
    OdeSolution sol = integrate_dopri5(f, 0.0, Eigen::VectorXd::Constant(1, 0.1), 5.0);
    const double exact = 0.1 * std::exp(5.0) / (1.0 + 0.1 * (std::exp(5.0) - 1.0));
    CHECK(sol.at(5.0)[0] == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("dopri5 reports step-size underflow on finite-time blow-up") {
    OdeRhs f = [](double, const Eigen::VectorXd& u, Eigen::VectorXd& du) {
        du.resize(1);
        du[0] = u[0] * u[0]; // u' = u^2 blows up at t = 1/u0
    };
    CHECK_THROWS_AS(integrate_dopri5(f, 0.0, Eigen::VectorXd::Constant(1, 2.0), 1.0),
                    StepSizeUnderflow);
}

TEST_CASE("adaptive gauss-kronrod quadrature") {
    CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate_adaptive([](double x) { return std::exp(-x * x); }, -8.0, 8.0) ==
          doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
    // a sharply peaked integrand exercises the subdivision logic
    CHECK(integrate_adaptive([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0) ==
          doctest::Approx(2.0 / 1e-2 * std::atan(1.0 / 1e-2)).epsilon(1e-10));
    // orientation
    CHECK(integrate_adaptive([](double x) { return x; }, 1.0, 0.0) ==
          doctest::Approx(-0.5));
}
