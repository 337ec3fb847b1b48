#include "semiclassic/closed_form.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "semiclassic/errors.hpp"
#include "semiclassic/quadrature.hpp"

namespace semiclassic {

namespace {

void require_one_dof_natural(const ClassicalTrajectory& traj, const char* op) {
    if (traj.dof() != 1)
        throw NotOneDof(std::string(op) + ": defined for 1-degree-of-freedom systems only");
    if (!traj.spec().autonomous())
        throw std::invalid_argument(std::string(op) +
                                    ": requires an autonomous (drive-free) Hamiltonian");
}

void require_in_span(const ClassicalTrajectory& traj, double tau, const char* op) {
    if (tau < traj.t0() || tau > traj.t1())
        throw std::invalid_argument(std::string(op) + ": tau outside trajectory span");
}

// first turning point in (t0, tau], if any: sign change or dip of |y|
// below the floor on a fine dense grid
std::optional<double> find_turning_point(const ClassicalTrajectory& traj, double tau) {
    const int n_scan =
        std::max<int>(512, 16 * static_cast<int>(traj.sample_times().size()));
    const double dt = (tau - traj.t0()) / n_scan;
    double prev = traj.momentum(traj.t0());
    if (std::abs(prev) < kMomentumFloor) return traj.t0();
    for (int k = 1; k <= n_scan; ++k) {
        const double t_k = traj.t0() + k * dt;
        const double y_k = traj.momentum(t_k);
        if (std::abs(y_k) < kMomentumFloor) return t_k;
        if ((y_k < 0.0) != (prev < 0.0)) {
            // refine the crossing by bisection
            double a = t_k - dt, b = t_k, fa = prev;
            while (b - a > 1e-12) {
                const double m = 0.5 * (a + b);
                const double fm = traj.momentum(m);
                if ((fa < 0.0) != (fm < 0.0))
                    b = m;
                else {
                    a = m;
                    fa = fm;
                }
            }
            return 0.5 * (a + b);
        }
        prev = y_k;
    }
    return std::nullopt;
}

} // namespace

Eigen::Vector2d particular_solution(const ClassicalTrajectory& traj, double tau) {
    require_one_dof_natural(traj, "particular_solution");
    require_in_span(traj, tau, "particular_solution");
    const PhaseState s = traj.state(tau);
    const double m = traj.spec().mass_scalar();
    return {s.y[0] / m, -traj.spec().potential_grad(s.x)[0]};
}

Eigen::Matrix2d gauge_matrix_P(const ClassicalTrajectory& traj, double tau) {
    require_one_dof_natural(traj, "gauge_matrix_P");
    require_in_span(traj, tau, "gauge_matrix_P");
    const PhaseState s = traj.state(tau);
    const double m = traj.spec().mass_scalar();
    const double y = s.y[0];
    if (std::abs(y) < kMomentumFloor)
        throw TurningPoint(tau, "gauge_matrix_P: momentum below floor (turning point)");
    const double vp = traj.spec().potential_grad(s.x)[0];
    Eigen::Matrix2d p;
    p << 0.0, y / m, -m / y, -vp;
    return p;
}

Eigen::Matrix2d reduced_matrix(const ClassicalTrajectory& traj, double tau) {
    require_one_dof_natural(traj, "reduced_matrix");
    require_in_span(traj, tau, "reduced_matrix");
    const PhaseState s = traj.state(tau);
    const double m = traj.spec().mass_scalar();
    const double y = s.y[0];
    if (std::abs(y) < kMomentumFloor)
        throw TurningPoint(tau, "reduced_matrix: momentum below floor (turning point)");
    const double vp = traj.spec().potential_grad(s.x)[0];
    const double vpp = traj.spec().potential_curvature(s.x)[0];

    Eigen::Matrix2d p = gauge_matrix_P(traj, tau);
    Eigen::Matrix2d a;
    a << 0.0, 1.0 / m, -vpp, 0.0;
    // chain rule along the flow: xdot = y/m, ydot = -V'
    const double xdot = y / m, ydot = -vp;
    Eigen::Matrix2d pdot;
    pdot << 0.0, ydot / m, m * ydot / (y * y), -vpp * xdot;
    const Eigen::Matrix2d pinv = p.inverse();
    return pinv * a * p - pinv * pdot;
}

double inverse_momentum_square_integral(const ClassicalTrajectory& traj, double tau) {
    require_one_dof_natural(traj, "inverse_momentum_square_integral");
    require_in_span(traj, tau, "inverse_momentum_square_integral");
    if (auto tp = find_turning_point(traj, tau))
        throw TurningPointInInterval(
            *tp, "inverse_momentum_square_integral: momentum vanishes inside the "
                 "interval; the 1/y^2 quadrature hypothesis fails");
    auto integrand = [&](double t) {
        const double y = traj.momentum(t);
        return 1.0 / (y * y);
    };
    return integrate_adaptive(integrand, traj.t0(), tau, 1e-12, 1e-10);
}

double quadrature_J(const ClassicalTrajectory& traj, double t) {
    require_one_dof_natural(traj, "quadrature_J");
    require_in_span(traj, t, "quadrature_J");
    const double m = traj.spec().mass_scalar();
    const double q = inverse_momentum_square_integral(traj, t);
    return traj.momentum(traj.t0()) * traj.momentum(t) * q / m;
}

Eigen::Vector2d general_solution(const ClassicalTrajectory& traj, double tau, double c1,
                                 double c2) {
    require_one_dof_natural(traj, "general_solution");
    require_in_span(traj, tau, "general_solution");
    const PhaseState s = traj.state(tau);
    const double m = traj.spec().mass_scalar();
    const double y = s.y[0];
    const double vp = traj.spec().potential_grad(s.x)[0];
    const double q = inverse_momentum_square_integral(traj, tau);
    Eigen::Matrix2d f;
    f << -y * q, y / m, -m / y + m * vp * q, -vp;
    return f * Eigen::Vector2d(c1, c2);
}

GaugeReduction gauge_reduction(const ClassicalTrajectory& traj, int n_samples) {
    require_one_dof_natural(traj, "gauge_reduction");
    if (n_samples < 2) throw std::invalid_argument("gauge_reduction: n_samples >= 2");
    if (auto tp = find_turning_point(traj, traj.t1()))
        throw TurningPointInInterval(*tp,
                                     "gauge_reduction: momentum vanishes in the interval");
    GaugeReduction red;
    red.grid.reserve(n_samples);
    const double dt = (traj.t1() - traj.t0()) / (n_samples - 1);
    auto integrand = [&](double t) {
        const double y = traj.momentum(t);
        return 1.0 / (y * y);
    };
    double q = 0.0, prev = traj.t0();
    for (int k = 0; k < n_samples; ++k) {
        const double tau = (k == n_samples - 1) ? traj.t1() : traj.t0() + k * dt;
        q += integrate_adaptive(integrand, prev, tau, 1e-12, 1e-10);
        prev = tau;
        red.grid.push_back(tau);
        red.P.push_back(gauge_matrix_P(traj, tau));
        red.PA.push_back(reduced_matrix(traj, tau));
        red.quad.push_back(q);
    }
    return red;
}

PicardVessiotReport picard_vessiot_report(const ClassicalTrajectory& traj, double t) {
    require_one_dof_natural(traj, "picard_vessiot_report");
    require_in_span(traj, t, "picard_vessiot_report");
    PicardVessiotReport rep;
    rep.potential = traj.spec().potential().kind();
    rep.t0 = traj.t0();
    rep.t = t;
    rep.base_elements = {"y(tau)", "V'(x(tau))"};
    rep.adjoined_integral = inverse_momentum_square_integral(traj, t);
    rep.tower_depth = 1;

    const double m = traj.spec().mass_scalar();
    const double y0 = traj.momentum(traj.t0());
    switch (rep.potential) {
    case Potential::Kind::Free: {
        rep.elementary_known = true;
        rep.elementary_value = (t - traj.t0()) / (y0 * y0);
        rep.elementary_form = "(t - t0) / y0^2";
        break;
    }
    case Potential::Kind::Harmonic: {
        // y(tau) = R cos(omega (tau - t0) - chi) stays elementary:
        // int dtau/y^2 = [tan(omega (tau - t0) - chi)] / (omega R^2)
        const double omega = traj.spec().potential().omega();
        const double x0 = traj.state(traj.t0()).x[0];
        const double a = y0, b = -m * omega * x0;
        const double r2 = a * a + b * b;
        const double chi = std::atan2(b, a);
        const double phi1 = omega * (t - traj.t0());
        rep.elementary_known = true;
        rep.elementary_value =
            (std::tan(phi1 - chi) - std::tan(-chi)) / (omega * r2);
        rep.elementary_form = "tan(omega (tau - t0) - chi) / (omega R^2)";
        break;
    }
    default:
        rep.elementary_known = false;
        break;
    }
    return rep;
}

} // namespace semiclassic
