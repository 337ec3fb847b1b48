#ifndef SEMICLASSIC_CLOSED_FORM_HPP
#define SEMICLASSIC_CLOSED_FORM_HPP

#include <optional>
#include <string>

#include "semiclassic/trajectory.hpp"

namespace semiclassic {

/// Floor below which the momentum is treated as a turning point; the
/// 1/y^2 quadrature hypothesis is refused rather than regularized.
constexpr double kMomentumFloor = 1e-10;

/// (y/m, -V'(x)): for autonomous 1-dof natural Hamiltonians the phase
/// velocity is itself a solution of the variational equation.
Eigen::Vector2d particular_solution(const ClassicalTrajectory& traj, double tau);

/// Symplectic gauge matrix P = [[0, y/m], [-m/y, -V'(x)]], det P = 1.
/// Throws TurningPoint when |y(tau)| < kMomentumFloor.
Eigen::Matrix2d gauge_matrix_P(const ClassicalTrajectory& traj, double tau);

/// Transformed coefficient matrix P[A] = P^-1 A P - P^-1 P', computed
/// from the matrices themselves with P' by the chain rule.  Equals
/// [[0, 0], [-m/y^2, 0]]: strictly lower triangular.
Eigen::Matrix2d reduced_matrix(const ClassicalTrajectory& traj, double tau);

/// Running quadrature q(tau) = int_{t0}^{tau} dsigma / y(sigma)^2 on the
/// trajectory's dense output.  Throws TurningPointInInterval when the
/// momentum crosses or approaches zero inside [t0, tau].
double inverse_momentum_square_integral(const ClassicalTrajectory& traj, double tau);

/// J(t, t0) = (1/m) y(t0) y(t) int_{t0}^{t} dtau / y^2: the quadrature
/// route to the Gelfand-Yaglom determinant for integrable 1-dof systems.
double quadrature_J(const ClassicalTrajectory& traj, double t);

/// General solution of the variational equation assembled from the gauge
/// reduction: (xi, eta)(tau) = F(tau) (c1, c2) with
///   F = [[-y q, y/m], [-m/y + m V' q, -V']],   q = int_{t0}^{tau} ds/y^2.
/// F(t0) coincides with the gauge matrix P(t0) and det F = 1.
Eigen::Vector2d general_solution(const ClassicalTrajectory& traj, double tau, double c1,
                                 double c2);

/// Grid record of the gauge reduction for export and structure checks.
struct GaugeReduction {
    std::vector<double> grid;
    std::vector<Eigen::Matrix2d> P;
    std::vector<Eigen::Matrix2d> PA;
    std::vector<double> quad; // running int dtau/y^2
};

GaugeReduction gauge_reduction(const ClassicalTrajectory& traj, int n_samples);

/// Bookkeeping record of the quadrature tower behind the closed form:
/// which base-field elements were consumed, the single adjoined integral,
/// and whether that integral is elementary for the recognized potential
/// family (fixed lookup, not symbolic integration).
struct PicardVessiotReport {
    Potential::Kind potential = Potential::Kind::Free;
    double t0 = 0.0, t = 0.0;
    std::vector<std::string> base_elements; // consumed from the coefficient field
    double adjoined_integral = 0.0;         // numeric value of int dtau/y^2
    int tower_depth = 1;
    bool elementary_known = false;
    std::optional<double> elementary_value; // closed form, when the table has one
    std::string elementary_form;            // human-readable antiderivative
};

PicardVessiotReport picard_vessiot_report(const ClassicalTrajectory& traj, double t);

} // namespace semiclassic

#endif
