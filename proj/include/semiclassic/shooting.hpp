#ifndef SEMICLASSIC_SHOOTING_HPP
#define SEMICLASSIC_SHOOTING_HPP

#include <optional>

#include "semiclassic/variational.hpp"

namespace semiclassic {

/// Two-point boundary-value problem in position space.
struct BvpProblem {
    Eigen::VectorXd x0;
    Eigen::VectorXd x1;
    double t0 = 0.0;
    double t1 = 1.0;

    BvpProblem() = default;
    BvpProblem(Eigen::VectorXd x0_, Eigen::VectorXd x1_, double t0_, double t1_);
    /// 1-dof convenience.
    BvpProblem(double x0_, double x1_, double t0_, double t1_);
};

struct ShootingConfig {
    /// Initial momentum guess; defaults to the free-particle value
    /// m (x1 - x0) / (t1 - t0) when unset.
    std::optional<Eigen::VectorXd> y0_guess;
    int max_iter = 50;
    double residual_tol = 1e-10;
    OdeTolerance ivp_tol{1e-12, 1e-10};
};

/// Converged shooting solution with the variational sweep of the final
/// Newton iterate kept alongside the trajectory (the sweep supplies
/// det J diagnostics and the propagator prefactor without re-integration).
struct ShootingSolution {
    ClassicalTrajectory trajectory;
    VariationalPath variational;
    Eigen::VectorXd y0;
    int iterations = 0;
};

/// Newton shooting on the initial momentum.  The Newton Jacobian
/// dx(t1)/dy0 is exactly the J block of the fundamental matrix, so each
/// iteration integrates the augmented (x, y, S, Phi) system.
/// Throws NoConvergence or SingularShootingJacobian.
ShootingSolution solve_bvp_detailed(const HamiltonianSpec& spec, const BvpProblem& bvp,
                                    const ShootingConfig& cfg = {});

/// The classical path through the endpoints near the supplied guess.
ClassicalTrajectory solve_bvp_shooting(const HamiltonianSpec& spec, const BvpProblem& bvp,
                                       const ShootingConfig& cfg = {});

} // namespace semiclassic

#endif
