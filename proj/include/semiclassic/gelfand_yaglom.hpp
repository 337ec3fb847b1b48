#ifndef SEMICLASSIC_GELFAND_YAGLOM_HPP
#define SEMICLASSIC_GELFAND_YAGLOM_HPP

#include "semiclassic/shooting.hpp"

namespace semiclassic {

/// det J(tau, t0): the Gelfand-Yaglom surrogate for the fluctuation
/// operator's functional determinant.  Zero is a legitimate value (a
/// focal point); callers decide what to do with it.
double det_J(const ClassicalTrajectory& traj, double tau);

/// Grid scan of det J(tau, t0) with bisection-refined roots.  For 1-dof
/// systems the zeros of the momentum (turning points) are scanned the
/// same way.  tau = t0 is excluded from root detection: det J(t0,t0) = 0
/// identically.
struct FocalScanReport {
    double t0 = 0.0, t1 = 0.0;
    std::vector<double> grid;
    std::vector<double> detJ_values;
    std::vector<double> focal_times;   // strictly increasing, in (t0, t1]
    std::vector<double> turning_times; // 1-dof only
    bool grid_too_coarse = false;      // adjacent roots closer than ~a grid cell
};

FocalScanReport focal_scan(const ClassicalTrajectory& traj, int n_grid);

/// Van Vleck-Morette matrix M(t0,t) = d^2 S / dx dx0 with its provenance.
struct VanVleckMatrix {
    enum class Source { FromJ, FiniteDifference };
    Eigen::MatrixXd matrix;
    Source source = Source::FromJ;
};

/// M = -J^{-1}: J(t,t0) and M(t0,t) are opposite inverses of one another.
/// Throws FocalPoint when |det J| < 1e-12.
VanVleckMatrix van_vleck_from_J(const FundamentalMatrix& phi);

/// M_ij ~ d^2 S / dx_i dx0_j by central differences of the shooting
/// action; the independent route against which the J-block identity is
/// checked.  Step h is absolute (positions are desk-scale).
VanVleckMatrix van_vleck_fd(const HamiltonianSpec& spec, const BvpProblem& bvp,
                            const ShootingConfig& cfg, double h);

/// Same with the default step h = 1e-3 max(1, |x|_inf), balancing
/// truncation against shooting-residual noise.
VanVleckMatrix van_vleck_fd(const HamiltonianSpec& spec, const BvpProblem& bvp,
                            const ShootingConfig& cfg = {});

/// Shooting action as a function of the endpoints, S(x1, t1; x0, t0).
double shooting_action(const HamiltonianSpec& spec, const BvpProblem& bvp,
                       const ShootingConfig& cfg);

} // namespace semiclassic

#endif
