#ifndef SEMICLASSIC_VARIATIONAL_HPP
#define SEMICLASSIC_VARIATIONAL_HPP

#include "semiclassic/trajectory.hpp"

namespace semiclassic {

/// Fundamental solution Phi(tau, t0) of the variational (Jacobi) equation
///   Phi' = J H''(x(tau), y(tau)) Phi,   Phi(t0, t0) = 1,
/// with the four n x n blocks in state order (x then y):
///
///   Phi = [ H  J ]    H = dx/dx0   J = dx/dy0
///         [ L  P ]    L = dy/dx0   P = dy/dy0
class FundamentalMatrix {
public:
    FundamentalMatrix(double t0, double tau, Eigen::MatrixXd phi);

    double t0() const { return t0_; }
    double tau() const { return tau_; }
    int dof() const { return static_cast<int>(phi_.rows()) / 2; }
    const Eigen::MatrixXd& matrix() const { return phi_; }

    Eigen::MatrixXd block_H() const { return phi_.topLeftCorner(dof(), dof()); }
    Eigen::MatrixXd block_J() const { return phi_.topRightCorner(dof(), dof()); }
    Eigen::MatrixXd block_L() const { return phi_.bottomLeftCorner(dof(), dof()); }
    Eigen::MatrixXd block_P() const { return phi_.bottomRightCorner(dof(), dof()); }

private:
    double t0_, tau_;
    Eigen::MatrixXd phi_;
};

/// Position response to the initial momentum, J(tau, t0) = dx(tau)/dy0.
Eigen::MatrixXd block_J(const FundamentalMatrix& phi);

/// || Phi^T J Phi - J ||_inf, the symplecticity defect.
double symplectic_defect(const Eigen::MatrixXd& phi);

/// (x, y, S, Phi) integrated in one adaptive loop from the trajectory's
/// initial state, so the Hessian is always evaluated at the co-integrated
/// state rather than an interpolant.  Queries at off-node times re-step
/// from the nearest accepted node to keep node-level accuracy everywhere.
class VariationalPath {
public:
    VariationalPath(const HamiltonianSpec& spec, const PhaseState& z0, double t1,
                    const OdeTolerance& tol);

    double t0() const { return sol_.t_begin(); }
    double t1() const { return sol_.t_end(); }
    int dof() const { return spec_.dof(); }

    FundamentalMatrix at(double tau) const;
    double det_J(double tau) const;
    PhaseState state(double tau) const;
    double action(double tau) const;

    /// det J(tau_k, t0) at each accepted integrator node (cheap focal probe).
    const std::vector<double>& node_times() const { return sol_.times(); }
    std::vector<double> node_det_J() const;

    const OdeSolution& solution() const { return sol_; }
    /// The co-integrated (x, y, S) trajectory carried by this sweep.
    ClassicalTrajectory trajectory() const;

private:
    Eigen::VectorXd augmented_at(double tau) const;

    HamiltonianSpec spec_;
    OdeTolerance tol_;
    OdeSolution sol_;
};

/// RHS of the augmented (x, y, S, Phi) system; Phi is stored column-major
/// after the trajectory components.
OdeRhs make_variational_rhs(const HamiltonianSpec& spec);

/// Phi(tau, t0) along traj; one-shot convenience over VariationalPath.
FundamentalMatrix integrate_variational(const ClassicalTrajectory& traj, double tau);

/// Sweep producing Phi at each requested time in one pass.
VariationalPath integrate_variational_path(const ClassicalTrajectory& traj);

/// Phi(tb, ta) along the same trajectory, ta >= traj.t0().
FundamentalMatrix variational_between(const ClassicalTrajectory& traj, double ta, double tb);

/// Central finite differences of the flow map with respect to the initial
/// condition; agrees with integrate_variational to O(h^2).
Eigen::MatrixXd flow_jacobian_fd(const HamiltonianSpec& spec, const PhaseState& z0,
                                 double t1, double h, const OdeTolerance& tol = {});

} // namespace semiclassic

#endif
