#ifndef SEMICLASSIC_TRAJECTORY_HPP
#define SEMICLASSIC_TRAJECTORY_HPP

#include "semiclassic/hamiltonian.hpp"
#include "semiclassic/ode.hpp"

namespace semiclassic {

/// Integral curve of Hamilton's equations over [t0, t1] with dense output
/// and the running action S(tau) = int_{t0}^{tau} (y.xdot - H) dsigma
/// carried as an extra ODE component.
class ClassicalTrajectory {
public:
    ClassicalTrajectory(HamiltonianSpec spec, OdeSolution sol, OdeTolerance tol);

    const HamiltonianSpec& spec() const { return spec_; }
    int dof() const { return spec_.dof(); }
    double t0() const { return sol_.t_begin(); }
    double t1() const { return sol_.t_end(); }
    const OdeTolerance& tolerance() const { return tol_; }

    ///State at any tau in [t0, t1] (dense interpolation).
    PhaseState state(double tau) const;
    PhaseState initial_state() const { return state(t0()); }
    PhaseState final_state() const { return state(t1()); }

    /// 1-dof shorthand for the momentum y(tau).
    double momentum(double tau) const;

    /// Running action S(t0 -> tau); action() is the full S(gamma).
    double action(double tau) const { return sol_.at(tau, 2 * dof()); }
    double action() const { return action(t1()); }

    /// max_tau |H(tau) - H(t0)| over the accepted steps, relative to
    /// max(1, |H(t0)|).  Zero for driven (non-autonomous) systems.
    double energy_drift() const { return energy_drift_; }

    /// Integrator step times (strictly increasing, spanning [t0, t1]).
    const std::vector<double>& sample_times() const { return sol_.times(); }
    /// (tau, state) at every accepted integrator step.
    std::vector<std::pair<double, PhaseState>> samples() const;
    const OdeSolution& solution() const { return sol_; }

private:
    HamiltonianSpec spec_;
    OdeSolution sol_;
    OdeTolerance tol_;
    double energy_drift_ = 0.0;
};

/// Right-hand side of the (x, y, S) system for a given spec; the layout is
/// u = (x_1..x_n, y_1..y_n, S).
OdeRhs make_trajectory_rhs(const HamiltonianSpec& spec);

/// Solve the initial-value problem from z0 to t1 > z0.tau.  The default
/// tolerance is set so the relative energy drift stays below 1e-9 over
/// ten characteristic periods.
ClassicalTrajectory integrate_ivp(const HamiltonianSpec& spec, const PhaseState& z0,
                                  double t1, const OdeTolerance& tol = {1e-12, 2e-11});

/// Re-computes S(gamma) by adaptive quadrature of the Lagrangian over the
/// trajectory's dense output (independent of the carried ODE component).
double compute_action(const ClassicalTrajectory& traj);

} // namespace semiclassic

#endif
