#include "semiclassic/trajectory.hpp"

#include <cmath>
#include <stdexcept>

#include "semiclassic/quadrature.hpp"

namespace semiclassic {

OdeRhs make_trajectory_rhs(const HamiltonianSpec& spec) {
    const int n = spec.dof();
    return [spec, n](double tau, const Eigen::VectorXd& u, Eigen::VectorXd& du) {
        PhaseState s(u.head(n), u.segment(n, n), tau);
        du.resize(2 * n + 1);
        du.head(2 * n) = eval_vector_field(spec, s);
        du[2 * n] = eval_lagrangian(spec, s);
    };
}

ClassicalTrajectory::ClassicalTrajectory(HamiltonianSpec spec, OdeSolution sol,
                                         OdeTolerance tol)
    : spec_(std::move(spec)), sol_(std::move(sol)), tol_(tol) {
    if (spec_.autonomous()) {
        const int n = spec_.dof();
        const Eigen::VectorXd& u0 = sol_.states().front();
        const double h0 = eval_hamiltonian(spec_, PhaseState(u0.head(n), u0.segment(n, n),
                                                             sol_.t_begin()));
        const double scale = std::max(1.0, std::abs(h0));
        for (std::size_t k = 0; k < sol_.states().size(); ++k) {
            const Eigen::VectorXd& u = sol_.states()[k];
            const double h = eval_hamiltonian(
                spec_, PhaseState(u.head(n), u.segment(n, n), sol_.times()[k]));
            energy_drift_ = std::max(energy_drift_, std::abs(h - h0) / scale);
        }
    }
}

PhaseState ClassicalTrajectory::state(double tau) const {
    const int n = dof();
    Eigen::VectorXd u = sol_.at(tau);
    return PhaseState(u.head(n), u.segment(n, n), tau);
}

double ClassicalTrajectory::momentum(double tau) const {
    return sol_.at(tau, dof());
}

std::vector<std::pair<double, PhaseState>> ClassicalTrajectory::samples() const {
    const int n = dof();
    std::vector<std::pair<double, PhaseState>> out;
    out.reserve(sol_.times().size());
    for (std::size_t k = 0; k < sol_.times().size(); ++k) {
        const Eigen::VectorXd& u = sol_.states()[k];
        out.emplace_back(sol_.times()[k],
                         PhaseState(u.head(n), u.segment(n, n), sol_.times()[k]));
    }
    return out;
}

ClassicalTrajectory integrate_ivp(const HamiltonianSpec& spec, const PhaseState& z0,
                                  double t1, const OdeTolerance& tol) {
    if (!(t1 > z0.tau)) throw std::invalid_argument("integrate_ivp: requires t1 > z0.tau");
    if (z0.x.size() != spec.dof() || z0.y.size() != spec.dof())
        throw std::invalid_argument("integrate_ivp: state dimension mismatch");
    const int n = spec.dof();
    Eigen::VectorXd u0(2 * n + 1);
    u0.head(n) = z0.x;
    u0.segment(n, n) = z0.y;
    u0[2 * n] = 0.0;
    OdeSolution sol = integrate_dopri5(make_trajectory_rhs(spec), z0.tau, u0, t1, tol);
    return ClassicalTrajectory(spec, std::move(sol), tol);
}

double compute_action(const ClassicalTrajectory& traj) {
    const auto& spec = traj.spec();
    auto lag = [&](double tau) { return eval_lagrangian(spec, traj.state(tau)); };
    return integrate_adaptive(lag, traj.t0(), traj.t1(), 1e-12, 1e-10);
}

} // namespace semiclassic
