#include "semiclassic/variational.hpp"

#include <algorithm>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace semiclassic {

FundamentalMatrix::FundamentalMatrix(double t0, double tau, Eigen::MatrixXd phi)
    : t0_(t0), tau_(tau), phi_(std::move(phi)) {
    if (phi_.rows() != phi_.cols() || phi_.rows() % 2 != 0)
        throw std::invalid_argument("FundamentalMatrix: matrix must be 2n x 2n");
}

Eigen::MatrixXd block_J(const FundamentalMatrix& phi) { return phi.block_J(); }

double symplectic_defect(const Eigen::MatrixXd& phi) {
    const int n = static_cast<int>(phi.rows()) / 2;
    const Eigen::MatrixXd j = symplectic_form(n);
    return (phi.transpose() * j * phi - j).cwiseAbs().maxCoeff();
}

OdeRhs make_variational_rhs(const HamiltonianSpec& spec) {
    const int n = spec.dof();
    return [spec, n](double tau, const Eigen::VectorXd& u, Eigen::VectorXd& du) {
        const int m = 2 * n;
        PhaseState s(u.head(n), u.segment(n, n), tau);
        du.resize(m + 1 + m * m);
        du.head(m) = eval_vector_field(spec, s);
        du[m] = eval_lagrangian(spec, s);

        // Phi' = [[0, M^-1],[-V'', 0]] Phi, exploiting the diagonal blocks.
        const Eigen::VectorXd vpp = spec.potential_curvature(s.x);
        const Eigen::VectorXd minv = spec.mass().cwiseInverse();
        Eigen::Map<const Eigen::MatrixXd> phi(u.data() + m + 1, m, m);
        Eigen::Map<Eigen::MatrixXd> dphi(du.data() + m + 1, m, m);
        dphi.topRows(n) = minv.asDiagonal() * phi.bottomRows(n);
        dphi.bottomRows(n) = -(vpp.asDiagonal() * phi.topRows(n));
    };
}

VariationalPath::VariationalPath(const HamiltonianSpec& spec, const PhaseState& z0,
                                 double t1, const OdeTolerance& tol)
    : spec_(spec), tol_(tol),
      sol_([&] {
          const int n = spec.dof();
          const int m = 2 * n;
          Eigen::VectorXd u0 = Eigen::VectorXd::Zero(m + 1 + m * m);
          u0.head(n) = z0.x;
          u0.segment(n, n) = z0.y;
          Eigen::Map<Eigen::MatrixXd>(u0.data() + m + 1, m, m).setIdentity();
          return integrate_dopri5(make_variational_rhs(spec), z0.tau, u0, t1, tol);
      }()) {}

Eigen::VectorXd VariationalPath::augmented_at(double tau) const {
    tau = std::clamp(tau, t0(), t1());
    const auto& times = sol_.times();
    auto it = std::upper_bound(times.begin(), times.end(), tau);
    std::size_t k = (it == times.begin()) ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
    if (times[k] == tau) return sol_.states()[k];
    // queries within rounding distance of a node use the dense interpolant
    if (tau - times[k] < 1e-13 * std::max(1.0, std::abs(tau))) return sol_.at(tau);
    // re-step from the nearest node at or before tau
    OdeSolution seg =
        integrate_dopri5(make_variational_rhs(spec_), times[k], sol_.states()[k], tau, tol_);
    return seg.states().back();
}

FundamentalMatrix VariationalPath::at(double tau) const {
    const int m = 2 * dof();
    Eigen::VectorXd u = augmented_at(tau);
    return FundamentalMatrix(t0(), tau,
                             Eigen::Map<const Eigen::MatrixXd>(u.data() + m + 1, m, m));
}

double VariationalPath::det_J(double tau) const {
    return at(tau).block_J().determinant();
}

PhaseState VariationalPath::state(double tau) const {
    const int n = dof();
    Eigen::VectorXd u = augmented_at(tau);
    return PhaseState(u.head(n), u.segment(n, n), tau);
}

double VariationalPath::action(double tau) const { return augmented_at(tau)[2 * dof()]; }

ClassicalTrajectory VariationalPath::trajectory() const {
    return ClassicalTrajectory(spec_, sol_.head(2 * dof() + 1), tol_);
}

std::vector<double> VariationalPath::node_det_J() const {
    const int n = dof();
    const int m = 2 * n;
    std::vector<double> out;
    out.reserve(sol_.states().size());
    for (const auto& u : sol_.states()) {
        Eigen::Map<const Eigen::MatrixXd> phi(u.data() + m + 1, m, m);
        out.push_back(phi.topRightCorner(n, n).determinant());
    }
    return out;
}

VariationalPath integrate_variational_path(const ClassicalTrajectory& traj) {
    return VariationalPath(traj.spec(), traj.initial_state(), traj.t1(), traj.tolerance());
}

FundamentalMatrix integrate_variational(const ClassicalTrajectory& traj, double tau) {
    if (tau < traj.t0() || tau > traj.t1())
        throw std::invalid_argument("integrate_variational: tau outside trajectory span");
    const int m = 2 * traj.dof();
    if (tau == traj.t0())
        return FundamentalMatrix(tau, tau, Eigen::MatrixXd::Identity(m, m));
    VariationalPath path(traj.spec(), traj.initial_state(), tau, traj.tolerance());
    return path.at(tau);
}

FundamentalMatrix variational_between(const ClassicalTrajectory& traj, double ta, double tb) {
    if (ta < traj.t0() || tb > traj.t1() || tb < ta)
        throw std::invalid_argument("variational_between: need t0 <= ta <= tb <= t1");
    const int m = 2 * traj.dof();
    if (ta == tb) return FundamentalMatrix(ta, tb, Eigen::MatrixXd::Identity(m, m));
    VariationalPath path(traj.spec(), traj.state(ta), tb, traj.tolerance());
    return path.at(tb);
}

Eigen::MatrixXd flow_jacobian_fd(const HamiltonianSpec& spec, const PhaseState& z0,
                                 double t1, double h, const OdeTolerance& tol) {
    if (!(h > 0.0)) throw std::invalid_argument("flow_jacobian_fd: requires h > 0");
    const int n = spec.dof();
    const int m = 2 * n;
    Eigen::MatrixXd jac(m, m);
    Eigen::VectorXd z(m);
    z.head(n) = z0.x;
    z.tail(n) = z0.y;
    auto flow = [&](const Eigen::VectorXd& zi) {
        PhaseState s(zi.head(n), zi.tail(n), z0.tau);
        PhaseState zf = integrate_ivp(spec, s, t1, tol).final_state();
        Eigen::VectorXd out(m);
        out.head(n) = zf.x;
        out.tail(n) = zf.y;
        return out;
    };
    for (int k = 0; k < m; ++k) {
        Eigen::VectorXd zp = z, zm = z;
        zp[k] += h;
        zm[k] -= h;
        jac.col(k) = (flow(zp) - flow(zm)) / (2.0 * h);
    }
    return jac;
}

} // namespace semiclassic
