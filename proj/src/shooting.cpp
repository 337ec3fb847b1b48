#include "semiclassic/shooting.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/Dense>

#include "semiclassic/errors.hpp"

namespace semiclassic {

BvpProblem::BvpProblem(Eigen::VectorXd x0_, Eigen::VectorXd x1_, double t0_, double t1_)
    : x0(std::move(x0_)), x1(std::move(x1_)), t0(t0_), t1(t1_) {
    if (!(t1 > t0) || !std::isfinite(t1 - t0))
        throw std::invalid_argument("BvpProblem: requires finite t1 - t0 > 0");
    if (x0.size() != x1.size())
        throw std::invalid_argument("BvpProblem: endpoint dimension mismatch");
}

BvpProblem::BvpProblem(double x0_, double x1_, double t0_, double t1_)
    : BvpProblem(Eigen::VectorXd::Constant(1, x0_), Eigen::VectorXd::Constant(1, x1_), t0_,
                 t1_) {}

namespace {
constexpr double kSingularDetJ = 1e-12;
constexpr int kMaxHalvings = 8;
} // namespace

ShootingSolution solve_bvp_detailed(const HamiltonianSpec& spec, const BvpProblem& bvp,
                                    const ShootingConfig& cfg) {
    if (bvp.x0.size() != spec.dof())
        throw std::invalid_argument("solve_bvp_shooting: BVP dimension mismatch");
    if (cfg.max_iter < 1 || !(cfg.residual_tol > 0.0) || !(cfg.ivp_tol.abs_tol > 0.0) ||
        !(cfg.ivp_tol.rel_tol > 0.0))
        throw std::invalid_argument(
            "solve_bvp_shooting: tolerances must be positive and max_iter >= 1");
    const double dt = bvp.t1 - bvp.t0;
    Eigen::VectorXd y0 = cfg.y0_guess
                             ? *cfg.y0_guess
                             : Eigen::VectorXd(spec.mass().cwiseProduct(bvp.x1 - bvp.x0) / dt);
    if (y0.size() != spec.dof() || !y0.allFinite())
        throw std::invalid_argument(
            "solve_bvp_shooting: y0 guess must be finite with one entry per dof");

    auto sweep = [&](const Eigen::VectorXd& y) {
        return VariationalPath(spec, PhaseState(bvp.x0, y, bvp.t0), bvp.t1, cfg.ivp_tol);
    };

    VariationalPath path = sweep(y0);
    Eigen::VectorXd residual = path.state(bvp.t1).x - bvp.x1;
    double res_norm = residual.cwiseAbs().maxCoeff();

    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        const Eigen::MatrixXd j = path.at(bvp.t1).block_J();
        const double det_j = j.determinant();
        if (std::abs(det_j) < kSingularDetJ)
            throw SingularShootingJacobian(
                det_j, "shooting Jacobian det J(t1,t0) below 1e-12: focal point at the "
                       "target time");
        if (res_norm <= cfg.residual_tol)
            return ShootingSolution{path.trajectory(), std::move(path), y0, iter - 1};

        const Eigen::VectorXd full_step = j.partialPivLu().solve(-residual);

        // damped update: halve until the residual decreases
        double scale = 1.0;
        for (int halving = 0; halving <= kMaxHalvings; ++halving) {
            Eigen::VectorXd y_try = y0 + scale * full_step;
            VariationalPath path_try = sweep(y_try);
            Eigen::VectorXd res_try = path_try.state(bvp.t1).x - bvp.x1;
            const double norm_try = res_try.cwiseAbs().maxCoeff();
            if (norm_try < res_norm || halving == kMaxHalvings) {
                y0 = std::move(y_try);
                path = std::move(path_try);
                residual = std::move(res_try);
                res_norm = norm_try;
                break;
            }
            scale *= 0.5;
        }
    }
    if (res_norm <= cfg.residual_tol &&
        std::abs(path.at(bvp.t1).block_J().determinant()) >= kSingularDetJ)
        return ShootingSolution{path.trajectory(), std::move(path), y0, cfg.max_iter};
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "shooting did not reach residual tolerance %.3g after %d iterations "
                  "(residual = %.3g)",
                  cfg.residual_tol, cfg.max_iter, res_norm);
    throw NoConvergence(res_norm, cfg.max_iter, msg);
}

ClassicalTrajectory solve_bvp_shooting(const HamiltonianSpec& spec, const BvpProblem& bvp,
                                       const ShootingConfig& cfg) {
    return solve_bvp_detailed(spec, bvp, cfg).trajectory;
}

} // namespace semiclassic
