#include "semiclassic/gelfand_yaglom.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "semiclassic/errors.hpp"

namespace semiclassic {

double det_J(const ClassicalTrajectory& traj, double tau) {
    return integrate_variational(traj, tau).block_J().determinant();
}

namespace {

constexpr double kRootTauTol = 1e-10;

// Bisection on a sign change of f over [a, b]; f(a) and f(b) have opposite
// (nonzero) signs.
double bisect(const std::function<double(double)>& f, double a, double b, double fa) {
    while (b - a > kRootTauTol) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fa < 0.0) != (fm < 0.0)) {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

// Scans f over the grid, excluding the t0 endpoint where f may vanish
// identically, and appends refined roots.
void scan_roots(const std::function<double(double)>& f, const std::vector<double>& grid,
                const std::vector<double>& values, std::vector<double>& roots,
                bool& too_coarse) {
    const double dt_cell = grid[1] - grid[0];
    const double near_zero = 1e-12;
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
        const double fa = values[k], fb = values[k + 1];
        if (std::abs(fa) <= near_zero) {
            roots.push_back(grid[k]);
            continue;
        }
        if (std::abs(fb) <= near_zero) continue; // picked up at the next cell
        if ((fa < 0.0) != (fb < 0.0))
            roots.push_back(bisect(f, grid[k], grid[k + 1], fa));
    }
    // first cell: the value at t0 carries no sign information, so compare
    // the sign just inside against the first grid sample
    const double eps = 1e-6 * dt_cell;
    const double f_in = f(grid[0] + eps);
    if (std::abs(values[1]) > near_zero && std::abs(f_in) > near_zero &&
        (f_in < 0.0) != (values[1] < 0.0))
        roots.push_back(bisect(f, grid[0] + eps, grid[1], f_in));
    // last sample exactly zero counts as a root at t1
    if (std::abs(values.back()) <= near_zero) roots.push_back(grid.back());

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return b - a < kRootTauTol; }),
                roots.end());
    for (std::size_t k = 0; k + 1 < roots.size(); ++k)
        if (roots[k + 1] - roots[k] < 1.5 * dt_cell) too_coarse = true;
    // tangency suspicion: a deep dip towards zero with no sign change
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
        if (std::abs(values[k]) > near_zero && std::abs(values[k]) < 1e-6 * scale &&
            (values[k - 1] < 0.0) == (values[k + 1] < 0.0))
            too_coarse = true;
    }
}

} // namespace

FocalScanReport focal_scan(const ClassicalTrajectory& traj, int n_grid) {
    if (n_grid < 2) throw std::invalid_argument("focal_scan: requires n_grid >= 2");
    FocalScanReport report;
    report.t0 = traj.t0();
    report.t1 = traj.t1();

    VariationalPath path = integrate_variational_path(traj);
    const double dt = (report.t1 - report.t0) / n_grid;
    report.grid.reserve(n_grid + 1);
    report.detJ_values.reserve(n_grid + 1);
    for (int k = 0; k <= n_grid; ++k) {
        const double tau = (k == n_grid) ? report.t1 : report.t0 + k * dt;
        report.grid.push_back(tau);
        report.detJ_values.push_back(path.det_J(tau));
    }

    auto detj = [&](double tau) { return path.det_J(tau); };
    scan_roots(detj, report.grid, report.detJ_values, report.focal_times,
               report.grid_too_coarse);

    if (traj.dof() == 1) {
        std::vector<double> y_values;
        y_values.reserve(report.grid.size());
        for (double tau : report.grid) y_values.push_back(traj.momentum(tau));
        auto mom = [&](double tau) { return traj.momentum(tau); };
        scan_roots(mom, report.grid, y_values, report.turning_times,
                   report.grid_too_coarse);
    }
    return report;
}

VanVleckMatrix van_vleck_from_J(const FundamentalMatrix& phi) {
    const Eigen::MatrixXd j = phi.block_J();
    const double det_j = j.determinant();
    if (std::abs(det_j) < 1e-12)
        throw FocalPoint(phi.tau(), "van_vleck_from_J: det J below 1e-12 (focal point)");
    VanVleckMatrix m;
    m.matrix = -j.inverse();
    m.source = VanVleckMatrix::Source::FromJ;
    return m;
}

double shooting_action(const HamiltonianSpec& spec, const BvpProblem& bvp,
                       const ShootingConfig& cfg) {
    ShootingSolution sol = solve_bvp_detailed(spec, bvp, cfg);
    return sol.trajectory.action();
}

VanVleckMatrix van_vleck_fd(const HamiltonianSpec& spec, const BvpProblem& bvp,
                            const ShootingConfig& cfg) {
    const double scale = std::max({1.0, bvp.x0.cwiseAbs().maxCoeff(),
                                   bvp.x1.cwiseAbs().maxCoeff()});
    return van_vleck_fd(spec, bvp, cfg, 1e-3 * scale);
}

VanVleckMatrix van_vleck_fd(const HamiltonianSpec& spec, const BvpProblem& bvp,
                            const ShootingConfig& cfg, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("van_vleck_fd: requires h > 0");
    const int n = spec.dof();

    // centre solve supplies the warm start that keeps every stencil corner
    // on the same classical branch
    ShootingSolution centre = solve_bvp_detailed(spec, bvp, cfg);
    ShootingConfig warm = cfg;
    warm.y0_guess = centre.y0;

    auto action_at = [&](const Eigen::VectorXd& x1, const Eigen::VectorXd& x0) {
        return shooting_action(spec, BvpProblem(x0, x1, bvp.t0, bvp.t1), warm);
    };

    VanVleckMatrix m;
    m.matrix.resize(n, n);
    m.source = VanVleckMatrix::Source::FiniteDifference;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Eigen::VectorXd xp = bvp.x1, xm = bvp.x1, zp = bvp.x0, zm = bvp.x0;
            xp[i] += h;
            xm[i] -= h;
            zp[j] += h;
            zm[j] -= h;
            const double spp = action_at(xp, zp);
            const double spm = action_at(xp, zm);
            const double smp = action_at(xm, zp);
            const double smm = action_at(xm, zm);
            m.matrix(i, j) = (spp - spm - smp + smm) / (4.0 * h * h);
        }
    }
    return m;
}

} // namespace semiclassic
