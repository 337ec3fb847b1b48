#include "semiclassic/kernel_grid.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "semiclassic/errors.hpp"
#include "semiclassic/parallel.hpp"

namespace semiclassic {

namespace {

constexpr double kPi = std::numbers::pi;

void require_surface_spec(const HamiltonianSpec& spec) {
    if (spec.dof() != 1)
        throw NotOneDof("WkbKernelSurface: 1 degree of freedom only");
}

} // namespace

WkbKernelSurface WkbKernelSurface::quadratic(const HamiltonianSpec& spec, double t0,
                                             double t1, const ShootingConfig& cfg) {
    require_surface_spec(spec);
    if (!spec.potential().quadratic())
        throw std::invalid_argument(
            "WkbKernelSurface::quadratic: potential is not free/harmonic");
    WkbKernelSurface surf;
    surf.quadratic_ = true;
    surf.spec_ = spec;
    surf.cfg_ = cfg;
    surf.t0_ = t0;
    surf.t1_ = t1;

    // 3x3 endpoint stencil; any non-degenerate stencil determines the six
    // coefficients of the exactly-quadratic action
    const double d = 1.0;
    Eigen::Matrix<double, 9, 6> a;
    Eigen::Matrix<double, 9, 1> rhs;
    int row = 0;
    double det_j_ref = 0.0;
    for (int i = -1; i <= 1; ++i) {
        for (int j = -1; j <= 1; ++j) {
            const double x1 = i * d, x0 = j * d;
            ShootingSolution sol =
                solve_bvp_detailed(spec, BvpProblem(x0, x1, t0, t1), cfg);
            if (row == 0)
                det_j_ref = sol.variational.at(t1).block_J().determinant();
            a.row(row) << x1 * x1, x1 * x0, x0 * x0, x1, x0, 1.0;
            rhs[row] = sol.trajectory.action();
            ++row;
        }
    }
    surf.coeff_ = a.colPivHouseholderQr().solve(rhs);
    surf.det_j_const_ = det_j_ref;

    // the fit must reproduce independent solves to solver accuracy
    const double defect =
        surf.validate({{0.37, -0.82}, {-1.41, 0.63}, {1.73, 1.19}});
    if (defect > 1e-7)
        throw std::logic_error(
            "WkbKernelSurface::quadratic: fitted action disagrees with direct "
            "shooting (defect " +
            std::to_string(defect) + "); spec is not quadratic");
    return surf;
}

WkbKernelSurface WkbKernelSurface::tabulated(const HamiltonianSpec& spec, double t0,
                                             double t1, double x0_min, double x0_max,
                                             int n0, double x1_min, double x1_max, int n1,
                                             const ShootingConfig& cfg) {
    require_surface_spec(spec);
    if (n0 < 4 || n1 < 4)
        throw std::invalid_argument("WkbKernelSurface::tabulated: need >= 4 nodes per axis");
    WkbKernelSurface surf;
    surf.quadratic_ = false;
    surf.spec_ = spec;
    surf.cfg_ = cfg;
    surf.t0_ = t0;
    surf.t1_ = t1;
    surf.x0_nodes_ = Eigen::VectorXd::LinSpaced(n0, x0_min, x0_max);
    surf.x1_nodes_ = Eigen::VectorXd::LinSpaced(n1, x1_min, x1_max);
    surf.s_.resize(n1, n0);
    surf.y0_.resize(n1, n0);
    surf.y1_.resize(n1, n0);
    surf.jj_.resize(n1, n0);

    const double m = spec.mass_scalar();
    const double dt = t1 - t0;
    // one x0 column per task: continuation in x1 keeps Newton on the
    // direct branch and converging in one or two steps
    parallel_for(n0, [&](long c) {
        const double x0 = surf.x0_nodes_[c];
        ShootingConfig col_cfg = cfg;
        for (int r = 0; r < n1; ++r) {
            const double x1 = surf.x1_nodes_[r];
            if (r > 0) {
                Eigen::VectorXd guess(1);
                guess[0] = surf.y0_(r - 1, c) +
                           m * (x1 - surf.x1_nodes_[r - 1]) / dt;
                col_cfg.y0_guess = guess;
            }
            ShootingSolution sol =
                solve_bvp_detailed(spec, BvpProblem(x0, x1, t0, t1), col_cfg);
            surf.s_(r, c) = sol.trajectory.action();
            surf.y0_(r, c) = sol.y0[0];
            surf.y1_(r, c) = sol.trajectory.final_state().y[0];
            surf.jj_(r, c) = sol.variational.at(t1).block_J()(0, 0);
        }
    });
    return surf;
}

namespace {

// cubic Hermite basis on [0, 1]
inline void hermite_basis(double u, double h[4]) {
    const double u2 = u * u, u3 = u2 * u;
    h[0] = 2 * u3 - 3 * u2 + 1; // value at left
    h[1] = u3 - 2 * u2 + u;     // slope at left
    h[2] = -2 * u3 + 3 * u2;    // value at right
    h[3] = u3 - u2;             // slope at right
}

// Catmull-Rom slope estimates along a column of nodes
inline double cr_slope(const Eigen::MatrixXd& f, int r, int c, bool along_rows,
                       double h) {
    const int n = along_rows ? static_cast<int>(f.rows()) : static_cast<int>(f.cols());
    const int k = along_rows ? r : c;
    auto val = [&](int i) { return along_rows ? f(i, c) : f(r, i); };
    if (k == 0) return (val(1) - val(0)) / h;
    if (k == n - 1) return (val(n - 1) - val(n - 2)) / h;
    return (val(k + 1) - val(k - 1)) / (2.0 * h);
}

} // namespace

double WkbKernelSurface::table_lookup(double x1, double x0, bool want_detj) const {
    const int n0 = static_cast<int>(x0_nodes_.size());
    const int n1 = static_cast<int>(x1_nodes_.size());
    const double h0 = x0_nodes_[1] - x0_nodes_[0];
    const double h1 = x1_nodes_[1] - x1_nodes_[0];
    if (x0 < x0_nodes_[0] - 1e-12 || x0 > x0_nodes_[n0 - 1] + 1e-12 ||
        x1 < x1_nodes_[0] - 1e-12 || x1 > x1_nodes_[n1 - 1] + 1e-12)
        throw std::domain_error("WkbKernelSurface: endpoint outside the tabulated domain");
    int c = std::min(n0 - 2, std::max(0, static_cast<int>((x0 - x0_nodes_[0]) / h0)));
    int r = std::min(n1 - 2, std::max(0, static_cast<int>((x1 - x1_nodes_[0]) / h1)));
    const double u = (x1 - x1_nodes_[r]) / h1; // along rows (x1)
    const double v = (x0 - x0_nodes_[c]) / h0; // along columns (x0)
    double hu[4], hv[4];
    hermite_basis(u, hu);
    hermite_basis(v, hv);

    if (!want_detj) {
        // bicubic Hermite with exact derivative data:
        //   f = S, f_u = y1 * h1, f_v = -y0 * h0, f_uv = -(h0 h1)/J
        double acc = 0.0;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const int rr = r + i, cc = c + j;
                const double f = s_(rr, cc);
                const double fu = y1_(rr, cc) * h1;
                const double fv = -y0_(rr, cc) * h0;
                const double fuv = -h0 * h1 / jj_(rr, cc);
                acc += f * hu[2 * i] * hv[2 * j] + fu * hu[2 * i + 1] * hv[2 * j] +
                       fv * hu[2 * i] * hv[2 * j + 1] + fuv * hu[2 * i + 1] * hv[2 * j + 1];
            }
        }
        return acc;
    }
    // det J by bicubic with Catmull-Rom slopes
    double acc = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const int rr = r + i, cc = c + j;
            const double f = jj_(rr, cc);
            const double fu = cr_slope(jj_, rr, cc, true, h1) * h1;
            const double fv = cr_slope(jj_, rr, cc, false, h0) * h0;
            // cross derivative omitted: det J varies slowly and enters
            // only through |det J|^(-1/2)
            const double fuv = 0.0;
            acc += f * hu[2 * i] * hv[2 * j] + fu * hu[2 * i + 1] * hv[2 * j] +
                   fv * hu[2 * i] * hv[2 * j + 1] + fuv * hu[2 * i + 1] * hv[2 * j + 1];
        }
    }
    return acc;
}

double WkbKernelSurface::action(double x1, double x0) const {
    if (quadratic_) {
        const Eigen::Matrix<double, 6, 1>& c = coeff_;
        return c[0] * x1 * x1 + c[1] * x1 * x0 + c[2] * x0 * x0 + c[3] * x1 + c[4] * x0 +
               c[5];
    }
    return table_lookup(x1, x0, false);
}

double WkbKernelSurface::det_j(double x1, double x0) const {
    if (quadratic_) return det_j_const_;
    return table_lookup(x1, x0, true);
}

Complex WkbKernelSurface::kernel(double x1, double x0, double hbar) const {
    const double s = action(x1, x0);
    const double dj = det_j(x1, x0);
    const double modulus = 1.0 / std::sqrt(2.0 * kPi * hbar * std::abs(dj));
    return std::polar(modulus, s / hbar - 0.25 * kPi);
}

KernelFn WkbKernelSurface::kernel_fn(double hbar) const {
    WkbKernelSurface copy = *this;
    return [copy, hbar](double x1, double x0) { return copy.kernel(x1, x0, hbar); };
}

double WkbKernelSurface::validate(
    const std::vector<std::pair<double, double>>& x1_x0_pairs) const {
    double worst = 0.0;
    for (const auto& [x1, x0] : x1_x0_pairs) {
        PropagatorResult direct = k_wkb(spec_, BvpProblem(x0, x1, t0_, t1_), 1.0, cfg_);
        worst = std::max(worst, std::abs(direct.action - action(x1, x0)));
        const double dj_rel = std::abs(direct.det_j - det_j(x1, x0)) /
                              std::max(1e-12, std::abs(direct.det_j));
        worst = std::max(worst, dj_rel * 1e-2); // fold det J mismatch into the defect
    }
    return worst;
}

KernelFn make_wkb_kernel(const HamiltonianSpec& spec, double t0, double t1, double hbar,
                         const ShootingConfig& cfg) {
    require_surface_spec(spec);
    if (spec.potential().quadratic()) {
        WkbKernelSurface surf = WkbKernelSurface::quadratic(spec, t0, t1, cfg);
        return surf.kernel_fn(hbar);
    }
    return [spec, t0, t1, hbar, cfg](double x1, double x0) {
        return k_wkb(spec, BvpProblem(x0, x1, t0, t1), hbar, cfg).amplitude;
    };
}

} // namespace semiclassic
