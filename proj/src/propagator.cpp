#include "semiclassic/propagator.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <numbers>

#include "semiclassic/errors.hpp"
#include "semiclassic/parallel.hpp"

namespace semiclassic {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFocalDetJ = 1e-12;
const Complex kI{0.0, 1.0};

// refine a det J sign change between two node times
double refine_focal_time(const VariationalPath& path, double a, double b, double fa) {
    while (b - a > 1e-10) {
        const double m = 0.5 * (a + b);
        const double fm = path.det_J(m);
        if ((fa < 0.0) != (fm < 0.0))
            b = m;
        else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

} // namespace

PropagatorResult k_wkb(const HamiltonianSpec& spec, const BvpProblem& bvp, double hbar,
                       const ShootingConfig& cfg) {
    if (!(hbar > 0.0)) throw std::invalid_argument("k_wkb: requires hbar > 0");
    const int n = spec.dof();

    std::optional<ShootingSolution> maybe_sol;
    try {
        maybe_sol.emplace(solve_bvp_detailed(spec, bvp, cfg));
    } catch (const SingularShootingJacobian&) {
        throw FocalPoint(bvp.t1, "k_wkb: det J(t1,t0) below 1e-12 (focal point at t1)");
    }
    ShootingSolution& sol = *maybe_sol;
    const double det_j = sol.variational.at(bvp.t1).block_J().determinant();
    if (std::abs(det_j) < kFocalDetJ)
        throw FocalPoint(bvp.t1, "k_wkb: det J(t1,t0) below 1e-12 (focal point at t1)");

    // interior focal points: det J(tau) probed at the integrator nodes,
    // which resolve the solution scale by construction.  A root refined
    // into the closing fraction of the interval is the endpoint's focal
    // point seen through integration error, not an interior one.
    const double t1_guard = bvp.t1 - 1e-6 * (bvp.t1 - bvp.t0);
    const std::vector<double>& nodes = sol.variational.node_times();
    const std::vector<double> node_detj = sol.variational.node_det_J();
    for (std::size_t k = 1; k + 1 < nodes.size(); ++k) {
        const bool zero_here = std::abs(node_detj[k]) < kFocalDetJ;
        const bool sign_change = !zero_here && (node_detj[k] < 0.0) != (node_detj[k + 1] < 0.0);
        if (zero_here || sign_change) {
            const double tau = zero_here ? nodes[k]
                                         : refine_focal_time(sol.variational, nodes[k],
                                                             nodes[k + 1], node_detj[k]);
            if (tau >= t1_guard)
                throw FocalPoint(bvp.t1,
                                 "k_wkb: det J vanishes at t1 (focal point at t1)");
            throw FocalPointInInterior(
                tau, "k_wkb: focal point inside (t0, t1) at tau = " + std::to_string(tau));
        }
    }

    const double action = sol.trajectory.action();
    PropagatorResult result;
    result.action = action;
    result.det_j = det_j;
    result.hbar = hbar;
    result.dof = n;
    result.branch.phase_offset = -0.25 * kPi * n;
    result.branch.abs_det_j = true;
    const double modulus =
        std::pow(2.0 * kPi * hbar, -0.5 * n) / std::sqrt(std::abs(det_j));
    result.amplitude = std::polar(modulus, action / hbar + result.branch.phase_offset);
    return result;
}

Complex exact_kernel_free(const Eigen::VectorXd& mass, double hbar, const BvpProblem& bvp) {
    const double dt = bvp.t1 - bvp.t0;
    Complex k{1.0, 0.0};
    for (Eigen::Index i = 0; i < mass.size(); ++i) {
        const double modulus = std::sqrt(mass[i] / (2.0 * kPi * hbar * dt));
        const double dx = bvp.x1[i] - bvp.x0[i];
        k *= std::polar(modulus, mass[i] * dx * dx / (2.0 * hbar * dt) - 0.25 * kPi);
    }
    return k;
}

Complex exact_kernel_free(double mass, double hbar, const BvpProblem& bvp) {
    return exact_kernel_free(Eigen::VectorXd::Constant(bvp.x0.size(), mass), hbar, bvp);
}

Complex exact_kernel_ho(const Eigen::VectorXd& mass, double omega, double hbar,
                        const BvpProblem& bvp) {
    const double dt = bvp.t1 - bvp.t0;
    const double wt = omega * dt;
    const double s = std::sin(wt);
    if (std::abs(s) < 1e-12)
        throw FocalPoint(bvp.t1, "exact_kernel_ho: omega (t1 - t0) at a multiple of pi");
    if (wt <= 0.0 || wt >= kPi)
        throw std::invalid_argument(
            "exact_kernel_ho: valid on the first focal cell 0 < omega dt < pi only");
    const double c = std::cos(wt);
    Complex k{1.0, 0.0};
    for (Eigen::Index i = 0; i < mass.size(); ++i) {
        const double modulus = std::sqrt(mass[i] * omega / (2.0 * kPi * hbar * s));
        const double x0 = bvp.x0[i], x1 = bvp.x1[i];
        const double action =
            mass[i] * omega * ((x0 * x0 + x1 * x1) * c - 2.0 * x0 * x1) / (2.0 * s);
        k *= std::polar(modulus, action / hbar - 0.25 * kPi);
    }
    return k;
}

Complex exact_kernel_ho(double mass, double omega, double hbar, const BvpProblem& bvp) {
    return exact_kernel_ho(Eigen::VectorXd::Constant(bvp.x0.size(), mass), omega, hbar,
                           bvp);
}

Complex exact_kernel_forced(double mass, double omega, const Drive& drive, double hbar,
                            const BvpProblem& bvp, const ShootingConfig& cfg) {
    if (bvp.x0.size() != 1)
        throw NotOneDof("exact_kernel_forced: 1 degree of freedom only");
    const double dt = bvp.t1 - bvp.t0;
    const double wt = omega * dt;
    const double s = std::sin(wt);
    if (std::abs(s) < 1e-12)
        throw FocalPoint(bvp.t1, "exact_kernel_forced: omega (t1 - t0) at a multiple of pi");
    if (wt <= 0.0 || wt >= kPi)
        throw std::invalid_argument(
            "exact_kernel_forced: valid on the first focal cell 0 < omega dt < pi only");
    HamiltonianSpec spec(mass, Potential::harmonic(omega), drive);
    const double action = solve_bvp_shooting(spec, bvp, cfg).action();
    const double modulus = std::sqrt(mass * omega / (2.0 * kPi * hbar * s));
    return std::polar(modulus, action / hbar - 0.25 * kPi);
}

WavepacketGrid::WavepacketGrid(double x_min_, double x_max_, int n_points_, double t_)
    : x_min(x_min_), x_max(x_max_), n_points(n_points_), t(t_),
      values(static_cast<std::size_t>(n_points_), Complex{0.0, 0.0}) {
    if (n_points < 2) throw std::invalid_argument("WavepacketGrid: n_points >= 2");
    if (!(x_max > x_min)) throw std::invalid_argument("WavepacketGrid: x_max > x_min");
}

double WavepacketGrid::l2_norm() const {
    double acc = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double w = (i == 0 || i == n_points - 1) ? 0.5 : 1.0;
        acc += w * std::norm(values[static_cast<std::size_t>(i)]);
    }
    return std::sqrt(acc * dx());
}

double WavepacketGrid::width_rms() const {
    double mass0 = 0.0, mean = 0.0, second = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double w = (i == 0 || i == n_points - 1) ? 0.5 : 1.0;
        const double d = w * std::norm(values[static_cast<std::size_t>(i)]);
        mass0 += d;
        mean += d * x(i);
    }
    mean /= mass0;
    for (int i = 0; i < n_points; ++i) {
        const double w = (i == 0 || i == n_points - 1) ? 0.5 : 1.0;
        const double d = w * std::norm(values[static_cast<std::size_t>(i)]);
        second += d * (x(i) - mean) * (x(i) - mean);
    }
    return std::sqrt(2.0 * second / mass0);
}

WavepacketGrid WavepacketGrid::gaussian(double x_min, double x_max, int n_points,
                                        double center, double sigma, double momentum,
                                        double hbar) {
    WavepacketGrid g(x_min, x_max, n_points);
    const double norm = std::pow(kPi * sigma * sigma, -0.25);
    for (int i = 0; i < n_points; ++i) {
        const double d = g.x(i) - center;
        g.values[static_cast<std::size_t>(i)] =
            norm * std::exp(-d * d / (2.0 * sigma * sigma)) *
            std::polar(1.0, momentum * d / hbar);
    }
    return g;
}

WavepacketGrid propagate_wavepacket(const KernelFn& kernel, const WavepacketGrid& psi0,
                                    double t, PropagationReport* report) {
    const int n = psi0.n_points;
    const double dx = psi0.dx();

    double peak_in = 0.0;
    for (const Complex& v : psi0.values) peak_in = std::max(peak_in, std::abs(v));
    const double edge_in =
        std::max(std::abs(psi0.values.front()), std::abs(psi0.values.back()));

    WavepacketGrid out(psi0.x_min, psi0.x_max, n, t);
    parallel_for(n, [&](long i) {
        const double xi = out.x(static_cast<int>(i));
        Complex acc{0.0, 0.0};
        for (int j = 0; j < n; ++j) {
            const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            acc += w * kernel(xi, psi0.x(j)) * psi0.values[static_cast<std::size_t>(j)];
        }
        out.values[static_cast<std::size_t>(i)] = acc * dx;
    });

    double peak_out = 0.0;
    for (const Complex& v : out.values) peak_out = std::max(peak_out, std::abs(v));
    const double edge_out =
        std::max(std::abs(out.values.front()), std::abs(out.values.back()));
    if (report) {
        report->input_edge_ratio = (peak_in > 0.0) ? edge_in / peak_in : 0.0;
        report->output_edge_ratio = (peak_out > 0.0) ? edge_out / peak_out : 0.0;
        report->boundary_leak =
            report->input_edge_ratio >= 1e-12 || report->output_edge_ratio >= 1e-12;
    }
    return out;
}

Complex free_gaussian_evolution(double x, double t, double center, double sigma0,
                                double momentum, double mass, double hbar) {
    const Complex den{sigma0 * sigma0, hbar * t / mass};
    const double xs = x - center - momentum * t / mass;
    const Complex gauss =
        std::pow(kPi, -0.25) * std::sqrt(sigma0 / den) * std::exp(-xs * xs / (2.0 * den));
    const double phase = momentum * (x - center - momentum * t / (2.0 * mass)) / hbar;
    return gauss * std::polar(1.0, phase);
}

double free_gaussian_width(double t, double sigma0, double mass, double hbar) {
    const double r = hbar * t / (mass * sigma0 * sigma0);
    return sigma0 * std::sqrt(1.0 + r * r);
}

Complex coherent_state(double x, double t, double a, double mass, double omega,
                       double hbar) {
    const double xt = a * std::cos(omega * t);
    const double pt = -mass * omega * a * std::sin(omega * t);
    const double s_cl = -(mass * omega * a * a / 4.0) * std::sin(2.0 * omega * t);
    const double d = x - xt;
    return std::pow(mass * omega / (kPi * hbar), 0.25) *
           std::exp(-mass * omega * d * d / (2.0 * hbar)) *
           std::polar(1.0, (pt * d + s_cl) / hbar - 0.5 * omega * t);
}

} // namespace semiclassic
