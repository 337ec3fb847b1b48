#ifndef SEMICLASSIC_PROPAGATOR_HPP
#define SEMICLASSIC_PROPAGATOR_HPP

#include <complex>
#include <functional>

#include "semiclassic/gelfand_yaglom.hpp"

namespace semiclassic {

using Complex = std::complex<double>;

/// Record of the complex-root convention used by the prefactor:
/// (2 pi i hbar)^{-n/2} with the principal root i^{-1/2} = e^{-i pi/4}
/// per degree of freedom, and |det J| with no Maslov phase (valid under
/// the no-focal-point hypothesis).
struct PrefactorBranch {
    double phase_offset = 0.0; // -n pi / 4
    bool abs_det_j = true;
};

struct PropagatorResult {
    Complex amplitude;
    double action = 0.0;
    double det_j = 0.0;
    double hbar = 1.0;
    int dof = 1;
    PrefactorBranch branch;
};

/// Semiclassical propagator
///   K_WKB = (2 pi i hbar)^{-n/2} |det J(t1,t0)|^{-1/2} exp(i S(gamma)/hbar)
/// assembled from the shooting solution and the variational sweep.
/// Throws FocalPoint (endpoint), FocalPointInInterior (a det J root at the
/// integrator nodes inside (t0,t1)), or NoConvergence.
PropagatorResult k_wkb(const HamiltonianSpec& spec, const BvpProblem& bvp, double hbar,
                       const ShootingConfig& cfg = {});

/// Exact free-particle kernel, principal branch; per-coordinate masses.
Complex exact_kernel_free(const Eigen::VectorXd& mass, double hbar, const BvpProblem& bvp);
Complex exact_kernel_free(double mass, double hbar, const BvpProblem& bvp);

/// Exact harmonic-oscillator (Mehler) kernel, valid on the first focal
/// cell 0 < omega dt < pi.  Throws FocalPoint at omega dt in pi Z.
Complex exact_kernel_ho(const Eigen::VectorXd& mass, double omega, double hbar,
                        const BvpProblem& bvp);
Complex exact_kernel_ho(double mass, double omega, double hbar, const BvpProblem& bvp);

/// Forced-oscillator kernel: harmonic prefactor, phase from the forced
/// classical action computed on the shooting solution (1-dof).
Complex exact_kernel_forced(double mass, double omega, const Drive& drive, double hbar,
                            const BvpProblem& bvp, const ShootingConfig& cfg = {});

/// Uniform complex amplitude grid psi(x_i) at a fixed time.
struct WavepacketGrid {
    double x_min = -1.0, x_max = 1.0;
    int n_points = 2;
    double t = 0.0;
    std::vector<Complex> values;

    WavepacketGrid() = default;
    WavepacketGrid(double x_min_, double x_max_, int n_points_, double t_ = 0.0);

    double dx() const { return (x_max - x_min) / (n_points - 1); }
    double x(int i) const { return x_min + i * dx(); }
    double l2_norm() const; // trapezoid of |psi|^2
    double width_rms() const; // sqrt(2 <x^2>) about the density centroid

    /// Normalized Gaussian (pi sigma^2)^{-1/4} exp(-(x-c)^2/(2 sigma^2)
    /// + i p (x-c)/hbar) sampled on the grid.
    static WavepacketGrid gaussian(double x_min, double x_max, int n_points, double center,
                                   double sigma, double momentum, double hbar);
};

struct PropagationReport {
    bool boundary_leak = false; // decay precondition violated at input or output
    double input_edge_ratio = 0.0;
    double output_edge_ratio = 0.0;
};

using KernelFn = std::function<Complex(double x1, double x0)>;

/// psi(x, t) = int K(x, t | x0, t0) psi0(x0) dx0 by trapezoidal quadrature
/// on the grid; output coordinates equal input coordinates.
WavepacketGrid propagate_wavepacket(const KernelFn& kernel, const WavepacketGrid& psi0,
                                    double t, PropagationReport* report = nullptr);

/// Analytic free evolution of the Gaussian above (spreading packet).
Complex free_gaussian_evolution(double x, double t, double center, double sigma0,
                                double momentum, double mass, double hbar);
/// Spreading width sigma(t) = sigma0 sqrt(1 + (hbar t / m sigma0^2)^2).
double free_gaussian_width(double t, double sigma0, double mass, double hbar);

/// Analytic evolution of the coherent state launched at rest from
/// center a: Gaussian of width sqrt(hbar/(m omega)) riding the classical
/// trajectory with the classical-action phase.
Complex coherent_state(double x, double t, double a, double mass, double omega,
                       double hbar);

} // namespace semiclassic

#endif
