#ifndef SEMICLASSIC_KERNEL_GRID_HPP
#define SEMICLASSIC_KERNEL_GRID_HPP

#include "semiclassic/propagator.hpp"

namespace semiclassic {

/// Endpoint surface of the 1-dof WKB kernel over a fixed time interval:
/// the classical ingredients S(x1, x0) and det J(x1, x0), which do not
/// involve hbar, evaluated either in closed quadratic form (quadratic
/// Hamiltonians, where S is exactly a quadratic polynomial of the
/// endpoints and det J is endpoint-independent) or from a Hermite table
/// of shooting solves (anharmonic potentials).  One surface then serves
/// kernel evaluation at every hbar.
class WkbKernelSurface {
public:
    /// Quadratic route; valid for free/harmonic potentials with optional
    /// drive.  Fits the six polynomial coefficients from a 3x3 endpoint
    /// stencil of shooting solves and cross-checks the fit on extra pairs.
    static WkbKernelSurface quadratic(const HamiltonianSpec& spec, double t0, double t1,
                                      const ShootingConfig& cfg = {});

    /// Tabulated route over [x0_min, x0_max] x [x1_min, x1_max] with
    /// n0 x n1 nodes.  Node data (S, y0, y1, J) come from continuation
    /// shooting; S is interpolated by bicubic Hermite patches whose
    /// derivative data dS/dx1 = y1, dS/dx0 = -y0, d2S/dx0 dx1 = -1/J are
    /// exact at the nodes.
    static WkbKernelSurface tabulated(const HamiltonianSpec& spec, double t0, double t1,
                                      double x0_min, double x0_max, int n0, double x1_min,
                                      double x1_max, int n1, const ShootingConfig& cfg = {});

    double action(double x1, double x0) const;
    double det_j(double x1, double x0) const;
    Complex kernel(double x1, double x0, double hbar) const;
    KernelFn kernel_fn(double hbar) const;

    /// Largest |S_surface - S_direct| over the probe pairs, each direct
    /// value from an independent k_wkb shooting solve.
    double validate(const std::vector<std::pair<double, double>>& x1_x0_pairs) const;

    double t0() const { return t0_; }
    double t1() const { return t1_; }

private:
    WkbKernelSurface() = default;

    bool quadratic_ = true;
    HamiltonianSpec spec_{1.0, Potential::free_particle()};
    ShootingConfig cfg_;
    double t0_ = 0.0, t1_ = 1.0;

    // quadratic form S = c20 x1^2 + c11 x1 x0 + c02 x0^2 + c10 x1 + c01 x0 + c00
    Eigen::Matrix<double, 6, 1> coeff_ = Eigen::Matrix<double, 6, 1>::Zero();
    double det_j_const_ = 1.0;

    // table data (row r: x1 node, column c: x0 node)
    Eigen::VectorXd x0_nodes_, x1_nodes_;
    Eigen::MatrixXd s_, y0_, y1_, jj_;

    double table_lookup(double x1, double x0, bool want_detj) const;
};

/// Kernel function K_WKB(x1, x0) for a 1-dof spec over [t0, t1]: the
/// validated quadratic surface when the Hamiltonian is quadratic, else a
/// per-pair shooting fallback.
KernelFn make_wkb_kernel(const HamiltonianSpec& spec, double t0, double t1, double hbar,
                         const ShootingConfig& cfg = {});

} // namespace semiclassic

#endif
