#ifndef SEMICLASSIC_HAMILTONIAN_HPP
#define SEMICLASSIC_HAMILTONIAN_HPP

#include <optional>
#include <vector>

#include <Eigen/Core>

namespace semiclassic {

/// Closed family of potentials with exact derivatives.  All variants act
/// per coordinate; the harmonic stiffness is m*omega^2, so evaluation
/// takes the coordinate mass alongside the position.
class Potential {
public:
    enum class Kind { Free, Harmonic, Cubic, Quartic, Polynomial };

    static Potential free_particle();
    static Potential harmonic(double omega);
    static Potential cubic(double lambda);
    static Potential quartic(double lambda);
    static Potential polynomial(std::vector<double> coeffs); // c0 + c1 x + ...

    Kind kind() const { return kind_; }
    double omega() const { return omega_; }
    double strength() const { return strength_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

    double value(double x, double mass) const;
    double grad(double x, double mass) const;
    double curvature(double x, double mass) const;

    bool quadratic() const { return kind_ == Kind::Free || kind_ == Kind::Harmonic; }

private:
    Potential() = default;
    Kind kind_ = Kind::Free;
    double omega_ = 0.0;    // harmonic
    double strength_ = 0.0; // cubic/quartic coefficient
    std::vector<double> coeffs_;
};

/// Time-dependent scalar drive gamma(tau) for the forced oscillator,
/// restricted to a family whose action stays integrable to quadrature.
class Drive {
public:
    enum class Kind { Constant, Sinusoid, Polynomial };

    static Drive constant(double c);
    static Drive sinusoid(double amplitude, double omega, double phase);
    static Drive polynomial(std::vector<double> coeffs);

    Kind kind() const { return kind_; }
    double value(double tau) const;
    double operator()(double tau) const { return value(tau); }

    double amplitude() const { return amplitude_; }
    double omega() const { return omega_; }
    double phase() const { return phase_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

private:
    Drive() = default;
    Kind kind_ = Kind::Constant;
    double amplitude_ = 0.0;
    double omega_ = 0.0;
    double phase_ = 0.0;
    std::vector<double> coeffs_;
};

/// Point of extended phase space: positions x, conjugate momenta y, time.
struct PhaseState {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    double tau = 0.0;

    PhaseState() = default;
    PhaseState(Eigen::VectorXd x_, Eigen::VectorXd y_, double tau_)
        : x(std::move(x_)), y(std::move(y_)), tau(tau_) {}
    /// 1-dof convenience.
    PhaseState(double x_, double y_, double tau_);
};

/// Natural Hamiltonian H = sum_i y_i^2/(2 m_i) + V(x) - gamma(tau).sum_i x_i.
/// Mass matrix is diagonal; n > 1 requires a free or harmonic potential
/// and a drive requires a harmonic one.
class HamiltonianSpec {
public:
    HamiltonianSpec(Eigen::VectorXd mass, Potential potential,
                    std::optional<Drive> drive = std::nullopt);
    /// 1-dof convenience with scalar mass.
    HamiltonianSpec(double mass, Potential potential,
                    std::optional<Drive> drive = std::nullopt);

    int dof() const { return static_cast<int>(mass_.size()); }
    const Eigen::VectorXd& mass() const { return mass_; }
    double mass_scalar() const { return mass_[0]; }
    const Potential& potential() const { return potential_; }
    const std::optional<Drive>& drive() const { return drive_; }
    bool autonomous() const { return !drive_.has_value(); }

    double potential_value(const Eigen::VectorXd& x) const;
    Eigen::VectorXd potential_grad(const Eigen::VectorXd& x) const;
    /// Diagonal of the (diagonal) position-space Hessian V''(x).
    Eigen::VectorXd potential_curvature(const Eigen::VectorXd& x) const;

private:
    Eigen::VectorXd mass_;
    Potential potential_;
    std::optional<Drive> drive_;
};

/// H(x, y, tau).
double eval_hamiltonian(const HamiltonianSpec& spec, const PhaseState& s);

/// Symplectic gradient (dx/dtau, dy/dtau) = (y/m, -V'(x) + gamma(tau)).
Eigen::VectorXd eval_vector_field(const HamiltonianSpec& spec, const PhaseState& s);

/// Full 2n x 2n Hessian of H in state order (x, y): blkdiag(V''(x), 1/m).
Eigen::MatrixXd eval_hessian(const HamiltonianSpec& spec, const PhaseState& s);

/// On-shell Lagrangian y.xdot - H with xdot = y/m.
double eval_lagrangian(const HamiltonianSpec& spec, const PhaseState& s);

/// Standard symplectic matrix [[0, I],[-I, 0]] of size 2n.
Eigen::MatrixXd symplectic_form(int n);

} // namespace semiclassic

#endif
