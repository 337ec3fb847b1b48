#include "semiclassic/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace semiclassic {

Potential Potential::free_particle() {
    Potential p;
    p.kind_ = Kind::Free;
    return p;
}

Potential Potential::harmonic(double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::invalid_argument("harmonic potential requires omega > 0");
    Potential p;
    p.kind_ = Kind::Harmonic;
    p.omega_ = omega;
    return p;
}

Potential Potential::cubic(double lambda) {
    if (!std::isfinite(lambda))
        throw std::invalid_argument("cubic coefficient must be finite");
    Potential p;
    p.kind_ = Kind::Cubic;
    p.strength_ = lambda;
    return p;
}

Potential Potential::quartic(double lambda) {
    if (!std::isfinite(lambda))
        throw std::invalid_argument("quartic coefficient must be finite");
    Potential p;
    p.kind_ = Kind::Quartic;
    p.strength_ = lambda;
    return p;
}

Potential Potential::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty())
        throw std::invalid_argument("polynomial potential requires degree >= 0");
    for (double c : coeffs)
        if (!std::isfinite(c))
            throw std::invalid_argument("polynomial coefficients must be finite");
    Potential p;
    p.kind_ = Kind::Polynomial;
    p.coeffs_ = std::move(coeffs);
    return p;
}

namespace {

// Horner evaluation of sum_k c_k x^k; exact for polynomial data.
double horner(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
}

double horner_deriv(const std::vector<double>& c, double x, int order) {
    double v = 0.0;
    const int d = static_cast<int>(c.size()) - 1;
    for (int k = d; k >= order; --k) {
        double f = 1.0;
        for (int j = 0; j < order; ++j) f *= static_cast<double>(k - j);
        v = v * x + f * c[static_cast<std::size_t>(k)];
    }
    return v;
}

} // namespace

double Potential::value(double x, double mass) const {
    switch (kind_) {
    case Kind::Free: return 0.0;
    case Kind::Harmonic: return 0.5 * mass * omega_ * omega_ * x * x;
    case Kind::Cubic: return strength_ * x * x * x;
    case Kind::Quartic: return strength_ * x * x * x * x;
    case Kind::Polynomial: return horner(coeffs_, x);
    }
    return 0.0;
}

double Potential::grad(double x, double mass) const {
    switch (kind_) {
    case Kind::Free: return 0.0;
    case Kind::Harmonic: return mass * omega_ * omega_ * x;
    case Kind::Cubic: return 3.0 * strength_ * x * x;
    case Kind::Quartic: return 4.0 * strength_ * x * x * x;
    case Kind::Polynomial: return horner_deriv(coeffs_, x, 1);
    }
    return 0.0;
}

double Potential::curvature(double x, double mass) const {
    switch (kind_) {
    case Kind::Free: return 0.0;
    case Kind::Harmonic: return mass * omega_ * omega_;
    case Kind::Cubic: return 6.0 * strength_ * x;
    case Kind::Quartic: return 12.0 * strength_ * x * x;
    case Kind::Polynomial: return horner_deriv(coeffs_, x, 2);
    }
    return 0.0;
}

Drive Drive::constant(double c) {
    Drive d;
    d.kind_ = Kind::Constant;
    d.amplitude_ = c;
    return d;
}

Drive Drive::sinusoid(double amplitude, double omega, double phase) {
    Drive d;
    d.kind_ = Kind::Sinusoid;
    d.amplitude_ = amplitude;
    d.omega_ = omega;
    d.phase_ = phase;
    return d;
}

Drive Drive::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty())
        throw std::invalid_argument("polynomial drive requires at least one coefficient");
    Drive d;
    d.kind_ = Kind::Polynomial;
    d.coeffs_ = std::move(coeffs);
    return d;
}

double Drive::value(double tau) const {
    switch (kind_) {
    case Kind::Constant: return amplitude_;
    case Kind::Sinusoid: return amplitude_ * std::sin(omega_ * tau + phase_);
    case Kind::Polynomial: return horner(coeffs_, tau);
    }
    return 0.0;
}

PhaseState::PhaseState(double x_, double y_, double tau_)
    : x(Eigen::VectorXd::Constant(1, x_)), y(Eigen::VectorXd::Constant(1, y_)), tau(tau_) {}

HamiltonianSpec::HamiltonianSpec(Eigen::VectorXd mass, Potential potential,
                                 std::optional<Drive> drive)
    : mass_(std::move(mass)), potential_(std::move(potential)), drive_(std::move(drive)) {
    if (mass_.size() < 1)
        throw std::invalid_argument("mass: at least one degree of freedom required");
    for (Eigen::Index i = 0; i < mass_.size(); ++i)
        if (!(mass_[i] > 0.0) || !std::isfinite(mass_[i]))
            throw std::invalid_argument("mass must be positive componentwise");
    if (mass_.size() > 1 && !potential_.quadratic())
        throw std::invalid_argument("n > 1 supported only for free/harmonic potentials");
    if (drive_ && potential_.kind() != Potential::Kind::Harmonic)
        throw std::invalid_argument("a drive is only supported with a harmonic potential");
}

HamiltonianSpec::HamiltonianSpec(double mass, Potential potential, std::optional<Drive> drive)
    : HamiltonianSpec(Eigen::VectorXd::Constant(1, mass), std::move(potential),
                      std::move(drive)) {}

double HamiltonianSpec::potential_value(const Eigen::VectorXd& x) const {
    double v = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) v += potential_.value(x[i], mass_[i]);
    return v;
}

Eigen::VectorXd HamiltonianSpec::potential_grad(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = potential_.grad(x[i], mass_[i]);
    return g;
}

Eigen::VectorXd HamiltonianSpec::potential_curvature(const Eigen::VectorXd& x) const {
    Eigen::VectorXd c(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) c[i] = potential_.curvature(x[i], mass_[i]);
    return c;
}

double eval_hamiltonian(const HamiltonianSpec& spec, const PhaseState& s) {
    double h = spec.potential_value(s.x);
    for (Eigen::Index i = 0; i < s.y.size(); ++i)
        h += s.y[i] * s.y[i] / (2.0 * spec.mass()[i]);
    if (spec.drive()) h -= spec.drive()->value(s.tau) * s.x.sum();
    return h;
}

Eigen::VectorXd eval_vector_field(const HamiltonianSpec& spec, const PhaseState& s) {
    const int n = spec.dof();
    Eigen::VectorXd f(2 * n);
    f.head(n) = s.y.cwiseQuotient(spec.mass());
    f.tail(n) = -spec.potential_grad(s.x);
    if (spec.drive()) f.tail(n).array() += spec.drive()->value(s.tau);
    return f;
}

Eigen::MatrixXd eval_hessian(const HamiltonianSpec& spec, const PhaseState& s) {
    const int n = spec.dof();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    h.topLeftCorner(n, n).diagonal() = spec.potential_curvature(s.x);
    h.bottomRightCorner(n, n).diagonal() = spec.mass().cwiseInverse();
    return h;
}

double eval_lagrangian(const HamiltonianSpec& spec, const PhaseState& s) {
    double kinetic2 = 0.0; // y . xdot = y^2/m on shell
    for (Eigen::Index i = 0; i < s.y.size(); ++i)
        kinetic2 += s.y[i] * s.y[i] / spec.mass()[i];
    return kinetic2 - eval_hamiltonian(spec, s);
}

Eigen::MatrixXd symplectic_form(int n) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n).setIdentity();
    j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    return j;
}

} // namespace semiclassic
