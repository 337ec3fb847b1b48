#ifndef SEMICLASSIC_ERRORS_HPP
#define SEMICLASSIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace semiclassic {

/// Base class for all failures raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive integrator stalled: step size shrank below the representable
/// floor (stiffness or finite-time blow-up, e.g. cubic-potential escape).
class StepSizeUnderflow : public Error {
public:
    StepSizeUnderflow(double tau, const std::string& what)
        : Error(what), tau_(tau) {}
    double tau() const { return tau_; }

private:
    double tau_;
};

/// Newton shooting failed to reach the residual tolerance.
class NoConvergence : public Error {
public:
    NoConvergence(double residual, int iterations, const std::string& what)
        : Error(what), residual_(residual), iterations_(iterations) {}
    double residual() const { return residual_; }
    int iterations() const { return iterations_; }

private:
    double residual_;
    int iterations_;
};

/// det J(t1,t0) fell below threshold during Newton shooting: the target
/// time sits (numerically) at a focal point.
class SingularShootingJacobian : public Error {
public:
    SingularShootingJacobian(double det_j, const std::string& what)
        : Error(what), det_j_(det_j) {}
    double det_j() const { return det_j_; }

private:
    double det_j_;
};

/// A focal point (zero of det J) at the requested endpoint.
class FocalPoint : public Error {
public:
    FocalPoint(double tau, const std::string& what) : Error(what), tau_(tau) {}
    double tau() const { return tau_; }

private:
    double tau_;
};

/// A focal point strictly inside the propagation interval.
class FocalPointInInterior : public Error {
public:
    FocalPointInInterior(double tau, const std::string& what)
        : Error(what), tau_(tau) {}
    double tau() const { return tau_; }

private:
    double tau_;
};

/// Operation defined only for 1-degree-of-freedom systems.
class NotOneDof : public Error {
public:
    using Error::Error;
};

/// Momentum vanishes at the requested time (kinetic energy zero).
class TurningPoint : public Error {
public:
    TurningPoint(double tau, const std::string& what) : Error(what), tau_(tau) {}
    double tau() const { return tau_; }

private:
    double tau_;
};

/// Momentum vanishes somewhere inside the quadrature interval; the
/// 1/y^2 integrand is singular and the closed-form hypothesis fails.
class TurningPointInInterval : public Error {
public:
    TurningPointInInterval(double tau, const std::string& what)
        : Error(what), tau_(tau) {}
    double tau() const { return tau_; }

private:
    double tau_;
};

/// Malformed or inconsistent run configuration (CLI surface).
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error(what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

} // namespace semiclassic

#endif
