#ifndef SEMICLASSIC_ODE_HPP
#define SEMICLASSIC_ODE_HPP

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace semiclassic {

struct OdeTolerance {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
};

using OdeRhs = std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Continuous solution of an IVP produced by the adaptive Dormand-Prince 5(4)
/// integrator.  Stores every accepted step together with the order-4
/// interpolation polynomial, so the solution can be evaluated anywhere in
/// [t_begin, t_end] without re-integration.
class OdeSolution {
public:
    double t_begin() const { return times_.front(); }
    double t_end() const { return times_.back(); }

    /// Dense evaluation; t is clamped to [t_begin, t_end].
    Eigen::VectorXd at(double t) const;
    /// Dense evaluation of a single component.
    double at(double t, Eigen::Index component) const;

    /// Accepted step times (strictly increasing, spanning the interval).
    const std::vector<double>& times() const { return times_; }
    /// States at the accepted step times.
    const std::vector<Eigen::VectorXd>& states() const { return states_; }

    Eigen::Index dim() const { return states_.front().size(); }

    /// Solution restricted to the leading k components (the dense
    /// interpolant of an augmented system projects componentwise).
    OdeSolution head(Eigen::Index k) const;

private:
    friend OdeSolution integrate_dopri5(const OdeRhs&, double, const Eigen::VectorXd&,
                                        double, const OdeTolerance&);
    struct DenseStep {
        double t0, h;
        // contd5 coefficients: y(t0 + s h) = r1 + s(r2 + (1-s)(r3 + s(r4 + (1-s) r5)))
        Eigen::VectorXd r1, r2, r3, r4, r5;
    };
    std::size_t locate(double t) const;

    std::vector<double> times_;
    std::vector<Eigen::VectorXd> states_;
    std::vector<DenseStep> steps_;
};

/// Integrate du/dt = f(t, u) from (t0, u0) to t1 > t0.
/// Throws StepSizeUnderflow if the controller stalls.
OdeSolution integrate_dopri5(const OdeRhs& f, double t0, const Eigen::VectorXd& u0,
                             double t1, const OdeTolerance& tol = {});

} // namespace semiclassic

#endif
