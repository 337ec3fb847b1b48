#include "semiclassic/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "semiclassic/errors.hpp"

namespace semiclassic {

namespace {

// Dormand-Prince 5(4) tableau (Hairer, Norsett & Wanner, DOPRI5).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// y1 - yhat1 weights for the embedded order-4 error estimate.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

double initial_step(const OdeRhs& f, double t0, const Eigen::VectorXd& u0,
                    const Eigen::VectorXd& f0, double span, const OdeTolerance& tol) {
    // Hairer's starting-step heuristic, order 5.
    const Eigen::Index n = u0.size();
    double dnf = 0.0, dny = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double sk = tol.abs_tol + tol.rel_tol * std::abs(u0[i]);
        if (!(sk > 0.0)) continue;
        dnf += (f0[i] / sk) * (f0[i] / sk);
        dny += (u0[i] / sk) * (u0[i] / sk);
    }
    double h = (!std::isfinite(dnf + dny) || dnf <= 1e-10 || dny <= 1e-10)
                   ? 1e-6 * span
                   : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, span);
    Eigen::VectorXd u1 = u0 + h * f0;
    Eigen::VectorXd f1(n);
    f(t0 + h, u1, f1);
    double der2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double sk = tol.abs_tol + tol.rel_tol * std::abs(u0[i]);
        if (!(sk > 0.0)) continue;
        der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
    }
    der2 = std::sqrt(der2) / h;
    if (!std::isfinite(der2)) return 1e-6 * span;
    const double der12 = std::max(der2, std::sqrt(dnf));
    const double h1 = (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3)
                                       : std::pow(0.01 / der12, 1.0 / 5.0);
    return std::min({100.0 * h, h1, span});
}

} // namespace

std::size_t OdeSolution::locate(double t) const {
    // index of the dense step containing t
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t k = static_cast<std::size_t>(std::distance(times_.begin(), it));
    if (k == 0) return 0;
    if (k > steps_.size()) return steps_.size() - 1;
    return k - 1;
}

Eigen::VectorXd OdeSolution::at(double t) const {
    t = std::clamp(t, t_begin(), t_end());
    const DenseStep& st = steps_[locate(t)];
    const double s = (t - st.t0) / st.h;
    return st.r1 + s * (st.r2 + (1.0 - s) * (st.r3 + s * (st.r4 + (1.0 - s) * st.r5)));
}

double OdeSolution::at(double t, Eigen::Index i) const {
    t = std::clamp(t, t_begin(), t_end());
    const DenseStep& st = steps_[locate(t)];
    const double s = (t - st.t0) / st.h;
    return st.r1[i] +
           s * (st.r2[i] + (1.0 - s) * (st.r3[i] + s * (st.r4[i] + (1.0 - s) * st.r5[i])));
}

OdeSolution OdeSolution::head(Eigen::Index k) const {
    OdeSolution out;
    out.times_ = times_;
    out.states_.reserve(states_.size());
    for (const auto& s : states_) out.states_.push_back(s.head(k));
    out.steps_.reserve(steps_.size());
    for (const auto& st : steps_)
        out.steps_.push_back(DenseStep{st.t0, st.h, st.r1.head(k), st.r2.head(k),
                                       st.r3.head(k), st.r4.head(k), st.r5.head(k)});
    return out;
}

OdeSolution integrate_dopri5(const OdeRhs& f, double t0, const Eigen::VectorXd& u0,
                             double t1, const OdeTolerance& tol) {
    if (!(t1 > t0)) throw std::invalid_argument("integrate_dopri5: requires t1 > t0");
    const Eigen::Index n = u0.size();
    const double span = t1 - t0;

    OdeSolution sol;
    sol.times_.push_back(t0);
    sol.states_.push_back(u0);

    Eigen::VectorXd y = u0, ynew(n), err(n);
    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n);
    f(t0, y, k1);

    double t = t0;
    double h = initial_step(f, t0, y, k1, span, tol);
    const double uround = std::numeric_limits<double>::epsilon();
    bool last_rejected = false;
    long n_steps = 0;
    constexpr long max_steps = 100000000L;

    while (t < t1) {
        if (h < 32.0 * uround * std::max(std::abs(t), 1.0))
            throw StepSizeUnderflow(
                t, "integrate_dopri5: step size underflow at tau = " + std::to_string(t));
        if (++n_steps > max_steps)
            throw StepSizeUnderflow(
                t, "integrate_dopri5: step budget exhausted at tau = " + std::to_string(t));
        bool clamped = false;
        if (t + h >= t1) {
            h = t1 - t;
            clamped = true;
        }

        ytmp = y + h * (a21 * k1);
        f(t + c2 * h, ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        f(t + c3 * h, ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        f(t + c4 * h, ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        f(t + c5 * h, ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        f(t + h, ytmp, k6);
        ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        f(t + h, ynew, k7); // FSAL
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err_norm = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sk =
                tol.abs_tol + tol.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err_norm += (err[i] / sk) * (err[i] / sk);
        }
        err_norm = std::sqrt(err_norm / static_cast<double>(n));

        if (err_norm <= 1.0) {
            // accept: record dense coefficients for [t, t+h]
            OdeSolution::DenseStep st;
            st.t0 = t;
            st.h = h;
            st.r1 = y;
            st.r2 = ynew - y;
            st.r3 = h * k1 - st.r2;
            st.r4 = st.r2 - h * k7 - st.r3;
            st.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            sol.steps_.push_back(std::move(st));

            // a clamped step must land on t1 exactly, not one ulp short
            t = clamped ? t1 : t + h;
            y.swap(ynew);
            k1.swap(k7);
            sol.times_.push_back(t);
            sol.states_.push_back(y);

            double fac = 0.9 * std::pow(std::max(err_norm, 1e-16), -0.2);
            fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
            if (!clamped) h *= fac;
            last_rejected = false;
        } else {
            const double fac = std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
            h *= fac;
            last_rejected = true;
        }
    }
    return sol;
}

} // namespace semiclassic
