#include "semiclassic/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace semiclassic {

namespace {

// QUADPACK (G7,K15) nodes and weights on [-1, 1], positive half.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = wgk[7] * fc;
    double gauss = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = hl * xgk[j];
        const double fsum = f(c - dx) + f(c + dx);
        kronrod += wgk[j] * fsum;
        if (j % 2 == 1) gauss += wg[j / 2] * fsum;
    }
    return {a, b, kronrod * hl, std::abs(kronrod - gauss) * hl};
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol) {
    if (a == b) return 0.0;
    const double sign = (b > a) ? 1.0 : -1.0;
    if (b < a) std::swap(a, b);

    std::vector<Panel> panels{gk15(f, a, b)};
    for (int round = 0; round < 60; ++round) {
        double total = 0.0, err = 0.0;
        for (const Panel& p : panels) {
            total += p.value;
            err += p.error;
        }
        const double target = abs_tol + rel_tol * std::abs(total);
        if (err <= target) return sign * total;
        if (panels.size() > 20000)
            throw std::runtime_error("integrate_adaptive: too many subdivisions");

        // split every panel whose share of the error budget is exceeded
        std::vector<Panel> next;
        next.reserve(panels.size() * 2);
        const double per = target / static_cast<double>(panels.size());
        for (const Panel& p : panels) {
            if (p.error > 0.5 * per && (p.b - p.a) > 1e-14 * (b - a)) {
                const double m = 0.5 * (p.a + p.b);
                next.push_back(gk15(f, p.a, m));
                next.push_back(gk15(f, m, p.b));
            } else {
                next.push_back(p);
            }
        }
        panels.swap(next);
    }
    double total = 0.0;
    for (const Panel& p : panels) total += p.value;
    return sign * total;
}

} // namespace semiclassic
