#ifndef SEMICLASSIC_QUADRATURE_HPP
#define SEMICLASSIC_QUADRATURE_HPP

#include <functional>

namespace semiclassic {

/// Adaptive Gauss-Kronrod (G7,K15) quadrature of f over [a, b].
/// Bisects until the per-interval Kronrod/Gauss discrepancy meets
/// abs_tol + rel_tol * |integral|.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-12, double rel_tol = 1e-10);

} // namespace semiclassic

#endif
