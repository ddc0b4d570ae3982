#ifndef CORRSIM_QUADRATURE_HPP
#define CORRSIM_QUADRATURE_HPP

#include <functional>

namespace corrsim::quadrature {

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b] to the given
/// absolute tolerance. Throws std::runtime_error if the subdivision limit is
/// reached before the tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-11, int max_depth = 48);

} // namespace corrsim::quadrature

#endif
