#ifndef PROJLDP_QUADRATURE_HPP_
#define PROJLDP_QUADRATURE_HPP_

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace projldp::quad {

// Adaptive Gauss-Kronrod (15-point rule, recursive bisection).
template <typename F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10,
                 int max_depth = 15) {
  if (!(a < b)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, max_depth, rel_tol);
}

}  // namespace projldp::quad

#endif  // PROJLDP_QUADRATURE_HPP_
