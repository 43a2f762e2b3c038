#ifndef PROJLDP_SPHERE_HPP_
#define PROJLDP_SPHERE_HPP_

#include <cstddef>
#include <span>

#include "projldp/core.hpp"
#include "projldp/mc.hpp"
#include "projldp/rng.hpp"

namespace projldp {

// Uniform draw from the unit sphere in R^n: n independent standard normals,
// normalized. Deterministic for a fixed RngSpec.
Direction sample_sphere(int n, RngSpec rng);

// Decreasing order statistics of the absolute coordinates.
OrderStatVector order_statistics(const Direction& theta);

// Joint density of the first l coordinates of a uniform point on the unit
// sphere in R^n, evaluated at s:
//   f(s) = Gamma(n/2) / (pi^(l/2) Gamma((n-l)/2)) * (1 - |s|^2)^((n-l-2)/2).
// The constant is computed through log-gamma differences so large n does not
// overflow. Returns 0 on the boundary when the exponent is positive and +inf
// (the boundary-singularity signal) when it is negative; throws
// std::domain_error when |s|^2 > 1 + 1e-12.
double marginal_density(int n, int l, std::span<const double> s);

// P[|Theta_1| >= x] for a uniform direction in R^n; adaptive quadrature of
// the l = 1 marginal with the substitution s = 1 - u^2 near the endpoint.
// Relative tolerance 1e-10.
double marginal_tail(int n, double x);

enum class SectorVariant {
  FullBall,         // B_r(x) intersected with the unit ball
  OrderedPositive,  // additionally z_1 > z_2 > ... > z_l > 0
};

struct WindowIntegral {
  double value = 0.0;
  double std_error = 0.0;  // zero on the deterministic quadrature path
};

// Integral of the l-coordinate marginal density over the window ball
// intersected with the unit ball (and the ordered positive sector for the
// OrderedPositive variant). Deterministic nested quadrature for l <= 3
// (relative tolerance 1e-6); hit-or-miss Monte Carlo over the ball with the
// exact density for larger l, with the standard error reported.
// Requires l <= n - 2; throws std::domain_error when the window lies
// entirely outside the unit ball.
WindowIntegral integrate_density_over_window(int n, const WindowSpec& w,
                                             SectorVariant variant,
                                             RngSpec rng = {},
                                             std::size_t mc_count = 2'000'000,
                                             Exec exec = Exec::Parallel);

// `count` independent draws of <X, theta> with X uniform on the solid cube
// [-1,1]^n (ContinuousCube) or on the discrete cube {-1,+1}^n (DiscreteCube),
// sorted non-decreasing.
SampleSet sample_projection(const Direction& theta, ModelKind model,
                            std::size_t count, RngSpec rng,
                            Exec exec = Exec::Parallel);

namespace kernels {

// One-pass sphere sample reduced to what the window estimators need: the l
// largest absolute coordinates of the normalized vector, written in
// decreasing order to out[0..l). Avoids materializing the full direction.
void top_order_stats(int n, int l, Rng& rng, double* out);

// max_k |Theta_k| for one uniform direction in R^n.
double max_abs_coordinate(int n, Rng& rng);

}  // namespace kernels

namespace detail {

// log of the marginal-density normalizing constant, and the exponent of the
// (1 - |s|^2) factor.
struct DensityParams {
  double log_const;
  double expo;
};
DensityParams density_params(int n, int l);

// Integral of (r_sq - z^2)^expo over z in [a, b] clipped to [-R, R], via the
// substitution z = R sin(phi); smooth even when expo is -1/2.
double ball_slice_integral(double r_sq, double expo, double a, double b);

}  // namespace detail

}  // namespace projldp

#endif  // PROJLDP_SPHERE_HPP_
