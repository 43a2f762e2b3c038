#ifndef PROJLDP_LIMITLAW_HPP_
#define PROJLDP_LIMITLAW_HPP_

#include <cstddef>
#include <functional>

#include "projldp/core.hpp"
#include "projldp/mc.hpp"
#include "projldp/rng.hpp"

namespace projldp {

// The limit family: a Gaussian remainder of weight sqrt(1 - |alpha|^2) plus
// one uniform (ContinuousCube) or Rademacher (DiscreteCube) spike per alpha
// entry. The Gaussian coefficient is always recomputed from alpha.
struct LimitLaw {
  AlphaSequence alpha;
  ModelKind model = ModelKind::ContinuousCube;

  double gauss_coeff_sq() const { return 1.0 - alpha.norm_sq(); }
};

// sin(x)/x with the Taylor fallback 1 - x^2/6 + x^4/120 for |x| < 1e-4.
double sinc(double x);

// Characteristic function, real and even:
//   continuous: exp(-(1-|a|^2) t^2 / 6) * prod_k sinc(a_k t)
//   discrete:   exp(-(1-|a|^2) t^2 / 2) * prod_k cos(a_k t)
double char_fn(const LimitLaw& law, double t);

// CDF by sine inversion of the characteristic function,
//   F(x) = 1/2 + (1/pi) int_0^inf sin(tx) phi(t)/t dt,
// truncated where the Gaussian factor drops below 1e-14 and integrated in
// panels tied to the oscillation period. Absolute error target 1e-8.
// Requires |alpha|_2 < 1; throws std::domain_error otherwise.
double limit_cdf(const LimitLaw& law, double x);

// Density by cosine inversion, p(x) = (1/pi) int_0^inf cos(tx) phi(t) dt,
// same truncation policy; tiny negative round-off (> -1e-10) clamps to 0.
double limit_pdf(const LimitLaw& law, double x);

// `count` independent draws from the law, sorted non-decreasing.
SampleSet sample_limit(const LimitLaw& law, std::size_t count, RngSpec rng,
                       Exec exec = Exec::Parallel);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// Mean 0 exactly; variance (1-|a|^2) sigma_Z^2 + |a|^2 sigma_atom^2, which is
// 1/3 for the continuous model and 1 for the discrete one.
Moments moments(const LimitLaw& law);

enum class RecoverStatus {
  NoZeroFound,      // no zero below the min_spike threshold; recovery done
  MaxSpikesReached, // stopped after max_spikes recoveries
  ZeroCollision,    // candidate zero sits on a divided-factor zero; halted
};

struct RecoverResult {
  AlphaSequence alpha;
  RecoverStatus status = RecoverStatus::NoZeroFound;
  // Whether the final residual passed the pure-Gaussian fit
  // |log r(t) + c t^2| < 1e-8 on the test grid, and the fitted c.
  bool residual_gaussian = false;
  double residual_curvature = 0.0;
};

// Recovers the spike sequence from a characteristic function evaluator by
// repeatedly locating the smallest positive zero (spike a = pi/t* for the
// continuous model, pi/(2 t*) for the discrete one), dividing that factor
// out, and rescanning. Division near a divided-factor zero is evaluated by
// a local first-order expansion instead of the raw quotient.
RecoverResult recover_alpha(const std::function<double(double)>& phi,
                            ModelKind model, int max_spikes,
                            double min_spike);

// Kolmogorov-Smirnov distance between the empirical CDF of a sorted sample
// and a reference CDF, using both one-sided empirical limits.
double ks_distance(const SampleSet& samples,
                   const std::function<double(double)>& cdf);

// Piecewise-linear table of limit_cdf over the effective support, clamped to
// 0/1 outside. Interpolation error is a few 1e-7 at the default resolution;
// meant for KS statistics over large samples where evaluating the inversion
// integral per point would dominate.
std::function<double(double)> make_cdf_interpolator(const LimitLaw& law,
                                                    std::size_t grid_points =
                                                        4097);

}  // namespace projldp

#endif  // PROJLDP_LIMITLAW_HPP_
