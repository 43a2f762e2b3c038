#include "projldp/limitlaw.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "projldp/quadrature.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace projldp {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Divided quotients switch to a local expansion this close to a factor zero.
constexpr double kSingularWindow = 1e-6;

double gauss_decay_rate(const LimitLaw& law) {
  return law.gauss_coeff_sq() /
         (law.model == ModelKind::ContinuousCube ? 6.0 : 2.0);
}

}  // namespace

double sinc(double x) {
  const double a = std::abs(x);
  if (a < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double char_fn(const LimitLaw& law, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("char_fn: t not finite");
  double value = std::exp(-gauss_decay_rate(law) * t * t);
  if (law.model == ModelKind::ContinuousCube) {
    for (double a : law.alpha.entries()) value *= sinc(a * t);
  } else {
    for (double a : law.alpha.entries()) value *= std::cos(a * t);
  }
  return value;
}

namespace {

// Truncation point: the Gaussian factor is below 1e-14 past here, so the
// discarded tail of the inversion integral is negligible at the 1e-8 target.
double inversion_cutoff(const LimitLaw& law) {
  const double rate = gauss_decay_rate(law);
  if (rate <= 0.0) {
    throw std::domain_error("inversion requires |alpha|_2 < 1");
  }
  return std::sqrt(std::log(1e14) / rate);
}

// Sum of panel integrals over [0, T]; panel width follows the oscillation
// period of the integrand.
template <typename F>
double integrate_oscillatory(F&& f, double cutoff, double freq) {
  const double width = kPi / std::max(1.0, std::abs(freq));
  double total = 0.0;
  for (double a = 0.0; a < cutoff; a += width) {
    const double b = std::min(a + width, cutoff);
    total += quad::integrate(f, a, b, 1e-10, 12);
  }
  return total;
}

}  // namespace

double limit_cdf(const LimitLaw& law, double x) {
  const double cutoff = inversion_cutoff(law);
  auto integrand = [&law, x](double t) {
    if (t < 1e-12) return x;  // sin(tx)/t -> x and phi(0) = 1
    return std::sin(t * x) * char_fn(law, t) / t;
  };
  const double integral = integrate_oscillatory(integrand, cutoff, x);
  return std::clamp(0.5 + integral / kPi, 0.0, 1.0);
}

double limit_pdf(const LimitLaw& law, double x) {
  const double cutoff = inversion_cutoff(law);
  auto integrand = [&law, x](double t) { return std::cos(t * x) * char_fn(law, t); };
  double value = integrate_oscillatory(integrand, cutoff, x) / kPi;
  if (value < 0.0 && value > -1e-10) value = 0.0;
  return value;
}

SampleSet sample_limit(const LimitLaw& law, std::size_t count, RngSpec rng,
                       Exec exec) {
  if (count < 1) throw std::invalid_argument("sample_limit: count >= 1");
  const double gauss_scale =
      std::sqrt(law.gauss_coeff_sq()) *
      (law.model == ModelKind::ContinuousCube ? 0.57735026918962576451 : 1.0);
  const std::vector<double>& spikes = law.alpha.entries();
  std::vector<double> values;
  if (law.model == ModelKind::ContinuousCube) {
    values = mc::generate(
        count, rng,
        [gauss_scale, &spikes](Rng& r) {
          double v = gauss_scale * r.normal();
          for (double a : spikes) v += a * r.uniform_pm1();
          return v;
        },
        exec);
  } else {
    values = mc::generate(
        count, rng,
        [gauss_scale, &spikes](Rng& r) {
          double v = gauss_scale * r.normal();
          for (double a : spikes) v += a * r.rademacher();
          return v;
        },
        exec);
  }
  std::sort(values.begin(), values.end());
  return SampleSet{std::move(values), rng.seed};
}

Moments moments(const LimitLaw& law) {
  const double s = law.alpha.norm_sq();
  const double atom_var = law.model == ModelKind::ContinuousCube ? 1.0 / 3.0 : 1.0;
  const double gauss_var = law.model == ModelKind::ContinuousCube ? 1.0 / 3.0 : 1.0;
  return {0.0, (1.0 - s) * gauss_var + s * atom_var};
}

namespace {

// phi divided by the factors of the spikes recovered so far. Near a zero of
// a divided factor the raw quotient is ill-conditioned; there the value comes
// from a quadratic model of the remaining numerator over the factor's linear
// slope, built from evaluations just outside the singular window.
class DividedPhi {
 public:
  DividedPhi(const std::function<double(double)>& phi, ModelKind model)
      : phi_(phi), model_(model) {}

  void push_spike(double a) { spikes_.push_back(a); }
  const std::vector<double>& spikes() const { return spikes_; }

  double factor(double a, double t) const {
    return model_ == ModelKind::ContinuousCube ? sinc(a * t) : std::cos(a * t);
  }

  // Zero of this spike's factor closest to t (first zero at pi/a for sinc,
  // pi/(2a) for cos).
  double nearest_factor_zero(double a, double t) const {
    if (model_ == ModelKind::ContinuousCube) {
      double m = std::round(t * a / kPi);
      if (m < 1.0) m = 1.0;
      return m * kPi / a;
    }
    double m = std::round(t * a / kPi - 0.5);
    if (m < 0.0) m = 0.0;
    return (m + 0.5) * kPi / a;
  }

  struct PoleInfo {
    bool near = false;
    std::size_t factor_index = 0;
    double pole = 0.0;
  };

  PoleInfo pole_near(double t, double window) const {
    for (std::size_t k = 0; k < spikes_.size(); ++k) {
      const double z = nearest_factor_zero(spikes_[k], t);
      if (std::abs(t - z) < window) return {true, k, z};
    }
    return {};
  }

  double operator()(double t) const {
    for (int attempt = 0; attempt < 4; ++attempt) {
      int singular = -1;
      int singular_count = 0;
      double zero = 0.0;
      for (std::size_t k = 0; k < spikes_.size(); ++k) {
        const double z = nearest_factor_zero(spikes_[k], t);
        if (std::abs(t - z) < kSingularWindow) {
          ++singular_count;
          singular = static_cast<int>(k);
          zero = z;
        }
      }
      if (singular_count == 0) return raw(t);
      if (singular_count == 1) {
        return local_model(static_cast<std::size_t>(singular), zero).at(t);
      }
      // two divided factors share a zero here; step off the overlap
      t += 3.0 * kSingularWindow;
    }
    return raw(t);
  }

  // Quadratic model of the numerator (phi over the other factors) around the
  // pole of factor k, divided by the factor's linear slope. Valid inside the
  // singular window; also reports how strongly the numerator fails to vanish
  // at the pole, which is what separates a cancelling zero from a genuine
  // pole.
  struct LocalModel {
    double pole;
    double n0;      // numerator at the pole
    double n1;      // first derivative
    double n2;      // second derivative
    double slope;   // factor derivative at the pole
    double scale;   // numerator magnitude just outside the window

    double at(double t) const {
      const double d = t - pole;
      const double num = n0 + n1 * d + 0.5 * n2 * d * d;
      if (d == 0.0) {
        return n0 == 0.0 ? n1 / slope
                         : (n0 > 0.0 ? INFINITY : -INFINITY) / slope;
      }
      return num / (slope * d);
    }

    // true when the numerator does not vanish at the pole, so the division
    // has nothing to cancel against
    bool genuine_pole() const { return std::abs(n0) > 0.25 * scale; }
  };

  LocalModel local_model(std::size_t k, double pole) const {
    const double h = 1e-5;  // outside the singular window
    const double n_minus = numerator_excluding(k, pole - h);
    const double n_zero = numerator_excluding(k, pole);
    const double n_plus = numerator_excluding(k, pole + h);
    const double a = spikes_[k];
    const double slope = model_ == ModelKind::ContinuousCube
                             ? std::cos(a * pole) / pole
                             : -a * std::sin(a * pole);
    return {pole,
            n_zero,
            (n_plus - n_minus) / (2.0 * h),
            (n_plus - 2.0 * n_zero + n_minus) / (h * h),
            slope,
            std::max(std::abs(n_plus), std::abs(n_minus))};
  }

 private:
  double raw(double t) const {
    double v = phi_(t);
    for (double a : spikes_) v /= factor(a, t);
    return v;
  }

  double numerator_excluding(std::size_t skip, double t) const {
    double v = phi_(t);
    for (std::size_t k = 0; k < spikes_.size(); ++k) {
      if (k != skip) v /= factor(spikes_[k], t);
    }
    return v;
  }

  const std::function<double(double)>& phi_;
  ModelKind model_;
  std::vector<double> spikes_;
};

double bisect_zero(const DividedPhi& g, double a, double b) {
  double fa = g(a);
  for (int iter = 0; iter < 200 && (b - a) > 1e-12 * b; ++iter) {
    const double m = 0.5 * (a + b);
    const double fm = g(m);
    if (fm == 0.0) return m;
    if (std::signbit(fm) == std::signbit(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Coarse scan grid: geometric warm-up then fixed step pi/4, a quarter of the
// smallest possible spacing of factor zeros (spacing pi/a with a <= 1).
std::vector<double> scan_grid(double t_max) {
  const double step = kPi / 4.0;
  std::vector<double> grid;
  for (double t = 1e-3; t < step; t *= 2.0) grid.push_back(t);
  for (double t = step; t <= t_max + 0.5 * step; t += step) grid.push_back(t);
  return grid;
}

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  bool found = false;
};

// Sign scan over an explicit grid. Points inside a singular window are
// skipped: a finite-precision recovered spike leaves a microscopic zero/pole
// sliver at each divided-factor zero with no net sign change across it, and
// sampling inside the sliver would turn it into a phantom bracket. Genuine
// zeros flip the clean values on both sides.
Bracket scan_for_sign_change(const DividedPhi& g,
                             const std::vector<double>& grid) {
  bool have_prev = false;
  double prev_t = 0.0;
  double prev_v = 0.0;
  for (double t : grid) {
    if (g.pole_near(t, 2.0 * kSingularWindow).near) continue;
    const double v = g(t);
    if (have_prev &&
        (v == 0.0 || std::signbit(v) != std::signbit(prev_v))) {
      return {prev_t, t, true};
    }
    have_prev = true;
    prev_t = t;
    prev_v = v;
  }
  return {};
}

std::vector<double> linear_grid(double t_lo, double t_hi, double step) {
  std::vector<double> grid;
  for (double t = t_lo; t <= t_hi + 0.5 * step; t += step) grid.push_back(t);
  return grid;
}

// Smallest sign change of g on (0, t_max]. The coarse quarter-spacing grid
// cannot skip a zero of a single factor, but zeros of two nearby spikes can
// cancel inside one cell; the fixed 0.01 rescan (capped at t = 1e3) recovers
// those.
Bracket find_first_zero(const DividedPhi& g, double t_max) {
  const Bracket coarse = scan_for_sign_change(g, scan_grid(t_max));
  const double fine_hi = std::min(coarse.found ? coarse.hi : t_max, 1e3);
  const Bracket fine =
      scan_for_sign_change(g, linear_grid(1e-3, fine_hi, 0.01));
  if (fine.found) return fine;
  return coarse;
}

struct ResidualFit {
  bool gaussian = false;
  double curvature = 0.0;
};

// Pure-Gaussian residual test: fit log r(t) = -c t^2 by least squares on a
// fixed grid and check the fit is tight to 1e-8.
ResidualFit fit_gaussian_residual(const DividedPhi& g) {
  std::array<double, 15> ts{};
  for (std::size_t i = 0; i < ts.size(); ++i) {
    ts[i] = 0.2 + 0.2 * static_cast<double>(i);
  }
  double num = 0.0;
  double den = 0.0;
  std::array<double, 15> logs{};
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = g(ts[i]);
    if (!(r > 0.0)) return {false, 0.0};
    logs[i] = std::log(r);
    num += ts[i] * ts[i] * logs[i];
    den += ts[i] * ts[i] * ts[i] * ts[i];
  }
  const double c = -num / den;
  double max_dev = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    max_dev = std::max(max_dev, std::abs(logs[i] + c * ts[i] * ts[i]));
  }
  return {max_dev < 1e-8, c};
}

}  // namespace

RecoverResult recover_alpha(const std::function<double(double)>& phi,
                            ModelKind model, int max_spikes,
                            double min_spike) {
  if (!(min_spike > 0.0)) {
    throw std::invalid_argument("recover_alpha: min_spike must be positive");
  }
  if (max_spikes < 0) {
    throw std::invalid_argument("recover_alpha: max_spikes must be >= 0");
  }
  const bool continuous = model == ModelKind::ContinuousCube;
  const double zero_to_spike = continuous ? kPi : kPi / 2.0;
  const double t_max = zero_to_spike / min_spike;

  DividedPhi divided(phi, model);
  std::vector<double> found;
  RecoverStatus status = RecoverStatus::NoZeroFound;

  while (static_cast<int>(found.size()) < max_spikes) {
    const Bracket bracket = find_first_zero(divided, t_max);
    if (!bracket.found) break;  // no zero below the min_spike threshold

    const double t_star = bisect_zero(divided, bracket.lo, bracket.hi);
    // a candidate on a divided-factor zero is fine when the numerator
    // vanishes there too (shared zeros of rational spike ratios cancel);
    // a genuine pole means the function cannot be divided as requested
    const auto pole = divided.pole_near(t_star, 2.0 * kSingularWindow);
    if (pole.near &&
        divided.local_model(pole.factor_index, pole.pole).genuine_pole()) {
      status = RecoverStatus::ZeroCollision;
      break;
    }
    double spike = zero_to_spike / t_star;
    if (spike < min_spike) break;
    spike = std::min(spike, 1.0);
    found.push_back(spike);
    divided.push_spike(spike);
    if (static_cast<int>(found.size()) == max_spikes) {
      status = RecoverStatus::MaxSpikesReached;
    }
  }

  const ResidualFit fit = fit_gaussian_residual(divided);
  // zeros are found in increasing t, so spikes come out non-increasing;
  // sort defensively against near-equal roundoff
  std::sort(found.begin(), found.end(), std::greater<>());
  RecoverResult result;
  result.alpha = AlphaSequence(std::move(found));
  result.status = status;
  result.residual_gaussian = fit.gaussian;
  result.residual_curvature = fit.curvature;
  return result;
}

double ks_distance(const SampleSet& samples,
                   const std::function<double(double)>& cdf) {
  const std::vector<double>& v = samples.values;
  if (v.empty()) throw std::invalid_argument("ks_distance: empty sample");
  const double m = static_cast<double>(v.size());
  double dist = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = cdf(v[i]);
    const double lo = static_cast<double>(i) / m;
    const double hi = static_cast<double>(i + 1) / m;
    dist = std::max(dist, std::max(std::abs(f - lo), std::abs(hi - f)));
  }
  return dist;
}

std::function<double(double)> make_cdf_interpolator(const LimitLaw& law,
                                                    std::size_t grid_points) {
  if (grid_points < 2) {
    throw std::invalid_argument("make_cdf_interpolator: need >= 2 points");
  }
  const double gauss_sd =
      std::sqrt(law.gauss_coeff_sq() *
                (law.model == ModelKind::ContinuousCube ? 1.0 / 3.0 : 1.0));
  const double half_range = law.alpha.l1_norm() + 8.0 * gauss_sd + 0.25;
  const double lo = -half_range;
  const double step = 2.0 * half_range / static_cast<double>(grid_points - 1);

  auto values = std::make_shared<std::vector<double>>(grid_points);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(grid_points); ++i) {
    (*values)[static_cast<std::size_t>(i)] =
        limit_cdf(law, lo + step * static_cast<double>(i));
  }
  // inversion noise can break monotonicity by ~1e-9; repair it
  for (std::size_t i = 1; i < grid_points; ++i) {
    (*values)[i] = std::max((*values)[i], (*values)[i - 1]);
  }

  return [values, lo, step, grid_points](double x) {
    const double pos = (x - lo) / step;
    if (pos <= 0.0) return 0.0;
    if (pos >= static_cast<double>(grid_points - 1)) return 1.0;
    const std::size_t idx = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(idx);
    return (*values)[idx] * (1.0 - frac) + (*values)[idx + 1] * frac;
  };
}

}  // namespace projldp
