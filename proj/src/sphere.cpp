#include "projldp/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "projldp/quadrature.hpp"

namespace projldp {

namespace detail {

DensityParams density_params(int n, int l) {
  constexpr double kLogPi = 1.1447298858494001741;
  return {std::lgamma(0.5 * n) - std::lgamma(0.5 * (n - l)) - 0.5 * l * kLogPi,
          0.5 * (n - l - 2)};
}

double ball_slice_integral(double r_sq, double expo, double a, double b) {
  if (r_sq <= 0.0) return 0.0;
  const double radius = std::sqrt(r_sq);
  a = std::max(a, -radius);
  b = std::min(b, radius);
  if (!(a < b)) return 0.0;
  const double pa = std::asin(std::clamp(a / radius, -1.0, 1.0));
  const double pb = std::asin(std::clamp(b / radius, -1.0, 1.0));
  const double m = 2.0 * expo + 1.0;
  if (m == 0.0) return pb - pa;
  const double scale = std::pow(radius, m);
  if (scale == 0.0) return 0.0;
  auto integrand = [m](double phi) {
    const double c = std::cos(phi);
    return c <= 0.0 ? 0.0 : std::pow(c, m);
  };
  return scale * quad::integrate(integrand, pa, pb, 1e-9);
}

}  // namespace detail

namespace kernels {

void top_order_stats(int n, int l, Rng& rng, double* out) {
  for (;;) {
    for (int k = 0; k < l; ++k) out[k] = 0.0;
    double norm_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = rng.normal();
      norm_sq += g * g;
      const double a = std::abs(g);
      if (a > out[l - 1]) {
        int j = l - 1;
        while (j > 0 && out[j - 1] < a) {
          out[j] = out[j - 1];
          --j;
        }
        out[j] = a;
      }
    }
    if (norm_sq > 0.0) {
      const double inv = 1.0 / std::sqrt(norm_sq);
      for (int k = 0; k < l; ++k) out[k] *= inv;
      return;
    }
  }
}

double max_abs_coordinate(int n, Rng& rng) {
  for (;;) {
    double norm_sq = 0.0;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = rng.normal();
      norm_sq += g * g;
      best = std::max(best, std::abs(g));
    }
    if (norm_sq > 0.0) return best / std::sqrt(norm_sq);
  }
}

}  // namespace kernels

Direction sample_sphere(int n, RngSpec rng) {
  if (n < 1) throw std::invalid_argument("sample_sphere: n must be >= 1");
  Rng r(mc::chunk_spec(rng, 0));
  std::vector<double> coords(static_cast<std::size_t>(n));
  for (;;) {
    for (double& c : coords) c = r.normal();
    const double norm_sq = kahan_sum_squares(coords);
    if (norm_sq == 0.0) continue;  // probability zero; draw again
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& c : coords) c *= inv;
    return Direction(std::move(coords));
  }
}

OrderStatVector order_statistics(const Direction& theta) {
  std::vector<double> coords = theta.coords();
  for (double& c : coords) c = std::abs(c);
  // ties have probability zero; stable sort keeps them well defined anyway
  std::stable_sort(coords.begin(), coords.end(), std::greater<>());
  return OrderStatVector(std::move(coords));
}

double marginal_density(int n, int l, std::span<const double> s) {
  if (n < 2) throw std::invalid_argument("marginal_density: n must be >= 2");
  if (l < 1 || l > n - 1) {
    throw std::invalid_argument("marginal_density: need 1 <= l <= n - 1");
  }
  if (static_cast<int>(s.size()) != l) {
    throw std::invalid_argument("marginal_density: point dimension != l");
  }
  const double sum_sq = kahan_sum_squares(s);
  if (sum_sq > 1.0 + kNormSqSlack) {
    throw std::domain_error("marginal_density: point outside the unit ball");
  }
  const auto [log_const, expo] = detail::density_params(n, l);
  const double t = std::max(0.0, 1.0 - sum_sq);
  if (t == 0.0) {
    if (expo > 0.0) return 0.0;
    if (expo == 0.0) return std::exp(log_const);
    // l = n - 1: the density blows up on the boundary sphere
    return std::numeric_limits<double>::infinity();
  }
  if (expo == 0.0) return std::exp(log_const);
  return std::exp(log_const + expo * std::log(t));
}

double marginal_tail(int n, double x) {
  if (n < 2) throw std::invalid_argument("marginal_tail: n must be >= 2");
  if (!(x >= 0.0 && x < 1.0)) {
    throw std::domain_error("marginal_tail: x must lie in [0, 1)");
  }
  const auto [log_const, expo] = detail::density_params(n, 1);
  // substitute s = 1 - u^2 so the (1 - s^2) power is tame at the endpoint:
  //   int_x^1 2 f(s) ds = int_0^sqrt(1-x) 4 u^(n-2) (2 - u^2)^e e^logc du
  const double power = n - 2.0;  // 1 + 2*expo
  auto integrand = [log_const = log_const, expo = expo, power](double u) {
    if (u <= 0.0) return power > 0.0 ? 0.0 : 4.0 * std::exp(log_const + expo * std::log(2.0));
    return 4.0 * std::exp(log_const + power * std::log(u) +
                          expo * std::log(2.0 - u * u));
  };
  const double value = quad::integrate(integrand, 0.0, std::sqrt(1.0 - x), 1e-10);
  return std::clamp(value, 0.0, 1.0);
}

namespace {

// Window clipped against the unit ball and, for the ordered variant, the
// sector z_1 > ... > z_l > 0. The inner-most coordinate is integrated with
// the angular substitution z = R sin(phi), which absorbs the (1 - |z|^2)
// power at the ball boundary.
double window_integral_quadrature(int n, const WindowSpec& w, bool ordered) {
  const auto& x = w.center();
  const double r = w.radius();
  const int l = static_cast<int>(w.prefix_len());
  const auto [log_const, expo] = detail::density_params(n, l);
  const double scale = std::exp(log_const);

  if (l == 1) {
    double a = x[0] - r;
    double b = x[0] + r;
    if (ordered) a = std::max(a, 0.0);
    return scale * detail::ball_slice_integral(1.0, expo, a, b);
  }

  if (l == 2) {
    double lo = x[0] - r;
    double hi = std::min(x[0] + r, 1.0);
    if (ordered) lo = std::max(lo, 0.0);
    auto outer = [&](double z1) {
      const double gap = r * r - (z1 - x[0]) * (z1 - x[0]);
      if (gap <= 0.0) return 0.0;
      const double half = std::sqrt(gap);
      double a = x[1] - half;
      double b = x[1] + half;
      if (ordered) {
        a = std::max(a, 0.0);
        b = std::min(b, z1);
      }
      return detail::ball_slice_integral(1.0 - z1 * z1, expo, a, b);
    };
    return scale * quad::integrate(outer, lo, hi, 1e-7);
  }

  // l == 3
  double lo = x[0] - r;
  double hi = std::min(x[0] + r, 1.0);
  if (ordered) lo = std::max(lo, 0.0);
  auto outer = [&](double z1) {
    const double gap1 = r * r - (z1 - x[0]) * (z1 - x[0]);
    if (gap1 <= 0.0) return 0.0;
    const double half1 = std::sqrt(gap1);
    double a2 = x[1] - half1;
    double b2 = x[1] + half1;
    const double ball2 = 1.0 - z1 * z1;
    if (ball2 <= 0.0) return 0.0;
    b2 = std::min(b2, std::sqrt(ball2));
    a2 = std::max(a2, -std::sqrt(ball2));
    if (ordered) {
      a2 = std::max(a2, 0.0);
      b2 = std::min(b2, z1);
    }
    if (!(a2 < b2)) return 0.0;
    auto middle = [&](double z2) {
      const double gap2 = gap1 - (z2 - x[1]) * (z2 - x[1]);
      if (gap2 <= 0.0) return 0.0;
      const double half2 = std::sqrt(gap2);
      double a3 = x[2] - half2;
      double b3 = x[2] + half2;
      if (ordered) {
        a3 = std::max(a3, 0.0);
        b3 = std::min(b3, z2);
      }
      return detail::ball_slice_integral(ball2 - z2 * z2, expo, a3, b3);
    };
    return quad::integrate(middle, a2, b2, 1e-8);
  };
  return scale * quad::integrate(outer, lo, hi, 1e-7);
}

WindowIntegral window_integral_mc(int n, const WindowSpec& w, bool ordered,
                                  RngSpec rng, std::size_t count, Exec exec) {
  const auto& x = w.center();
  const double r = w.radius();
  const int l = static_cast<int>(w.prefix_len());
  const auto [log_const, expo] = detail::density_params(n, l);

  // ball volume: pi^(l/2) r^l / Gamma(l/2 + 1)
  constexpr double kLogPi = 1.1447298858494001741;
  const double log_vol = 0.5 * l * kLogPi + l * std::log(r) -
                         std::lgamma(0.5 * l + 1.0);
  const double vol = std::exp(log_vol);

  struct Acc {
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  auto per_chunk = [&](std::size_t, std::size_t m, Rng& rr) {
    Acc acc;
    std::vector<double> z(static_cast<std::size_t>(l));
    for (std::size_t k = 0; k < m; ++k) {
      // uniform point in the window ball
      double dir_norm_sq = 0.0;
      for (int i = 0; i < l; ++i) {
        z[static_cast<std::size_t>(i)] = rr.normal();
        dir_norm_sq += z[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
      }
      if (dir_norm_sq == 0.0) continue;
      const double rad =
          r * std::pow(rr.uniform01(), 1.0 / l) / std::sqrt(dir_norm_sq);
      double sum_sq = 0.0;
      bool keep = true;
      for (int i = 0; i < l; ++i) {
        const std::size_t ii = static_cast<std::size_t>(i);
        z[ii] = x[ii] + rad * z[ii];
        sum_sq += z[ii] * z[ii];
      }
      if (sum_sq >= 1.0) keep = false;
      if (keep && ordered) {
        if (z[static_cast<std::size_t>(l - 1)] <= 0.0) keep = false;
        for (int i = 0; keep && i + 1 < l; ++i) {
          if (z[static_cast<std::size_t>(i)] <= z[static_cast<std::size_t>(i + 1)]) keep = false;
        }
      }
      if (!keep) continue;
      const double f = std::exp(log_const + expo * std::log1p(-sum_sq));
      acc.sum += f;
      acc.sum_sq += f * f;
    }
    return acc;
  };

  double sum = 0.0;
  double sum_sq = 0.0;
  for (const Acc& a : mc::map_chunks<Acc>(count, rng, per_chunk, exec)) {
    sum += a.sum;
    sum_sq += a.sum_sq;
  }
  const double mean = sum / static_cast<double>(count);
  const double var =
      std::max(0.0, sum_sq / static_cast<double>(count) - mean * mean);
  return {vol * mean, vol * std::sqrt(var / static_cast<double>(count))};
}

}  // namespace

WindowIntegral integrate_density_over_window(int n, const WindowSpec& w,
                                             SectorVariant variant,
                                             RngSpec rng, std::size_t mc_count,
                                             Exec exec) {
  const int l = static_cast<int>(w.prefix_len());
  if (l > n - 2) {
    throw std::invalid_argument(
        "integrate_density_over_window: requires prefix_len <= n - 2");
  }
  if (w.center_norm() - w.radius() >= 1.0) {
    throw std::domain_error(
        "integrate_density_over_window: window lies outside the unit ball");
  }
  const bool ordered = variant == SectorVariant::OrderedPositive;
  if (l <= 3) return {window_integral_quadrature(n, w, ordered), 0.0};
  return window_integral_mc(n, w, ordered, rng, mc_count, exec);
}

SampleSet sample_projection(const Direction& theta, ModelKind model,
                            std::size_t count, RngSpec rng, Exec exec) {
  if (count < 1) throw std::invalid_argument("sample_projection: count >= 1");
  const std::vector<double>& coords = theta.coords();
  std::vector<double> values;
  if (model == ModelKind::ContinuousCube) {
    values = mc::generate(
        count, rng,
        [&coords](Rng& r) {
          double s = 0.0;
          for (double t : coords) s += t * r.uniform_pm1();
          return s;
        },
        exec);
  } else {
    values = mc::generate(
        count, rng,
        [&coords](Rng& r) {
          double s = 0.0;
          for (double t : coords) s += t * r.rademacher();
          return s;
        },
        exec);
  }
  std::sort(values.begin(), values.end());
  return SampleSet{std::move(values), rng.seed};
}

}  // namespace projldp
