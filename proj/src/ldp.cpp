#include "projldp/ldp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "projldp/quadrature.hpp"
#include "projldp/sphere.hpp"

namespace projldp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Auto estimator switches to the conditional decomposition when the analytic
// bound promises fewer direct hits than this.
constexpr double kAutoMinDirectHits = 1000.0;
// Windows wider than this many prefix coordinates use Monte Carlo only.
constexpr std::size_t kMaxDirectPrefix = 32;

double neg_half_log1m_sq(double v) {
  const double one_minus = (1.0 - v) * (1.0 + v);
  if (one_minus <= 1e-300) return kInf;
  return -0.5 * std::log1p(-v * v);
}

}  // namespace

double rate_function(const AlphaSequence& alpha) {
  const double s = alpha.norm_sq();
  if (1.0 - s <= 1e-300) return kInf;
  return -0.5 * std::log1p(-s);
}

RateBounds window_rate_bounds(const WindowSpec& w) {
  const double center_norm = w.center_norm();
  const double r = w.radius();
  RateBounds bounds;
  bounds.upper = neg_half_log1m_sq(center_norm);
  // guaranteed decay only when the window stays away from the typical set
  bounds.lower = r <= center_norm ? neg_half_log1m_sq(center_norm - r) : 0.0;
  return bounds;
}

double LdpEstimate::rate_ci_low() const {
  if (!(ci_high > 0.0)) return kInf;
  return std::max(0.0, -std::log(ci_high) / static_cast<double>(n));
}

double LdpEstimate::rate_ci_high() const {
  if (!(ci_low > 0.0)) return kInf;
  return -std::log(ci_low) / static_cast<double>(n);
}

Wilson wilson_interval(std::uint64_t hits, std::size_t trials) {
  constexpr double z = 1.959963984540054;  // 97.5% normal quantile
  const double m = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / m;
  const double z2m = z * z / m;
  const double denom = 1.0 + z2m;
  const double center = (p + 0.5 * z2m) / denom;
  const double half =
      (z / denom) * std::sqrt(p * (1.0 - p) / m + 0.25 * z2m / m);
  Wilson ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  // the score interval hits the endpoints exactly at 0 and m hits
  if (hits == 0) ci.low = 0.0;
  if (hits == trials) ci.high = 1.0;
  return ci;
}

namespace {

LdpEstimate assemble_estimate(int n, const WindowSpec& w, double p_hat,
                              Wilson ci, std::size_t count, RngSpec rng,
                              EstimatorKind method) {
  LdpEstimate est(w);
  est.n = n;
  est.p_hat = p_hat;
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  est.status = p_hat > 0.0 ? EstimateStatus::Ok : EstimateStatus::ZeroHits;
  est.rate_hat = p_hat > 0.0 ? -std::log(p_hat) / static_cast<double>(n) : kInf;
  const RateBounds bounds = window_rate_bounds(w);
  est.lower_rate_bound = bounds.lower;
  est.upper_rate_bound = bounds.upper;
  est.sample_count = count;
  est.seed = rng.seed;
  est.method = method;
  return est;
}

// 2^l * n (n-1) ... (n-l+1): index choices and sign choices for the top-l
// coordinates in the exchangeable decomposition of the window event.
double prefix_multiplicity(int n, int l) {
  double m = 1.0;
  for (int i = 0; i < l; ++i) m *= 2.0 * (n - i);
  return m;
}

}  // namespace

LdpEstimate estimate_window_probability(int n, const WindowSpec& w,
                                        std::size_t count, RngSpec rng,
                                        Exec exec) {
  const int l = static_cast<int>(w.prefix_len());
  if (count < 1000) {
    throw std::invalid_argument("estimate_window_probability: count >= 1000");
  }
  if (n < l + 2) {
    throw std::invalid_argument("estimate_window_probability: need n >= l + 2");
  }
  if (w.prefix_len() > kMaxDirectPrefix) {
    throw std::invalid_argument("estimate_window_probability: prefix too long");
  }
  const std::uint64_t hits = mc::count_hits(
      count, rng,
      [n, l, &w](Rng& r) {
        std::array<double, kMaxDirectPrefix> prefix;
        kernels::top_order_stats(n, l, r, prefix.data());
        return prefix_in_window(w, std::span<const double>(prefix.data(),
                                                           w.prefix_len()));
      },
      exec);
  const double p_hat = static_cast<double>(hits) / static_cast<double>(count);
  return assemble_estimate(n, w, p_hat, wilson_interval(hits, count), count,
                           rng, EstimatorKind::Direct);
}

LdpEstimate estimate_window_probability_conditional(int n, const WindowSpec& w,
                                                    std::size_t count,
                                                    RngSpec rng, Exec exec) {
  const int l = static_cast<int>(w.prefix_len());
  if (count < 1000) {
    throw std::invalid_argument("conditional estimator: count >= 1000");
  }
  if (l > 3) {
    throw std::invalid_argument(
        "conditional estimator: needs prefix_len <= 3 (quadrature weight)");
  }
  if (n < l + 2) {
    throw std::invalid_argument("conditional estimator: need n >= l + 2");
  }
  const WindowIntegral weight =
      integrate_density_over_window(n, w, SectorVariant::OrderedPositive);
  const double multiplicity = prefix_multiplicity(n, l);
  const double scale = multiplicity * weight.value;
  if (!(scale > 0.0)) {
    return assemble_estimate(n, w, 0.0, Wilson{0.0, 0.0}, count, rng,
                             EstimatorKind::Conditional);
  }

  const auto& x = w.center();
  const double r = w.radius();
  const auto [log_const, expo] = detail::density_params(n, l);
  // density is maximal at the point of the window closest to the origin
  const double rho_min = std::max(0.0, w.center_norm() - r);
  const double log_density_cap = expo * std::log1p(-rho_min * rho_min);

  auto trial = [&x, r, l, n, expo = expo, log_density_cap](Rng& rr) {
    std::array<double, 3> z{};
    double z_norm_sq = 0.0;
    // prefix from the exact density restricted to the ordered positive part
    // of the window, by rejection from the uniform ball
    for (;;) {
      double dir_sq = 0.0;
      for (int i = 0; i < l; ++i) {
        z[static_cast<std::size_t>(i)] = rr.normal();
        dir_sq += z[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
      }
      if (dir_sq == 0.0) continue;
      const double rad = r * std::pow(rr.uniform01(), 1.0 / l) / std::sqrt(dir_sq);
      z_norm_sq = 0.0;
      for (int i = 0; i < l; ++i) {
        const std::size_t ii = static_cast<std::size_t>(i);
        z[ii] = x[ii] + rad * z[ii];
        z_norm_sq += z[ii] * z[ii];
      }
      if (z_norm_sq >= 1.0) continue;
      if (z[static_cast<std::size_t>(l - 1)] <= 0.0) continue;
      bool ordered = true;
      for (int i = 0; i + 1 < l; ++i) {
        if (z[static_cast<std::size_t>(i)] <= z[static_cast<std::size_t>(i + 1)]) {
          ordered = false;
          break;
        }
      }
      if (!ordered) continue;
      const double log_accept = expo * std::log1p(-z_norm_sq) - log_density_cap;
      if (std::log(1.0 - rr.uniform01()) < log_accept) break;
    }
    // remaining coordinates: scaled uniform point on the lower sphere; the
    // window event asks their maximum to stay below the last prefix entry
    const double z_last = z[static_cast<std::size_t>(l - 1)];
    const double shell = std::sqrt(1.0 - z_norm_sq);
    const double max_rest = kernels::max_abs_coordinate(n - l, rr);
    return shell * max_rest < z_last;
  };

  const std::uint64_t hits = mc::count_hits(count, rng, trial, exec);
  const Wilson cond_ci = wilson_interval(hits, count);
  const double q_hat = static_cast<double>(hits) / static_cast<double>(count);
  const double p_hat = std::min(1.0, scale * q_hat);
  const Wilson ci{std::min(1.0, scale * cond_ci.low),
                  std::min(1.0, scale * cond_ci.high)};
  return assemble_estimate(n, w, p_hat, ci, count, rng,
                           EstimatorKind::Conditional);
}

TailBounds bonferroni_tail_bounds(int n, double x1) {
  if (n < 3) throw std::invalid_argument("bonferroni_tail_bounds: n >= 3");
  if (!(x1 > 0.0 && x1 < 1.0)) {
    throw std::domain_error("bonferroni_tail_bounds: x1 in (0, 1)");
  }
  const double tail1 = marginal_tail(n, x1);
  const double upper = std::min(1.0, n * tail1);

  // P[|T1| >= x1, |T2| >= x1] from the two-coordinate marginal; the region
  // is empty once x1 exceeds 1/sqrt(2)
  double pair = 0.0;
  if (2.0 * x1 * x1 < 1.0) {
    const auto [log_const, expo] = detail::density_params(n, 2);
    const double scale = std::exp(log_const);
    auto outer = [x1, expo = expo](double z1) {
      const double ball = 1.0 - z1 * z1;
      return detail::ball_slice_integral(ball, expo, x1, 1.0);
    };
    const double quadrant =
        scale * quad::integrate(outer, x1, std::sqrt(1.0 - x1 * x1), 1e-8);
    pair = 4.0 * quadrant;  // sign symmetry in both coordinates
  }
  const double lower =
      std::max(0.0, n * tail1 - 0.5 * n * (n - 1.0) * pair);
  return {lower, upper};
}

namespace {

EstimatorKind pick_estimator(int n, const WindowSpec& w, std::size_t count) {
  if (w.prefix_len() > 3) return EstimatorKind::Direct;
  const WindowIntegral weight =
      integrate_density_over_window(n, w, SectorVariant::OrderedPositive);
  // multiplicity * weight bounds the window probability from above (the
  // conditional remainder event has probability <= 1)
  const double p_upper =
      prefix_multiplicity(n, static_cast<int>(w.prefix_len())) * weight.value;
  const double expected_hits = p_upper * static_cast<double>(count);
  return expected_hits < kAutoMinDirectHits ? EstimatorKind::Conditional
                                            : EstimatorKind::Direct;
}

}  // namespace

std::vector<LdpEstimate> empirical_rate_curve(std::span<const int> n_values,
                                              const WindowSpec& w,
                                              std::size_t count, RngSpec rng,
                                              EstimatorKind estimator,
                                              Exec exec) {
  for (std::size_t i = 0; i + 1 < n_values.size(); ++i) {
    if (n_values[i] >= n_values[i + 1]) {
      throw std::invalid_argument(
          "empirical_rate_curve: n values must be strictly increasing");
    }
  }
  std::vector<LdpEstimate> rows;
  rows.reserve(n_values.size());
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    const int n = n_values[i];
    const RngSpec row_rng = rng.with_stream(rng.stream + i);
    EstimatorKind kind = estimator;
    if (kind == EstimatorKind::Auto) kind = pick_estimator(n, w, count);
    rows.push_back(kind == EstimatorKind::Direct
                       ? estimate_window_probability(n, w, count, row_rng, exec)
                       : estimate_window_probability_conditional(
                             n, w, count, row_rng, exec));
  }
  return rows;
}

}  // namespace projldp
