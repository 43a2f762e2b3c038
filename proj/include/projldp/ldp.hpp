#ifndef PROJLDP_LDP_HPP_
#define PROJLDP_LDP_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "projldp/core.hpp"
#include "projldp/mc.hpp"
#include "projldp/rng.hpp"

namespace projldp {

// Rate of exponential decay for the spike sequence: -1/2 log(1 - |a|^2),
// +infinity at |a|_2 = 1. Uses log1p on the compensated norm.
double rate_function(const AlphaSequence& alpha);

struct RateBounds {
  double lower = 0.0;  // guaranteed decay: -1/2 log(1 - (|x| - r)^2), 0 if r > |x|
  double upper = 0.0;  // decay cap: -1/2 log(1 - |x|^2)
};

// Asymptotic sandwich for the decay rate -(1/n) log P[window hit].
RateBounds window_rate_bounds(const WindowSpec& w);

enum class EstimateStatus { Ok, ZeroHits };

enum class EstimatorKind {
  Direct,       // frequency of window hits over sphere samples
  Conditional,  // prefix drawn from its exact density, remainder event by MC
  Auto,         // Direct unless the analytic hit bound makes it hopeless
};

struct LdpEstimate {
  explicit LdpEstimate(WindowSpec w) : window(std::move(w)) {}

  int n = 0;
  WindowSpec window;
  double p_hat = 0.0;
  double ci_low = 0.0;   // Wilson 95%
  double ci_high = 0.0;
  double rate_hat = 0.0;  // -(1/n) log p_hat, +inf when p_hat = 0
  double lower_rate_bound = 0.0;
  double upper_rate_bound = 0.0;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  EstimateStatus status = EstimateStatus::Ok;
  EstimatorKind method = EstimatorKind::Direct;

  // Rate interval implied by the Wilson interval on p_hat.
  double rate_ci_low() const;   // from ci_high
  double rate_ci_high() const;  // from ci_low
};

struct Wilson {
  double low = 0.0;
  double high = 0.0;
};

// Wilson 95% score interval for `hits` successes in `trials`.
Wilson wilson_interval(std::uint64_t hits, std::size_t trials);

// Direct Monte Carlo: frequency of the window event over `count` sphere
// samples in R^n. Requires count >= 1000 and n >= prefix_len + 2.
LdpEstimate estimate_window_probability(int n, const WindowSpec& w,
                                        std::size_t count, RngSpec rng,
                                        Exec exec = Exec::Parallel);

// Conditional estimator for windows too rare for direct sampling. Writes the
// window event as
//   P = 2^l n(n-1)...(n-l+1) * I(B+) * E_{z ~ f|B+}[ q(z) ],
// where I(B+) is the quadrature weight over the ordered positive sector and
// q(z) is the probability that the remaining n-l coordinates (a scaled
// uniform point on the lower-dimensional sphere) all stay below z_l. The
// prefix z is drawn from the exact density by rejection, the remainder event
// by Monte Carlo; `count` is the number of conditional trials.
// Requires prefix_len <= 3 (quadrature weight path).
LdpEstimate estimate_window_probability_conditional(int n, const WindowSpec& w,
                                                    std::size_t count,
                                                    RngSpec rng,
                                                    Exec exec = Exec::Parallel);

struct TailBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Deterministic sandwich for P[max_k |Theta_k| >= x1] from the one- and
// two-coordinate marginals: union bound above, second-order inclusion-
// exclusion below.
TailBounds bonferroni_tail_bounds(int n, double x1);

// One estimate per n over a shared window, independent streams per row.
// Auto picks the conditional estimator for rows whose analytic hit bound
// falls below ~1000 expected direct hits.
std::vector<LdpEstimate> empirical_rate_curve(std::span<const int> n_values,
                                              const WindowSpec& w,
                                              std::size_t count, RngSpec rng,
                                              EstimatorKind estimator =
                                                  EstimatorKind::Auto,
                                              Exec exec = Exec::Parallel);

}  // namespace projldp

#endif  // PROJLDP_LDP_HPP_
