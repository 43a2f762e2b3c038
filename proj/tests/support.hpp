#ifndef PROJLDP_TESTS_SUPPORT_HPP_
#define PROJLDP_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace testsupport {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

// CDF of N(0, 1/3), the typical projection limit for the solid cube.
inline double normal_third_cdf(double x) { return normal_cdf(x * 1.7320508075688772935); }

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;
};

inline MeanVar sample_moments(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size() - 1);
  return {mean, var};
}

// Two-sample Kolmogorov-Smirnov distance; both inputs get sorted.
inline double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double dist = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    dist = std::max(dist, std::abs(static_cast<double>(i) / na -
                                   static_cast<double>(j) / nb));
  }
  return dist;
}

// Brute-force sphere sampler kept independent of the library path: different
// engine, std distribution transforms, full-vector normalization.
class OracleSphere {
 public:
  explicit OracleSphere(unsigned seed) : engine_(seed) {}

  std::vector<double> draw(int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    double norm_sq = 0.0;
    do {
      norm_sq = 0.0;
      for (double& x : v) {
        x = gauss_(engine_);
        norm_sq += x * x;
      }
    } while (norm_sq == 0.0);
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : v) x *= inv;
    return v;
  }

  // decreasing order statistics of absolute values
  std::vector<double> draw_order_stats(int n) {
    std::vector<double> v = draw(n);
    for (double& x : v) x = std::abs(x);
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> gauss_;
};

}  // namespace testsupport

#endif  // PROJLDP_TESTS_SUPPORT_HPP_
