#ifndef PROJLDP_CORE_HPP_
#define PROJLDP_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace projldp {

// Absolute tolerance for unit-norm validation of directions and
// order-statistic vectors.
inline constexpr double kUnitNormTol = 1e-12;

// Slack allowed when validating the sum of squares of a spike sequence.
inline constexpr double kNormSqSlack = 1e-12;

// Compensated (Kahan) sum of squares; keeps 1 - |a|^2 accurate near |a| = 1.
double kahan_sum_squares(std::span<const double> xs);

enum class ModelKind { ContinuousCube, DiscreteCube };

std::string_view model_name(ModelKind m);
ModelKind model_from_name(std::string_view name);

// Non-increasing, non-negative spike vector with sum of squares <= 1.
// Entries beyond the stored prefix are implicitly zero; trailing zeros are
// trimmed on construction, so equality is plain coordinatewise equality.
class AlphaSequence {
 public:
  AlphaSequence() = default;
  // Requires entries already non-increasing and non-negative.
  explicit AlphaSequence(std::vector<double> entries);

  const std::vector<double>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  // Zero beyond the stored prefix.
  double operator[](std::size_t k) const {
    return k < entries_.size() ? entries_[k] : 0.0;
  }
  // Clamped to [0, 1].
  double norm_sq() const { return norm_sq_; }
  double l1_norm() const;

  friend bool operator==(const AlphaSequence&, const AlphaSequence&) = default;

 private:
  std::vector<double> entries_;
  double norm_sq_ = 0.0;
};

// Canonicalizes an arbitrary finite vector into a spike sequence: absolute
// values, sorted non-increasing, trailing zeros trimmed. Rejects NaN/inf and
// sum of squares beyond 1 + 1e-12.
AlphaSequence make_alpha(std::span<const double> raw);

// Open ball constraint on the first l order statistics: center x with
// x_1 >= ... >= x_l >= 0 and |x|_2 <= 1, radius r > 0.
class WindowSpec {
 public:
  WindowSpec(std::vector<double> center, double radius);

  const std::vector<double>& center() const { return center_; }
  double radius() const { return radius_; }
  std::size_t prefix_len() const { return center_.size(); }
  // Euclidean norm of the center, from the compensated sum of squares.
  double center_norm() const;

 private:
  std::vector<double> center_;
  double radius_;
};

// Unit vector in R^n (tolerance kUnitNormTol).
class Direction {
 public:
  explicit Direction(std::vector<double> coords);
  const std::vector<double>& coords() const { return coords_; }
  std::size_t dim() const { return coords_.size(); }

 private:
  std::vector<double> coords_;
};

// Non-increasing, non-negative unit vector: the decreasing order statistics
// of the absolute coordinates of a direction, zero-padded past index n.
class OrderStatVector {
 public:
  explicit OrderStatVector(std::vector<double> coords);
  const std::vector<double>& coords() const { return coords_; }
  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t k) const {
    return k < coords_.size() ? coords_[k] : 0.0;
  }

 private:
  std::vector<double> coords_;
};

// Sorted batch of real draws together with the seed that produced it.
struct SampleSet {
  std::vector<double> values;  // non-decreasing
  std::uint64_t seed = 0;
  std::size_t count() const { return values.size(); }
};

// True iff the prefix (eta_1, ..., eta_l) lies strictly inside the open ball
// around the window center. eta is zero-padded when shorter than the prefix.
bool window_contains(const WindowSpec& w, const OrderStatVector& eta);

// Same test on a raw prefix; hot path for the Monte Carlo estimators.
bool prefix_in_window(const WindowSpec& w, std::span<const double> prefix);

// JSON round trip: {"alpha": [..]} and {"center": [..], "radius": r}.
std::string alpha_to_json(const AlphaSequence& a);
AlphaSequence alpha_from_json(std::string_view text);
std::string window_to_json(const WindowSpec& w);
WindowSpec window_from_json(std::string_view text);

}  // namespace projldp

#endif  // PROJLDP_CORE_HPP_
