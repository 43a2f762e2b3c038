#include "projldp/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace projldp {

double kahan_sum_squares(std::span<const double> xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double term = x * x - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  return sum;
}

std::string_view model_name(ModelKind m) {
  return m == ModelKind::ContinuousCube ? "continuous" : "discrete";
}

ModelKind model_from_name(std::string_view name) {
  if (name == "continuous") return ModelKind::ContinuousCube;
  if (name == "discrete") return ModelKind::DiscreteCube;
  throw std::invalid_argument("unknown model: " + std::string(name));
}

namespace {

void require_finite(std::span<const double> xs, const char* what) {
  for (double x : xs) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string(what) + ": non-finite entry");
    }
  }
}

void trim_trailing_zeros(std::vector<double>& v) {
  while (!v.empty() && v.back() == 0.0) v.pop_back();
}

}  // namespace

AlphaSequence::AlphaSequence(std::vector<double> entries)
    : entries_(std::move(entries)) {
  require_finite(entries_, "alpha");
  trim_trailing_zeros(entries_);
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (entries_[k] < 0.0) {
      throw std::invalid_argument("alpha: negative entry");
    }
    if (k + 1 < entries_.size() && entries_[k] < entries_[k + 1]) {
      throw std::invalid_argument("alpha: entries must be non-increasing");
    }
  }
  norm_sq_ = kahan_sum_squares(entries_);
  if (norm_sq_ > 1.0 + kNormSqSlack) {
    throw std::invalid_argument("alpha: sum of squares exceeds 1");
  }
  norm_sq_ = std::clamp(norm_sq_, 0.0, 1.0);
}

double AlphaSequence::l1_norm() const {
  double s = 0.0;
  for (double a : entries_) s += a;
  return s;
}

AlphaSequence make_alpha(std::span<const double> raw) {
  require_finite(raw, "make_alpha");
  std::vector<double> entries(raw.begin(), raw.end());
  for (double& x : entries) x = std::abs(x);
  std::sort(entries.begin(), entries.end(), std::greater<>());
  return AlphaSequence(std::move(entries));
}

WindowSpec::WindowSpec(std::vector<double> center, double radius)
    : center_(std::move(center)), radius_(radius) {
  if (center_.empty()) {
    throw std::invalid_argument("window: empty center");
  }
  require_finite(center_, "window center");
  for (std::size_t k = 0; k < center_.size(); ++k) {
    if (center_[k] < 0.0) {
      throw std::invalid_argument("window: center entries must be >= 0");
    }
    if (k + 1 < center_.size() && center_[k] < center_[k + 1]) {
      throw std::invalid_argument("window: center must be non-increasing");
    }
  }
  if (kahan_sum_squares(center_) > 1.0 + kNormSqSlack) {
    throw std::invalid_argument("window: |center|_2 exceeds 1");
  }
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw std::invalid_argument("window: radius must be positive");
  }
}

double WindowSpec::center_norm() const {
  return std::sqrt(std::min(1.0, kahan_sum_squares(center_)));
}

Direction::Direction(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) {
    throw std::invalid_argument("direction: empty");
  }
  require_finite(coords_, "direction");
  const double norm_sq = kahan_sum_squares(coords_);
  if (std::abs(std::sqrt(norm_sq) - 1.0) > kUnitNormTol) {
    throw std::invalid_argument("direction: not unit norm");
  }
}

OrderStatVector::OrderStatVector(std::vector<double> coords)
    : coords_(std::move(coords)) {
  if (coords_.empty()) {
    throw std::invalid_argument("order statistics: empty");
  }
  require_finite(coords_, "order statistics");
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (coords_[k] < 0.0) {
      throw std::invalid_argument("order statistics: negative entry");
    }
    if (k + 1 < coords_.size() && coords_[k] < coords_[k + 1]) {
      throw std::invalid_argument("order statistics: not non-increasing");
    }
  }
  const double norm_sq = kahan_sum_squares(coords_);
  if (std::abs(std::sqrt(norm_sq) - 1.0) > kUnitNormTol) {
    throw std::invalid_argument("order statistics: not unit norm");
  }
}

bool prefix_in_window(const WindowSpec& w, std::span<const double> prefix) {
  const std::vector<double>& x = w.center();
  double dist_sq = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double v = k < prefix.size() ? prefix[k] : 0.0;
    const double d = v - x[k];
    dist_sq += d * d;
  }
  return dist_sq < w.radius() * w.radius();  // open ball
}

bool window_contains(const WindowSpec& w, const OrderStatVector& eta) {
  return prefix_in_window(w, eta.coords());
}

std::string alpha_to_json(const AlphaSequence& a) {
  nlohmann::json j;
  j["alpha"] = a.entries();
  return j.dump();
}

AlphaSequence alpha_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  return AlphaSequence(j.at("alpha").get<std::vector<double>>());
}

std::string window_to_json(const WindowSpec& w) {
  nlohmann::json j;
  j["center"] = w.center();
  j["radius"] = w.radius();
  return j.dump();
}

WindowSpec window_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  return WindowSpec(j.at("center").get<std::vector<double>>(),
                    j.at("radius").get<double>());
}

}  // namespace projldp
