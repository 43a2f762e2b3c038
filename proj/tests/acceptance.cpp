// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fails. The CLI binary path arrives as argv[1] (used by the
// reproducibility criterion).

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "projldp/core.hpp"
#include "projldp/ldp.hpp"
#include "projldp/limitlaw.hpp"
#include "projldp/quadrature.hpp"
#include "projldp/sphere.hpp"

namespace {

using namespace projldp;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475); }

// ---- criterion 1: marginal density exactness and normalization

Outcome criterion_marginal_exactness() {
  double worst_flat = 0.0;
  for (double s = -0.99; s <= 0.9901; s += 0.01) {
    worst_flat = std::max(
        worst_flat,
        std::abs(marginal_density(3, 1, std::vector<double>{s}) - 0.5));
  }
  if (worst_flat >= 1e-12) {
    return {false, "flat marginal off by " + fmt(worst_flat)};
  }

  double worst_norm = 0.0;
  for (int n = 3; n <= 12; ++n) {
    const double mass1 = quad::integrate(
        [n](double s) { return marginal_density(n, 1, std::span(&s, 1)); },
        -1.0, 1.0, 1e-11);
    worst_norm = std::max(worst_norm, std::abs(mass1 - 1.0));

    double mass2 = 0.0;
    if (n == 3) {
      // boundary-singular case, integrated through the angular slice
      const auto [log_const, expo] = detail::density_params(3, 2);
      mass2 = std::exp(log_const) *
              quad::integrate(
                  [expo = expo](double z1) {
                    return detail::ball_slice_integral(1.0 - z1 * z1, expo,
                                                       -1.0, 1.0);
                  },
                  -1.0, 1.0, 1e-9);
    } else {
      mass2 = integrate_density_over_window(n, WindowSpec({0.0, 0.0}, 1.0),
                                            SectorVariant::FullBall)
                  .value;
    }
    worst_norm = std::max(worst_norm, std::abs(mass2 - 1.0));
  }
  if (worst_norm >= 1e-8) {
    return {false, "normalization off by " + fmt(worst_norm)};
  }
  return {true, "flat dev " + fmt(worst_flat) + ", norm dev " + fmt(worst_norm)};
}

// ---- criterion 2: deterministic rate from the tail quadrature

Outcome criterion_tail_rate() {
  const double target = -0.22314355131420976;
  const double v200 = std::log(marginal_tail(200, 0.6)) / 200.0;
  const double v2000 = std::log(marginal_tail(2000, 0.6)) / 2000.0;
  const double err200 = std::abs(v200 - target);
  const double err2000 = std::abs(v2000 - target);
  const bool pass = err2000 < 0.02 && err2000 < err200;
  return {pass, "value(2000) = " + fmt(v2000) + " (err " + fmt(err2000) +
                    "), err(200) = " + fmt(err200)};
}

// ---- criterion 3: Monte Carlo rate sandwich for the corpus window

Outcome criterion_ldp_sandwich() {
  const WindowSpec w({0.6}, 0.1);
  const std::vector<int> ns{25, 50, 100, 200};
  const auto rows = empirical_rate_curve(ns, w, 1000000, {1234, 0});
  const LdpEstimate& last = rows.back();
  if (last.status != EstimateStatus::Ok) return {false, "zero hits at n = 200"};

  const double lo = 0.0938;
  const double hi = 0.2731;
  if (!(last.rate_hat >= lo && last.rate_hat <= hi)) {
    return {false, "rate(200) = " + fmt(last.rate_hat) + " outside [" +
                       fmt(lo) + ", " + fmt(hi) + "]"};
  }
  std::string seq;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double se_i =
        (rows[i].rate_ci_high() - rows[i].rate_ci_low()) / (2.0 * 1.96);
    const double se_j =
        (rows[i + 1].rate_ci_high() - rows[i + 1].rate_ci_low()) / (2.0 * 1.96);
    if (rows[i + 1].rate_hat < rows[i].rate_hat - 2.0 * (se_i + se_j)) {
      return {false, "rate sequence not non-decreasing at n = " +
                         std::to_string(rows[i + 1].n)};
    }
  }
  for (const auto& r : rows) seq += fmt(r.rate_hat) + " ";
  return {true, "rates " + seq + "in [" + fmt(lo) + ", " + fmt(hi) + "] at 200"};
}

// ---- criterion 4: Bonferroni containment of the max-coordinate tail

Outcome criterion_bonferroni() {
  const std::array<double, 2> thresholds{0.4, 0.6};
  for (int n : {10, 50, 100}) {
    const std::size_t count = 10000000;
    using Counts = std::array<std::uint64_t, 2>;
    auto per_chunk = [n, &thresholds](std::size_t, std::size_t m, Rng& r) {
      Counts c{0, 0};
      for (std::size_t k = 0; k < m; ++k) {
        const double top = kernels::max_abs_coordinate(n, r);
        if (top >= thresholds[0]) ++c[0];
        if (top >= thresholds[1]) ++c[1];
      }
      return c;
    };
    Counts totals{0, 0};
    for (const Counts& c : mc::map_chunks<Counts>(
             count, {555 + static_cast<std::uint64_t>(n), 0}, per_chunk,
             Exec::Parallel)) {
      totals[0] += c[0];
      totals[1] += c[1];
    }
    for (std::size_t j = 0; j < thresholds.size(); ++j) {
      const TailBounds bounds = bonferroni_tail_bounds(n, thresholds[j]);
      const Wilson ci = wilson_interval(totals[j], count);
      const bool overlap =
          std::max(ci.low, bounds.lower) <= std::min(ci.high, bounds.upper);
      if (!overlap) {
        return {false, "n = " + std::to_string(n) + ", x1 = " +
                           fmt(thresholds[j]) + ": CI [" + fmt(ci.low) + ", " +
                           fmt(ci.high) + "] misses bounds [" +
                           fmt(bounds.lower) + ", " + fmt(bounds.upper) + "]"};
      }
    }
  }
  return {true, "all six (n, x1) frequencies consistent with the sandwich"};
}

// ---- criterion 5: typical directions project to the Gaussian limit

Outcome criterion_clt() {
  const int n = 1000;
  const std::size_t count = 100000;
  const Direction theta = sample_sphere(n, {2026, 1 << 20});

  const SampleSet cont =
      sample_projection(theta, ModelKind::ContinuousCube, count, {2026, 0});
  const double ks_cont = ks_distance(
      cont, [](double x) { return normal_cdf(x * 1.7320508075688772); });

  const SampleSet disc =
      sample_projection(theta, ModelKind::DiscreteCube, count, {2027, 0});
  const double ks_disc =
      ks_distance(disc, [](double x) { return normal_cdf(x); });

  const bool pass = ks_cont < 0.01 && ks_disc < 0.01;
  return {pass, "KS continuous " + fmt(ks_cont) + ", discrete " + fmt(ks_disc) +
                    " (< 0.01)"};
}

// ---- criterion 6: a spiked direction projects to its limit law

Outcome criterion_spiked_direction() {
  const int n = 1000;
  const std::size_t count = 100000;
  const AlphaSequence alpha = make_alpha(std::vector<double>{0.6});
  std::vector<double> coords(alpha.entries());
  const double fill = std::sqrt((1.0 - alpha.norm_sq()) /
                                static_cast<double>(n - 1));
  coords.insert(coords.end(), static_cast<std::size_t>(n - 1), fill);
  const Direction theta(std::move(coords));

  const SampleSet s =
      sample_projection(theta, ModelKind::ContinuousCube, count, {3030, 0});
  const LimitLaw law{alpha, ModelKind::ContinuousCube};
  const double ks = ks_distance(s, make_cdf_interpolator(law));
  return {ks < 0.02, "KS to the limit law " + fmt(ks) + " (< 0.02)"};
}

// ---- criterion 7: deconvolution round trip on a random corpus

Outcome criterion_deconvolution() {
  std::mt19937_64 eng(424242);
  std::uniform_real_distribution<double> u(0.06, 0.7);
  std::uniform_int_distribution<int> spike_count(1, 4);
  int done = 0;
  double worst = 0.0;
  while (done < 20) {
    std::vector<double> spikes(static_cast<std::size_t>(spike_count(eng)));
    for (double& s : spikes) s = u(eng);
    std::sort(spikes.begin(), spikes.end(), std::greater<>());
    double norm_sq = 0.0;
    bool separated = true;
    for (std::size_t k = 0; k < spikes.size(); ++k) {
      norm_sq += spikes[k] * spikes[k];
      if (k + 1 < spikes.size() && spikes[k + 1] > 0.98 * spikes[k]) {
        separated = false;
      }
    }
    if (!separated || norm_sq > 0.95 * 0.95) continue;
    const AlphaSequence alpha = make_alpha(spikes);
    for (ModelKind model :
         {ModelKind::ContinuousCube, ModelKind::DiscreteCube}) {
      const LimitLaw law{alpha, model};
      const std::function<double(double)> phi = [&law](double t) {
        return char_fn(law, t);
      };
      const RecoverResult res = recover_alpha(phi, model, 6, 0.05);
      if (res.status == RecoverStatus::ZeroCollision) {
        return {false, "unexpected zero collision in the corpus"};
      }
      if (res.alpha.size() != spikes.size()) {
        return {false, "spike count mismatch: got " +
                           std::to_string(res.alpha.size()) + ", want " +
                           std::to_string(spikes.size())};
      }
      for (std::size_t k = 0; k < spikes.size(); ++k) {
        worst = std::max(worst, std::abs(res.alpha[k] - spikes[k]));
      }
    }
    ++done;
  }
  return {worst < 1e-6, "20 laws, both models, worst coordinate error " +
                            fmt(worst) + " (< 1e-6)"};
}

// ---- criterion 8: sampling agrees with the inversion CDF and moments

Outcome criterion_inversion_sampling() {
  const std::vector<std::vector<double>> alphas{{}, {0.6}, {0.6, 0.3}};
  std::uint64_t seed = 8800;
  double worst_ks = 0.0;
  double worst_var = 0.0;
  for (const auto& spikes : alphas) {
    for (ModelKind model :
         {ModelKind::ContinuousCube, ModelKind::DiscreteCube}) {
      const LimitLaw law{make_alpha(spikes), model};
      const SampleSet s = sample_limit(law, 1000000, {seed++, 0});
      const double ks = ks_distance(s, make_cdf_interpolator(law));
      worst_ks = std::max(worst_ks, ks);

      double mean = 0.0;
      for (double v : s.values) mean += v;
      mean /= static_cast<double>(s.count());
      double var = 0.0;
      for (double v : s.values) var += (v - mean) * (v - mean);
      var /= static_cast<double>(s.count() - 1);
      worst_var = std::max(worst_var, std::abs(var - moments(law).variance));
    }
  }
  const bool pass = worst_ks < 0.002 && worst_var < 0.005;
  return {pass, "worst KS " + fmt(worst_ks) + " (< 0.002), worst variance "
                    "deviation " +
                    fmt(worst_var) + " (< 0.005)"};
}

// ---- criterion 9: continuity of the characteristic function in alpha

Outcome criterion_continuity() {
  const LimitLaw base{make_alpha(std::vector<double>{0.6, 0.3}),
                      ModelKind::ContinuousCube};
  const LimitLaw moved{make_alpha(std::vector<double>{0.6 + 1e-4, 0.3}),
                       ModelKind::ContinuousCube};
  double sup = 0.0;
  for (double t = -20.0; t <= 20.0; t += 0.01) {
    sup = std::max(sup, std::abs(char_fn(moved, t) - char_fn(base, t)));
  }
  return {sup < 1e-3, "sup |phi difference| = " + fmt(sup) + " (< 1e-3)"};
}

// ---- criterion 10: CLI reproducibility

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion_reproducibility(const std::string& cli) {
  if (cli.empty()) return {false, "CLI path missing (pass as argv[1])"};
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("projldp_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  const std::vector<std::pair<std::string, std::string>> runs{
      {"project --n 200 --model continuous --theta uniform-random "
       "--count 20000 --seed 5 --out ",
       "proj"},
      {"verify-ldp --window 0.6:0.1 --n 10,20 --count 20000 --seed 5 --out ",
       "curve"},
      {"charfn --alpha 0.6,0.3 --model discrete --grid 0:20:0.5 --out ",
       "charfn"},
  };
  for (const auto& [args, tag] : runs) {
    const fs::path a = dir / (tag + "_a.csv");
    const fs::path b = dir / (tag + "_b.csv");
    const std::string base = cli + " " + args;
    if (std::system((base + a.string() + " >/dev/null 2>&1").c_str()) != 0) {
      return {false, tag + ": run failed"};
    }
    if (std::system((base + b.string() + " >/dev/null 2>&1").c_str()) != 0) {
      return {false, tag + ": rerun failed"};
    }
    if (slurp(a) != slurp(b)) {
      return {false, tag + ": reruns differ"};
    }
    if (slurp(a).empty()) return {false, tag + ": empty output"};
  }
  return {true, "three commands, byte-identical reruns"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 marginal density exactness", criterion_marginal_exactness},
      {"2 tail-quadrature rate limit", criterion_tail_rate},
      {"3 Monte Carlo rate sandwich", criterion_ldp_sandwich},
      {"4 Bonferroni containment", criterion_bonferroni},
      {"5 typical-direction CLT", criterion_clt},
      {"6 spiked-direction limit law", criterion_spiked_direction},
      {"7 deconvolution round trip", criterion_deconvolution},
      {"8 inversion vs sampling", criterion_inversion_sampling},
      {"9 continuity in alpha", criterion_continuity},
      {"10 CLI reproducibility",
       [&cli] { return criterion_reproducibility(cli); }},
  };

  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome outcome;
    try {
      outcome = fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  criterion %s: %s\n", outcome.pass ? "PASS" : "FAIL",
                name.c_str(), outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
