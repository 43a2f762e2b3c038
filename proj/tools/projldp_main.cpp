// Command-line front end: projection sampling, rate evaluation,
// characteristic-function tables, density tables, spike recovery, and
// window-probability rate curves, all seeded and reproducible.
//
// Exit codes: 0 ok, 2 configuration error, 3 I/O failure, 4 numerical
// failure (zero hits or collision under --strict, invalid law domain).

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "projldp/csvio.hpp"
#include "projldp/ldp.hpp"
#include "projldp/limitlaw.hpp"
#include "projldp/sphere.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using nlohmann::json;
using namespace projldp;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reserved caller-level stream for auxiliary draws (the random direction),
// far away from the streams used by the sample generators.
constexpr std::uint64_t kDirectionStream = 1u << 20;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(cell, &pos);
    if (pos != cell.size()) {
      throw std::invalid_argument("bad number in list: " + cell);
    }
    values.push_back(v);
  }
  return values;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

// "start:stop:step", endpoints included when within half a step.
std::vector<double> parse_grid(const std::string& text) {
  const std::size_t c1 = text.find(':');
  const std::size_t c2 = text.rfind(':');
  if (c1 == std::string::npos || c2 == c1) {
    throw std::invalid_argument("grid must be start:stop:step");
  }
  const double start = std::stod(text.substr(0, c1));
  const double stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  const double step = std::stod(text.substr(c2 + 1));
  if (!(step > 0.0) || stop < start) {
    throw std::invalid_argument("grid needs stop >= start and step > 0");
  }
  std::vector<double> values;
  for (std::size_t k = 0;; ++k) {
    const double v = start + static_cast<double>(k) * step;
    if (v > stop + 0.5 * step) break;
    values.push_back(v);
  }
  return values;
}

// "x1,x2,...:r"
WindowSpec parse_window(const std::string& text) {
  const std::size_t colon = text.rfind(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("window must be center:radius");
  }
  return WindowSpec(parse_double_list(text.substr(0, colon)),
                    std::stod(text.substr(colon + 1)));
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

json window_json(const WindowSpec& w) {
  return json{{"center", w.center()}, {"radius", w.radius()}};
}

std::string samples_csv(const SampleSet& samples, const json& meta) {
  std::ostringstream os;
  write_metadata_line(os, meta.dump());
  os << "value\n";
  for (double v : samples.values) os << format_double(v) << "\n";
  return os.str();
}

std::string table_csv(const json& meta, const std::string& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  write_metadata_line(os, meta.dump());
  write_csv_rows(os, header, rows);
  return os.str();
}

double sample_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

double normal_cdf_scaled(double x, double sd) {
  return 0.5 * std::erfc(-x / (sd * 1.4142135623730950488));
}

// ---------------------------------------------------------------- project

struct ProjectOpts {
  int n = 0;
  std::string model;
  std::string theta;
  std::size_t count = 100000;
  std::uint64_t seed = 0;
  std::string out;
  std::string summary_path;
};

int run_project(const ProjectOpts& o) {
  const ModelKind model = model_from_name(o.model);
  AlphaSequence spike_alpha;
  bool spiked = false;
  Direction dir(std::vector<double>{1.0});
  if (o.theta == "uniform-random") {
    dir = sample_sphere(o.n, {o.seed, kDirectionStream});
  } else if (o.theta.rfind("spiked:", 0) == 0) {
    spiked = true;
    spike_alpha = make_alpha(parse_double_list(o.theta.substr(7)));
    const std::size_t rest =
        static_cast<std::size_t>(o.n) - spike_alpha.size();
    if (spike_alpha.size() > static_cast<std::size_t>(o.n)) {
      throw std::invalid_argument("spiked: more spikes than coordinates");
    }
    std::vector<double> coords(spike_alpha.entries());
    if (rest > 0) {
      const double fill =
          std::sqrt((1.0 - spike_alpha.norm_sq()) / static_cast<double>(rest));
      coords.insert(coords.end(), rest, fill);
    } else if (spike_alpha.norm_sq() < 1.0 - 1e-9) {
      throw std::invalid_argument("spiked: no room to reach unit norm");
    }
    dir = Direction(std::move(coords));
  } else {
    std::vector<double> coords = parse_double_list(o.theta);
    if (static_cast<int>(coords.size()) != o.n) {
      throw std::invalid_argument("theta list length must equal n");
    }
    const double norm = std::sqrt(kahan_sum_squares(coords));
    if (std::abs(norm - 1.0) > 1e-6) {
      throw std::invalid_argument("theta must have unit norm (tol 1e-6)");
    }
    for (double& c : coords) c /= norm;
    dir = Direction(std::move(coords));
  }

  const SampleSet samples = sample_projection(dir, model, o.count, {o.seed, 0});

  json meta{{"command", "project"}, {"n", o.n},       {"model", o.model},
            {"theta", o.theta},     {"count", o.count}, {"seed", o.seed}};
  write_output(o.out, samples_csv(samples, meta));

  const double mean = sample_mean(samples.values);
  const double variance = sample_variance(samples.values, mean);
  const double typical_sd =
      model == ModelKind::ContinuousCube ? 0.57735026918962576451 : 1.0;
  const double ks_normal = ks_distance(
      samples, [typical_sd](double x) { return normal_cdf_scaled(x, typical_sd); });

  json summary = meta;
  summary["mean"] = mean;
  summary["variance"] = variance;
  summary["ks_normal"] = ks_normal;
  if (spiked) {
    const LimitLaw law{spike_alpha, model};
    summary["ks_limit"] = ks_distance(samples, make_cdf_interpolator(law));
  }
  const std::string summary_text = summary.dump() + "\n";
  std::cout << summary_text;
  if (!o.summary_path.empty()) write_output(o.summary_path, summary_text);
  return 0;
}

// ------------------------------------------------------------------- rate

struct RateOpts {
  std::string alpha;
  std::string out;
};

int run_rate(const RateOpts& o) {
  const double rate = rate_function(make_alpha(parse_double_list(o.alpha)));
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", rate);
  std::string text = std::isinf(rate) ? "inf" : buf;
  text += "\n";
  write_output(o.out, text);
  return 0;
}

// -------------------------------------------------------- charfn / density

struct TableOpts {
  std::string alpha;
  std::string model;
  std::string grid;
  std::string out;
  bool cdf = false;
};

int run_charfn(const TableOpts& o) {
  const LimitLaw law{make_alpha(parse_double_list(o.alpha)),
                     model_from_name(o.model)};
  std::vector<std::vector<double>> rows;
  for (double t : parse_grid(o.grid)) rows.push_back({t, char_fn(law, t)});
  json meta{{"command", "charfn"},
            {"alpha", law.alpha.entries()},
            {"model", o.model},
            {"grid", o.grid}};
  write_output(o.out, table_csv(meta, "t,phi", rows));
  return 0;
}

int run_density(const TableOpts& o) {
  const LimitLaw law{make_alpha(parse_double_list(o.alpha)),
                     model_from_name(o.model)};
  if (law.alpha.norm_sq() >= 1.0) {
    throw NumericError("density inversion requires |alpha|_2 < 1");
  }
  std::vector<std::vector<double>> rows;
  for (double x : parse_grid(o.grid)) {
    rows.push_back({x, o.cdf ? limit_cdf(law, x) : limit_pdf(law, x)});
  }
  json meta{{"command", "density"},
            {"alpha", law.alpha.entries()},
            {"model", o.model},
            {"grid", o.grid},
            {"cdf", o.cdf}};
  write_output(o.out, table_csv(meta, o.cdf ? "x,cdf" : "x,pdf", rows));
  return 0;
}

// --------------------------------------------------------------- marginal

struct MarginalOpts {
  int n = 0;
  int l = 1;
  std::string grid;
  std::string out;
  bool tail = false;
};

int run_marginal(const MarginalOpts& o) {
  if (o.tail && o.l != 1) {
    throw std::invalid_argument("--tail applies to the l = 1 marginal");
  }
  std::vector<std::vector<double>> rows;
  for (double s : parse_grid(o.grid)) {
    if (o.tail) {
      rows.push_back({s, marginal_tail(o.n, s)});
    } else {
      // the grid sweeps the first coordinate; the others sit at zero
      std::vector<double> point(static_cast<std::size_t>(o.l), 0.0);
      point[0] = s;
      rows.push_back({s, marginal_density(o.n, o.l, point)});
    }
  }
  json meta{{"command", "marginal"}, {"n", o.n},        {"l", o.l},
            {"grid", o.grid},        {"tail", o.tail}};
  write_output(o.out, table_csv(meta, o.tail ? "x,tail" : "s,f", rows));
  return 0;
}

// ---------------------------------------------------------------- recover

struct RecoverOpts {
  std::string roundtrip;
  std::string phi_table;
  std::string model;
  int max_spikes = 8;
  double min_spike = 0.05;
  std::string out;
  bool strict = false;
};

std::function<double(double)> table_evaluator(const std::string& path,
                                              double t_needed) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open phi table: " + path);
  const CsvTable table = read_csv(in);
  if (table.header.size() < 2 || table.header[0] != "t") {
    throw std::invalid_argument("phi table needs columns t,phi");
  }
  auto ts = std::make_shared<std::vector<double>>();
  auto phis = std::make_shared<std::vector<double>>();
  for (const auto& row : table.rows) {
    if (row.size() < 2) continue;
    if (!ts->empty() && row[0] <= ts->back()) {
      throw std::invalid_argument("phi table t grid must be increasing");
    }
    ts->push_back(row[0]);
    phis->push_back(row[1]);
  }
  if (ts->size() < 2) throw std::invalid_argument("phi table too short");
  if (ts->back() < t_needed) {
    throw std::invalid_argument(
        "phi table must cover t up to pi/min_spike = " +
        format_double(t_needed));
  }
  return [ts, phis](double t) {
    t = std::abs(t);  // tables cover t >= 0; the function is even
    const auto it = std::lower_bound(ts->begin(), ts->end(), t);
    if (it == ts->begin()) return phis->front();
    if (it == ts->end()) return phis->back();
    const std::size_t hi = static_cast<std::size_t>(it - ts->begin());
    const double frac = (t - (*ts)[hi - 1]) / ((*ts)[hi] - (*ts)[hi - 1]);
    return (*phis)[hi - 1] * (1.0 - frac) + (*phis)[hi] * frac;
  };
}

const char* recover_status_name(RecoverStatus s) {
  switch (s) {
    case RecoverStatus::NoZeroFound: return "no-zero-found";
    case RecoverStatus::MaxSpikesReached: return "max-spikes-reached";
    case RecoverStatus::ZeroCollision: return "zero-collision";
  }
  return "unknown";
}

int run_recover(const RecoverOpts& o) {
  const ModelKind model = model_from_name(o.model);
  if (o.roundtrip.empty() == o.phi_table.empty()) {
    throw std::invalid_argument("need exactly one of --roundtrip/--phi-table");
  }

  json result{{"command", "recover"},
              {"model", o.model},
              {"max_spikes", o.max_spikes},
              {"min_spike", o.min_spike}};

  RecoverResult rec;
  AlphaSequence truth;
  bool have_truth = false;
  if (!o.roundtrip.empty()) {
    truth = make_alpha(parse_double_list(o.roundtrip));
    have_truth = true;
    const LimitLaw law{truth, model};
    const std::function<double(double)> phi = [&law](double t) {
      return char_fn(law, t);
    };
    rec = recover_alpha(phi, model, o.max_spikes, o.min_spike);
    result["source"] = "roundtrip";
    result["true_alpha"] = truth.entries();
  } else {
    const double t_needed =
        (model == ModelKind::ContinuousCube ? 3.14159265358979323846
                                            : 1.5707963267948966192) /
        o.min_spike;
    rec = recover_alpha(table_evaluator(o.phi_table, t_needed), model,
                        o.max_spikes, o.min_spike);
    result["source"] = "table";
    result["phi_table"] = o.phi_table;
  }

  result["recovered"] = rec.alpha.entries();
  result["status"] = recover_status_name(rec.status);
  result["residual_gaussian"] = rec.residual_gaussian;
  result["residual_curvature"] = rec.residual_curvature;
  if (have_truth) {
    std::vector<double> errors;
    double max_error = 0.0;
    const std::size_t m = std::max(truth.size(), rec.alpha.size());
    for (std::size_t k = 0; k < m; ++k) {
      errors.push_back(rec.alpha[k] - truth[k]);
      max_error = std::max(max_error, std::abs(errors.back()));
    }
    result["errors"] = errors;
    result["max_error"] = max_error;
  }

  const std::string text = result.dump() + "\n";
  std::cout << text;
  if (!o.out.empty()) write_output(o.out, text);
  if (o.strict && rec.status == RecoverStatus::ZeroCollision) return 4;
  return 0;
}

// ------------------------------------------------------------- verify-ldp

struct VerifyOpts {
  std::string window;
  std::string n_list;
  std::size_t count = 1000000;
  std::uint64_t seed = 0;
  std::string estimator = "auto";
  std::string out;
  bool strict = false;
};

EstimatorKind estimator_from_name(const std::string& name) {
  if (name == "auto") return EstimatorKind::Auto;
  if (name == "direct") return EstimatorKind::Direct;
  if (name == "conditional") return EstimatorKind::Conditional;
  throw std::invalid_argument("estimator must be auto|direct|conditional");
}

int run_verify_ldp(const VerifyOpts& o) {
  const WindowSpec w = parse_window(o.window);
  const std::vector<int> ns = parse_int_list(o.n_list);
  if (ns.empty()) throw std::invalid_argument("need at least one n");

  const auto rows = empirical_rate_curve(ns, w, o.count, {o.seed, 0},
                                         estimator_from_name(o.estimator));

  std::vector<std::vector<double>> cells;
  std::vector<std::string> methods;
  bool any_zero_hits = false;
  for (const LdpEstimate& est : rows) {
    cells.push_back({static_cast<double>(est.n), est.p_hat, est.ci_low,
                     est.ci_high, est.rate_hat, est.lower_rate_bound,
                     est.upper_rate_bound,
                     static_cast<double>(est.sample_count),
                     static_cast<double>(est.seed)});
    methods.push_back(est.method == EstimatorKind::Direct ? "direct"
                                                          : "conditional");
    any_zero_hits = any_zero_hits || est.status == EstimateStatus::ZeroHits;
  }

  json meta{{"command", "verify-ldp"}, {"window", window_json(w)},
            {"n", ns},                 {"count", o.count},
            {"seed", o.seed},          {"estimator", o.estimator},
            {"methods", methods}};
  write_output(o.out, table_csv(meta,
                                "n,p_hat,ci_low,ci_high,rate_hat,lower_bound,"
                                "upper_bound,samples,seed",
                                cells));
  if (o.strict && any_zero_hits) {
    std::cerr << "zero hits in at least one row\n";
    return 4;
  }
  return 0;
}

void apply_thread_cap() {
#ifdef _OPENMP
  if (const char* env = std::getenv("PROJLDP_THREADS")) {
    const int k = std::atoi(env);
    if (k > 0) omp_set_num_threads(k);
  }
#endif
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();

  CLI::App app{"random projections of the cube: samplers, limit laws, and "
               "deviation-rate experiments"};
  app.require_subcommand(1);

  ProjectOpts project;
  CLI::App* cmd_project =
      app.add_subcommand("project", "sample a one-dimensional projection");
  cmd_project->add_option("--n", project.n, "ambient dimension")->required();
  cmd_project->add_option("--model", project.model, "continuous|discrete")
      ->required();
  cmd_project
      ->add_option("--theta", project.theta,
                   "uniform-random, spiked:a1,a2,..., or explicit list")
      ->required();
  cmd_project->add_option("--count", project.count, "number of draws");
  cmd_project->add_option("--seed", project.seed, "RNG seed");
  cmd_project->add_option("--out", project.out, "samples CSV path")->required();
  cmd_project->add_option("--summary", project.summary_path,
                          "also write the summary JSON here");

  RateOpts rate;
  CLI::App* cmd_rate = app.add_subcommand("rate", "deviation rate of a spike sequence");
  cmd_rate->add_option("--alpha", rate.alpha, "comma list, may be empty")
      ->required();
  cmd_rate->add_option("--out", rate.out, "output path (default stdout)");

  TableOpts charfn;
  CLI::App* cmd_charfn =
      app.add_subcommand("charfn", "characteristic-function table");
  cmd_charfn->add_option("--alpha", charfn.alpha, "comma list")->required();
  cmd_charfn->add_option("--model", charfn.model, "continuous|discrete")
      ->required();
  cmd_charfn->add_option("--grid", charfn.grid, "t grid start:stop:step")
      ->required();
  cmd_charfn->add_option("--out", charfn.out, "output path (default stdout)");

  TableOpts density;
  CLI::App* cmd_density = app.add_subcommand("density", "limit-law density table");
  cmd_density->add_option("--alpha", density.alpha, "comma list")->required();
  cmd_density->add_option("--model", density.model, "continuous|discrete")
      ->required();
  cmd_density->add_option("--grid", density.grid, "x grid start:stop:step")
      ->required();
  cmd_density->add_option("--out", density.out, "output path (default stdout)");
  cmd_density->add_flag("--cdf", density.cdf, "tabulate the CDF instead");

  MarginalOpts marginal;
  CLI::App* cmd_marginal = app.add_subcommand(
      "marginal", "sphere-coordinate marginal density table");
  cmd_marginal->add_option("--n", marginal.n, "sphere dimension")->required();
  cmd_marginal->add_option("--l", marginal.l, "number of coordinates");
  cmd_marginal->add_option("--grid", marginal.grid, "s grid start:stop:step")
      ->required();
  cmd_marginal->add_option("--out", marginal.out, "output path (default stdout)");
  cmd_marginal->add_flag("--tail", marginal.tail,
                         "tabulate the upper tail of |Theta_1| instead");

  RecoverOpts recover;
  CLI::App* cmd_recover = app.add_subcommand(
      "recover", "recover the spike sequence from a characteristic function");
  cmd_recover->add_option("--roundtrip", recover.roundtrip,
                          "alpha list: recover from its own char fn");
  cmd_recover->add_option("--phi-table", recover.phi_table,
                          "CSV with columns t,phi (interpolated)");
  cmd_recover->add_option("--model", recover.model, "continuous|discrete")
      ->required();
  cmd_recover->add_option("--max-spikes", recover.max_spikes, "recovery cap");
  cmd_recover->add_option("--min-spike", recover.min_spike,
                          "smallest spike to look for");
  cmd_recover->add_option("--out", recover.out, "also write the JSON here");
  cmd_recover->add_flag("--strict", recover.strict,
                        "exit 4 on zero-collision");

  VerifyOpts verify;
  CLI::App* cmd_verify = app.add_subcommand(
      "verify-ldp", "window-probability rate curve against analytic bounds");
  cmd_verify->add_option("--window", verify.window, "center:radius")->required();
  cmd_verify->add_option("--n", verify.n_list, "comma list of dimensions")
      ->required();
  cmd_verify->add_option("--count", verify.count, "samples per row");
  cmd_verify->add_option("--seed", verify.seed, "RNG seed");
  cmd_verify->add_option("--estimator", verify.estimator,
                         "auto|direct|conditional");
  cmd_verify->add_option("--out", verify.out, "output path (default stdout)");
  cmd_verify->add_flag("--strict", verify.strict, "exit 4 on zero hits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (cmd_project->parsed()) return run_project(project);
    if (cmd_rate->parsed()) return run_rate(rate);
    if (cmd_charfn->parsed()) return run_charfn(charfn);
    if (cmd_density->parsed()) return run_density(density);
    if (cmd_marginal->parsed()) return run_marginal(marginal);
    if (cmd_recover->parsed()) return run_recover(recover);
    if (cmd_verify->parsed()) return run_verify_ldp(verify);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
