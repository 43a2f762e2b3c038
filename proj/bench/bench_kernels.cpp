// Times the OpenMP Monte Carlo kernels against their serial reference
// loops. Both paths run the same chunk decomposition, so the outputs are
// bit-identical and the comparison is pure scheduling overhead vs speedup.
//
//   projldp_bench [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "projldp/ldp.hpp"
#include "projldp/limitlaw.hpp"
#include "projldp/sphere.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = Clock::now();
    f();
    const auto t1 = Clock::now();
    best = std::min(
        best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-34s serial %9.1f ms   parallel %9.1f ms   speedup %.2fx\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP disabled)\n");
#endif

  using namespace projldp;

  {
    const WindowSpec w({0.6}, 0.1);
    const std::size_t count = 200000;
    const double ser = time_ms(repeats, [&] {
      estimate_window_probability(200, w, count, {1, 0}, Exec::Serial);
    });
    const double par = time_ms(repeats, [&] {
      estimate_window_probability(200, w, count, {1, 0}, Exec::Parallel);
    });
    report("window hits (n=200, 2e5)", ser, par);
  }

  {
    const WindowSpec w({0.6}, 0.1);
    const std::size_t count = 200000;
    const double ser = time_ms(repeats, [&] {
      estimate_window_probability_conditional(200, w, count, {2, 0},
                                              Exec::Serial);
    });
    const double par = time_ms(repeats, [&] {
      estimate_window_probability_conditional(200, w, count, {2, 0},
                                              Exec::Parallel);
    });
    report("conditional window (n=200, 2e5)", ser, par);
  }

  {
    const Direction theta = sample_sphere(1000, {3, 0});
    const std::size_t count = 50000;
    const double ser = time_ms(repeats, [&] {
      sample_projection(theta, ModelKind::ContinuousCube, count, {4, 0},
                        Exec::Serial);
    });
    const double par = time_ms(repeats, [&] {
      sample_projection(theta, ModelKind::ContinuousCube, count, {4, 0},
                        Exec::Parallel);
    });
    report("projection (n=1000, 5e4)", ser, par);
  }

  {
    const LimitLaw law{make_alpha(std::vector<double>{0.6, 0.3}),
                       ModelKind::ContinuousCube};
    const std::size_t count = 2000000;
    const double ser = time_ms(repeats, [&] {
      sample_limit(law, count, {5, 0}, Exec::Serial);
    });
    const double par = time_ms(repeats, [&] {
      sample_limit(law, count, {5, 0}, Exec::Parallel);
    });
    report("limit-law draws (2e6)", ser, par);
  }

  return 0;
}
