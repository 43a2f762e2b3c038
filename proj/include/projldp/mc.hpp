#ifndef PROJLDP_MC_HPP_
#define PROJLDP_MC_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "projldp/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace projldp {

// Serial runs the plain reference loop; Parallel runs the same chunk
// decomposition under OpenMP. Both merge per-chunk results in chunk order,
// so the output is bit-identical regardless of execution mode or thread
// count.
enum class Exec { Serial, Parallel };

namespace mc {

// Samples per RNG chunk. Each chunk owns one substream, so the total draw
// budget per call is capped at kChunkSize << kChunkStreamBits samples.
inline constexpr std::size_t kChunkSize = 1u << 14;
inline constexpr unsigned kChunkStreamBits = 20;

inline std::size_t chunk_count(std::size_t total) {
  return total == 0 ? 0 : (total - 1) / kChunkSize + 1;
}

// Substream layout: caller-level streams are spaced 2^20 apart, chunks fill
// the gap. Callers that need several independent estimates from one RngSpec
// should bump `stream` by one per estimate.
inline RngSpec chunk_spec(RngSpec base, std::size_t chunk) {
  return {base.seed, (base.stream << kChunkStreamBits) + chunk};
}

// Applies fn(chunk_index, samples_in_chunk, rng) to every chunk and returns
// the per-chunk results in chunk order. R must be default-constructible.
template <typename R, typename ChunkFn>
std::vector<R> map_chunks(std::size_t total, RngSpec rng, ChunkFn&& fn,
                          Exec exec) {
  const std::size_t chunks = chunk_count(total);
  std::vector<R> results(chunks);
  if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
      const std::size_t i = static_cast<std::size_t>(c);
      const std::size_t begin = i * kChunkSize;
      const std::size_t n = std::min(kChunkSize, total - begin);
      Rng r(chunk_spec(rng, i));
      results[i] = fn(i, n, r);
    }
  } else {
    for (std::size_t i = 0; i < chunks; ++i) {
      const std::size_t begin = i * kChunkSize;
      const std::size_t n = std::min(kChunkSize, total - begin);
      Rng r(chunk_spec(rng, i));
      results[i] = fn(i, n, r);
    }
  }
  return results;
}

// Counts per-sample predicate hits over `total` draws.
template <typename Pred>
std::uint64_t count_hits(std::size_t total, RngSpec rng, Pred&& pred,
                         Exec exec) {
  auto per_chunk = [&pred](std::size_t, std::size_t n, Rng& r) {
    std::uint64_t hits = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (pred(r)) ++hits;
    }
    return hits;
  };
  std::uint64_t hits = 0;
  for (std::uint64_t h :
       map_chunks<std::uint64_t>(total, rng, per_chunk, exec)) {
    hits += h;
  }
  return hits;
}

// Fills a vector with `total` draws of gen(rng); positions are fixed by the
// chunk layout, so the result does not depend on the execution mode.
template <typename Gen>
std::vector<double> generate(std::size_t total, RngSpec rng, Gen&& gen,
                             Exec exec) {
  std::vector<double> out(total);
  double* data = out.data();
  auto per_chunk = [&gen, data](std::size_t i, std::size_t n, Rng& r) {
    double* p = data + i * kChunkSize;
    for (std::size_t k = 0; k < n; ++k) p[k] = gen(r);
    return 0;
  };
  map_chunks<int>(total, rng, per_chunk, exec);
  return out;
}

}  // namespace mc
}  // namespace projldp

#endif  // PROJLDP_MC_HPP_
