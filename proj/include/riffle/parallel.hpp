// Replicate-level parallelism.
//
// All Monte Carlo kernels follow the same pattern: replicate r writes its
// result into a preallocated slot, then the slots are reduced serially in
// index order. The OpenMP and serial paths therefore produce bit-identical
// output; the serial path is kept as the reference implementation and the
// two are compared in tests and in the benchmark target.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace riffle {

enum class ExecMode { Serial, OpenMP };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

template <class Fn>
void for_each_replicate(std::size_t replicates, ExecMode mode, Fn&& fn) {
  if (mode == ExecMode::OpenMP) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < static_cast<long long>(replicates); ++r)
      fn(static_cast<std::size_t>(r));
    return;
#endif
  }
  for (std::size_t r = 0; r < replicates; ++r) fn(r);
}

// Mean and standard error of a replicate vector; the summation order is the
// replicate index order, independent of how the slots were filled.
struct McSummary {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
};

inline McSummary summarize(const std::vector<double>& values, std::uint64_t seed) {
  McSummary s;
  s.replicates = values.size();
  s.seed = seed;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    s.stderr_ = std::sqrt(var / static_cast<double>(values.size()));
  }
  return s;
}

}  // namespace riffle
