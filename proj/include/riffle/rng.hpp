// Deterministic, platform-independent random streams.
//
// Every Monte Carlo replicate owns its own RngStream keyed by (seed, stream id),
// so results do not depend on thread count or iteration order. std::* engines
// and distributions are deliberately avoided: their output is
// implementation-defined and would break byte-identical reproducibility.
#pragma once

#include <cstdint>
#include <vector>

namespace riffle {

struct SplitMix64 {
  std::uint64_t x;
  explicit SplitMix64(std::uint64_t seed) : x(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

// xoshiro256++ seeded through SplitMix64 from (seed, stream).
// Same (seed, stream) -> bit-identical sequence on every platform.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
    SplitMix64 sm(seed ^ (0xD1B54A32D192ED03ull * (stream + 1)));
    for (auto& w : s_) w = sm.next();
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in [0,1), 53-bit mantissa
  double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  // unbiased uniform integer in [0, bound), bound >= 1
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
  std::uint64_t s_[4];
  std::uint64_t seed_;
  std::uint64_t stream_;
};

// Inverse-CDF digit sampler over {0,...,k-1} with fixed weights.
class DigitSampler {
 public:
  explicit DigitSampler(const std::vector<double>& weights) {
    cum_.reserve(weights.size());
    double acc = 0.0;
    for (double w : weights) {
      acc += w;
      cum_.push_back(acc);
    }
    cum_.back() = 1.0;  // guard against round-off at the top bin
  }

  int operator()(RngStream& rng) const {
    const double u = rng.uniform01();
    int d = 0;
    const int last = static_cast<int>(cum_.size()) - 1;
    while (d < last && u >= cum_[d]) ++d;
    return d;
  }

 private:
  std::vector<double> cum_;
};

}  // namespace riffle
