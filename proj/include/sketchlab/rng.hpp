#pragma once

#include <cstdint>
#include <limits>

namespace sketchlab {

// Counter-based splittable generator. Output words are a strong 64-bit mix of
// (key, counter), so a stream is a pure function of (seed, stream) and
// distinct streams are independent. Satisfies uniform_random_bit_generator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : key_(derive_key(seed, stream)), counter_(0) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // Independent child stream, e.g. one per Monte-Carlo trial.
  RngStream child(std::uint64_t tag) const {
    RngStream c;
    c.key_ = mix64(key_ ^ mix64(tag + 0x5851f42d4c957f2dULL));
    c.counter_ = 0;
    return c;
  }

  // Uniform in [0,1) with 53 random bits.
  double unit() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  // Unbiased uniform integer in [0, bound). Lemire's multiply-shift rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    while (true) {
      std::uint64_t x = (*this)();
      __uint128_t m = static_cast<__uint128_t>(x) * bound;
      std::uint64_t lo = static_cast<std::uint64_t>(m);
      if (lo >= bound || lo >= (0ULL - bound) % bound) {
        return static_cast<std::uint64_t>(m >> 64);
      }
    }
  }

  static std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
  }

 private:
  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
    return mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^ (stream * 0xda942042e4dd58b5ULL + 1));
  }

  std::uint64_t key_;
  std::uint64_t counter_;
};

// (seed, stream) pair; the value type named by configs and logs.
struct RngHandle {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  RngStream stream_for() const { return RngStream(seed, stream); }
  RngHandle with_stream(std::uint64_t s) const { return RngHandle{seed, s}; }
};

}  // namespace sketchlab
