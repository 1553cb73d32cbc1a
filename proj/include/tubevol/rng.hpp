#ifndef TUBEVOL_RNG_HPP
#define TUBEVOL_RNG_HPP

#include <cmath>
#include <cstdint>

namespace tubevol {

// Fixed stream ids so that every randomized operation in the library draws
// from its own (seed, stream, index) lane. Any partition of an index range
// across threads reproduces the serial result.
namespace stream {
inline constexpr std::uint64_t kBallSample = 1;
inline constexpr std::uint64_t kCapSample = 2;
inline constexpr std::uint64_t kProjection = 3;
inline constexpr std::uint64_t kRotation = 4;
inline constexpr std::uint64_t kRidgeForm = 5;
inline constexpr std::uint64_t kProbe = 6;
inline constexpr std::uint64_t kNormalFiber = 7;
inline constexpr std::uint64_t kVarietySample = 8;
inline constexpr std::uint64_t kAudit = 9;
}  // namespace stream

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Counter-based generator: the state is a pure function of
// (seed, stream, index), and draws walk a SplitMix64 sequence from there.
class SampleRng {
 public:
  SampleRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
      : state_(mix64(mix64(mix64(seed + 0x9E3779B97F4A7C15ull) ^ stream) ^
                     index)),
        cached_(false),
        cache_(0.0) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  // Uniform on [0,1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0,1]; safe as a log() argument.
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; the second value of each pair is cached.
  double gaussian() {
    if (cached_) {
      cached_ = false;
      return cache_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cache_ = r * std::sin(a);
    cached_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  bool cached_;
  double cache_;
};

struct RngKey {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  SampleRng at(std::uint64_t index) const { return {seed, stream, index}; }
};

}  // namespace tubevol

#endif  // TUBEVOL_RNG_HPP
