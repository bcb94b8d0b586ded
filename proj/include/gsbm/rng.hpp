#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace gsbm {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Identifies one logical stream of randomness (e.g. one simulated path).
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Counter-based generator: the state is a pure function of
// (seed, stream, substream), so draws are reproducible and independent of
// evaluation order. Simulation keys substreams by step index.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0)
      : state_(mix_key(seed, stream, substream)) {}
  RngStream(StreamKey key, std::uint64_t substream = 0)
      : RngStream(key.seed, key.stream, substream) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  // Uniform on the open interval (0,1); never returns an exact endpoint.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // One standard normal draw; always consumes exactly two uniforms.
  double next_normal() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = splitmix64(h + 0x9e3779b97f4a7c15ULL * (a + 1));
    h = splitmix64(h + 0x9e3779b97f4a7c15ULL * (b + 1));
    return h;
  }

  std::uint64_t state_;
};

}  // namespace gsbm
