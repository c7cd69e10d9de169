#pragma once

#include <array>
#include <cmath>
#include <cstdint>

// Counter-based random numbers (Philox4x32-10).  Every (seed, stream) pair is
// an independent reproducible sequence addressed by a 64-bit cell counter, so
// Monte Carlo paths can be generated in any order -- or on several threads --
// and still produce bit-identical results for a given seed.

namespace alcove {

namespace philox {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint64_t stream,
                                          std::uint64_t cell) {
  std::uint32_t x0 = static_cast<std::uint32_t>(cell);
  std::uint32_t x1 = static_cast<std::uint32_t>(cell >> 32);
  std::uint32_t x2 = static_cast<std::uint32_t>(stream);
  std::uint32_t x3 = static_cast<std::uint32_t>(stream >> 32);
  std::uint32_t k0 = static_cast<std::uint32_t>(seed);
  std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
  for (int round = 0; round < 10; ++round) {
    std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * x0;
    std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * x2;
    std::uint32_t y0 = static_cast<std::uint32_t>(p1 >> 32) ^ x1 ^ k0;
    std::uint32_t y1 = static_cast<std::uint32_t>(p1);
    std::uint32_t y2 = static_cast<std::uint32_t>(p0 >> 32) ^ x3 ^ k1;
    std::uint32_t y3 = static_cast<std::uint32_t>(p0);
    x0 = y0;
    x1 = y1;
    x2 = y2;
    x3 = y3;
    k0 += kW0;
    k1 += kW1;
  }
  return {x0, x1, x2, x3};
}

}  // namespace philox

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  // U(0,1), strictly inside the open interval.
  double uniform() {
    if (ucount_ == 0) {
      ubuf_ = philox::block(seed_, stream_, cell_++);
      ucount_ = 4;
    }
    std::uint32_t x = ubuf_[4 - ucount_--];
    return (static_cast<double>(x) + 0.5) * 0x1p-32;
  }

  // N(0,1) via Box-Muller on consecutive uniforms.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t cell_ = 0;
  std::array<std::uint32_t, 4> ubuf_{};
  int ucount_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace alcove
