#ifndef FIRMSCALE_RNG_HPP
#define FIRMSCALE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace firmscale {

// Fixed, portable generator stack so seeded runs reproduce everywhere:
// splitmix64 expands a 64-bit seed into xoshiro256++ state, and all
// samplers below are written against the raw 64-bit stream instead of
// the implementation-defined <random> distributions.

struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : s_) word = sm.next();
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero is invalid
  }

  std::uint64_t next() {
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

  // [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // (0, 1]
  double uniform_pos() { return 1.0 - uniform(); }

  double log_uniform(double lo, double hi) {
    return std::exp(std::log(lo) + uniform() * (std::log(hi) - std::log(lo)));
  }

  // Box-Muller; pairs are generated together and the sine branch is cached.
  double normal(double mean, double sd) {
    if (have_spare_) {
      have_spare_ = false;
      return mean + sd * spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return mean + sd * radius * std::cos(angle);
  }

  // Inverse CDF: x = location - scale * sgn(u) * ln(1 - 2|u|), u in (-1/2, 1/2).
  double laplace(double location, double scale) {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    u -= 0.5;
    const double sign = (u > 0.0) ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
    return location - scale * sign * std::log(1.0 - 2.0 * std::fabs(u));
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Independent substream per firm: stream i is seeded with
// seed XOR ((i + 1) * 0x9E3779B97F4A7C15), so parallel generation over
// firms reproduces the sequential output exactly.
inline Xoshiro256pp firm_stream(std::uint64_t seed, std::uint64_t firm_index) {
  return Xoshiro256pp(seed ^ ((firm_index + 1) * 0x9E3779B97F4A7C15ULL));
}

}  // namespace firmscale

#endif
