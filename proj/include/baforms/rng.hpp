#pragma once

// Small deterministic PRNG used across the library.  Hand-rolled (splitmix64
// state walk + Box-Muller) so that a given seed produces identical streams on
// every platform/toolchain -- the verification reports are required to be
// byte-stable for a fixed seed, and the standard <random> distributions make
// no such guarantee.

#include <cmath>
#include <cstdint>

namespace baf {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Independent child stream; mixing keeps (seed, key) pairs well separated.
  Rng child(std::uint64_t key) const {
    Rng r(state_ ^ (0x9e3779b97f4a7c15ull * (key + 0x632be59bd9b4e019ull)));
    r.next_u64();
    return r;
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace baf
