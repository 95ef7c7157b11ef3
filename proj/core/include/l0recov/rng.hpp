#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace l0recov {

/// Seeded pseudorandom stream used by every generator in the library.
///
/// Generator (version 1): std::mt19937_64 seeded with the 64-bit seed. Its
/// output sequence is fixed by the C++ standard, so the raw 64-bit words are
/// identical on every conforming platform. Derived deviates:
///   - uniform():  top 53 bits of one word, scaled to [0, 1)
///   - normal():   Marsaglia polar method on uniform() pairs, second deviate
///                 of each accepted pair cached for the next call
///   - below(n):   rejection sampling on full words, no modulo bias
///
/// The standard library distributions are deliberately not used; their
/// algorithms are implementation-defined.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  /// Independent stream for trial `index` of an experiment seeded with
  /// `master` (splitmix64 mixing of both values).
  static RngStream derive(std::uint64_t master, std::uint64_t index);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  double uniform();
  double normal();
  /// Uniform integer in [0, n). Requires n >= 1.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace l0recov
