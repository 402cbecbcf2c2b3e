#pragma once

// Counter-based random streams. A (master, stream) pair fully determines the
// sequence, so replicas can run on any worker in any order.

#include <array>
#include <cstdint>
#include <limits>
#include <string>

namespace hypvor {

struct Seed {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;

  Seed with_stream(std::uint64_t s) const { return {master, s}; }
  /// Independent master key for a tagged sub-experiment.
  Seed derive(std::uint64_t tag) const;
  std::string str() const;
  bool operator==(const Seed&) const = default;
};

std::uint64_t mix64(std::uint64_t x);

/// Philox4x32-10 keyed by the master seed, with the stream index in the upper
/// counter words. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(const Seed& seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  bool coin() { return ((*this)() >> 63) != 0; }
  std::int64_t poisson(double mean);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint64_t, 2> buffer_{};
  int available_ = 0;
};

}  // namespace hypvor
