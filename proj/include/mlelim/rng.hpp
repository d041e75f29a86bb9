#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mlelim/rational.hpp"

namespace mlelim {

// Seeded stream of integer sample coordinates, uniform on [lo, hi].
//
// The engine is std::mt19937_64 (its output sequence is fixed by the C++
// standard) and bounded draws use rejection sampling on the raw 64-bit
// output, so streams are identical across compilers and platforms.
class SampleStream {
 public:
  static constexpr std::uint64_t kLow = 1;
  static constexpr std::uint64_t kHigh = 10000;

  explicit SampleStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return draws_; }

  std::uint64_t next_uint(std::uint64_t lo = kLow, std::uint64_t hi = kHigh);
  BigRational next() { return BigRational(BigInt(static_cast<unsigned long>(next_uint()))); }
  std::vector<BigRational> point(std::size_t k);

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uint64_t draws_ = 0;
};

}  // namespace mlelim
