#include "mlelim/rng.hpp"

#include <limits>

#include "mlelim/errors.hpp"

namespace mlelim {

std::uint64_t SampleStream::next_uint(std::uint64_t lo, std::uint64_t hi) {
  if (hi < lo) throw Error("empty sample range");
  const std::uint64_t span = hi - lo + 1;
  if (span == 0) return engine_();  // full 64-bit range
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % span + 1) % span;
  for (;;) {
    std::uint64_t r = engine_();
    ++draws_;
    if (r <= limit) return lo + r % span;
  }
}

std::vector<BigRational> SampleStream::point(std::size_t k) {
  std::vector<BigRational> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(next());
  return out;
}

}  // namespace mlelim
