#include "carlab/rng.hpp"

#include <stdexcept>

namespace carlab {

std::uint64_t SplitRng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("SplitRng::below: n must be > 0");
  // Multiply-shift map of a 64-bit draw onto {0..n-1}.
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

}  // namespace carlab
