#include "xorcount/rng.hpp"

namespace xorcount {

std::uint64_t BitSource::below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t u = 0;
  do {
    u = engine_();
  } while (u >= limit);
  return u % bound;
}

}  // namespace xorcount
