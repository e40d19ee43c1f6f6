#include "txseq/random.hpp"

#include <cmath>
#include <numbers>

namespace txseq {

double indexed_standard_normal(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t a = derive_seed(seed, {index, 1});
  const std::uint64_t b = derive_seed(seed, {index, 2});
  // u1 in (0, 1) so the logarithm is finite.
  const double u1 = (static_cast<double>(a >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace txseq
