#include <cstdint>

#include "selstab/kernels.hpp"

namespace selstab {

// f(x) = x^3 + a x + b stepped by finite differences: for step 1 the third
// difference of a cubic is the constant 6, so each x costs three
// conditional-subtract adds and one table load instead of two mulmods.
std::uint64_t scan_scalar(std::uint32_t ell, std::uint32_t a, std::uint32_t b,
                          const std::uint8_t* tbl) {
  std::uint32_t v = b % ell;            // f(0)
  std::uint32_t d1 = (1u + a) % ell;    // f(1) - f(0) = 1 + a
  std::uint32_t d2 = 6u % ell;          // f(2) - 2f(1) + f(0) = 6
  const std::uint32_t six = 6u % ell;
  std::uint64_t sum = 0;
  for (std::uint32_t x = 0; x < ell; ++x) {
    sum += tbl[v];
    v += d1;
    if (v >= ell) v -= ell;
    d1 += d2;
    if (d1 >= ell) d1 -= ell;
    d2 += six;
    if (d2 >= ell) d2 -= ell;
  }
  return sum;
}

}  // namespace selstab
