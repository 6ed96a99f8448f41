#pragma once

#include <cstdint>

#include "selstab/rational.hpp"

namespace selstab {

// Full-enumeration density checks run in O(p^4); this cap keeps them desk
// scale unless the caller raises it deliberately.
inline constexpr std::uint32_t kDefaultDensityMaxP = 13;

struct Mat2f {
  std::uint32_t a = 0, b = 0, c = 0, d = 0;  // entries mod p
};

// True iff m is semisimple with eigenvalues {-mu, -1} for some mu with
// mu != 0, +-1; equivalently char(-1) = 0 and the second eigenvalue
// mu = -det avoids {1, -1}. mu != -1 already forces distinct eigenvalues,
// so no separate semisimplicity check is needed.
// Errors: InvalidParameter if m is not invertible mod p or p < 5.
bool is_omega_class(const Mat2f& m, std::uint32_t p);

struct DensityReport {
  std::uint32_t p = 0;
  std::int64_t group_order = 0;
  std::int64_t matching_count = 0;
  Rational exact_fraction;
  Rational closed_form;
  bool match = false;
};

// (p-3)/(p-1)^2, reduced.
Rational omega_density_closed_form(std::uint32_t p);

// Enumerates all of GL2(F_p) and counts matrices passing is_omega_class.
// Errors: InvalidParameter (p < 5 or composite), ResourceLimit (p > max_p).
DensityReport omega_density_bruteforce(std::uint32_t p, std::uint32_t max_p = kDefaultDensityMaxP,
                                       unsigned threads = 1);

}  // namespace selstab
