#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "selstab/errors.hpp"

namespace selstab {

// Exact fraction, always stored reduced with positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  bool operator==(const Rational&) const = default;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

inline Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidParameter("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g == 0) g = 1;
  return Rational{num / g, den / g};
}

}  // namespace selstab
