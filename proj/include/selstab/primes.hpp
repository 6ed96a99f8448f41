#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "selstab/errors.hpp"

namespace selstab {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod_u64(r, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin; the base set decides correctly for all n < 3.3e24.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (n < 2) return out;
  if (n > (1ull << 31)) throw ResourceLimit("prime sieve bound too large");
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t i = 2; i * i <= n; ++i) {
    if (composite[i]) continue;
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (!composite[i]) out.push_back(i);
  }
  return out;
}

// Trial division; exponents carried explicitly. Fine for desk-scale levels.
inline std::vector<std::pair<std::uint64_t, std::uint32_t>> factorize(std::uint64_t n) {
  if (n == 0) throw InvalidParameter("factorize(0)");
  std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
  for (std::uint64_t q : {2ull, 3ull}) {
    std::uint32_t e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    if (e) out.emplace_back(q, e);
  }
  for (std::uint64_t q = 5; q * q <= n; q += (q % 6 == 5) ? 2 : 4) {
    std::uint32_t e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    if (e) out.emplace_back(q, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

}  // namespace selstab
