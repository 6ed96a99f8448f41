#include <cstdint>

#include "selstab/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

namespace selstab {
namespace {

// Entries stay in [0, ell) with ell < 2^30, so sums fit comfortably in
// signed 32-bit lanes and cmpgt works as an unsigned-range compare.
inline __m256i addmod(__m256i x, __m256i y, __m256i mod, __m256i modm1) {
  __m256i s = _mm256_add_epi32(x, y);
  __m256i over = _mm256_cmpgt_epi32(s, modm1);
  return _mm256_sub_epi32(s, _mm256_and_si256(over, mod));
}

inline std::uint64_t eval_mod(std::uint64_t x, std::uint64_t a, std::uint64_t b,
                              std::uint64_t ell) {
  std::uint64_t x2 = (x * x) % ell;
  return ((x2 * x) % ell + (a * x) % ell + b) % ell;
}

}  // namespace

// Lane j walks x = j, j+8, j+16, ...; with stride s = 8 the lane-wise third
// difference of x^3 + ax + b is the constant 6 s^3 = 3072. Gathers read four
// bytes from tbl (hence the required padding) and keep the low byte.
std::uint64_t scan_avx2(std::uint32_t ell, std::uint32_t a, std::uint32_t b,
                        const std::uint8_t* tbl) {
  if (ell < 64) return scan_scalar(ell, a, b, tbl);
  constexpr std::uint64_t s = 8;
  alignas(32) std::uint32_t v0[8], d10[8], d20[8];
  for (std::uint64_t j = 0; j < 8; ++j) {
    std::uint64_t f0 = eval_mod(j, a, b, ell);
    std::uint64_t f1 = eval_mod(j + s, a, b, ell);
    std::uint64_t f2 = eval_mod(j + 2 * s, a, b, ell);
    v0[j] = static_cast<std::uint32_t>(f0);
    d10[j] = static_cast<std::uint32_t>((f1 + ell - f0) % ell);
    d20[j] = static_cast<std::uint32_t>((f2 + 2 * ell - 2 * f1 + f0) % ell);
  }
  const __m256i mod = _mm256_set1_epi32(static_cast<int>(ell));
  const __m256i modm1 = _mm256_set1_epi32(static_cast<int>(ell - 1));
  const __m256i d3 = _mm256_set1_epi32(static_cast<int>((6 * s * s * s) % ell));
  const __m256i low_byte = _mm256_set1_epi32(0xFF);
  __m256i v = _mm256_load_si256(reinterpret_cast<const __m256i*>(v0));
  __m256i d1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(d10));
  __m256i d2 = _mm256_load_si256(reinterpret_cast<const __m256i*>(d20));
  __m256i acc = _mm256_setzero_si256();
  const std::uint64_t iters = ell / 8;
  std::uint64_t sum = 0;
  std::uint64_t done = 0;
  while (done < iters) {
    // Lane accumulators are drained before they could near 2^31.
    std::uint64_t burst = iters - done;
    if (burst > (1u << 22)) burst = 1u << 22;
    for (std::uint64_t i = 0; i < burst; ++i) {
      __m256i t = _mm256_i32gather_epi32(reinterpret_cast<const int*>(tbl), v, 1);
      acc = _mm256_add_epi32(acc, _mm256_and_si256(t, low_byte));
      v = addmod(v, d1, mod, modm1);
      d1 = addmod(d1, d2, mod, modm1);
      d2 = addmod(d2, d3, mod, modm1);
    }
    alignas(32) std::uint32_t lanes[8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    for (std::uint32_t lane : lanes) sum += lane;
    acc = _mm256_setzero_si256();
    done += burst;
  }
  for (std::uint64_t x = iters * 8; x < ell; ++x) sum += tbl[eval_mod(x, a, b, ell)];
  return sum;
}

}  // namespace selstab

#endif  // __AVX2__
