#include "selstab/kernels.hpp"

#include <cstdint>

#include "selstab/errors.hpp"

namespace selstab {

#if defined(SELSTAB_HAVE_AVX2)
std::uint64_t scan_avx2(std::uint32_t ell, std::uint32_t a, std::uint32_t b,
                        const std::uint8_t* tbl);
#endif

std::vector<std::uint8_t> build_square_count_table(std::uint32_t ell) {
  if (ell < 2 || ell >= kKernelMaxModulus) throw InvalidParameter("table modulus out of range");
  // 8 zero bytes of padding so 4-byte gathers at index ell-1 stay in bounds.
  std::vector<std::uint8_t> tbl(static_cast<std::size_t>(ell) + 8, 0);
  // y and ell-y square to the same residue; walking y to ell/2 marks each
  // nonzero square twice except when 2y = ell (impossible for odd ell).
  tbl[0] = 1;
  std::uint64_t sq = 0;
  for (std::uint64_t y = 1; y <= ell / 2; ++y) {
    // (y)^2 - (y-1)^2 = 2y - 1 keeps the running square reduced.
    sq += 2 * y - 1;
    if (sq >= ell) sq -= ell;
    tbl[sq] += 2;
  }
  if (ell == 2) tbl[1] = 1;  // y = 1 is its own negative mod 2
  return tbl;
}

bool scan_kernel_available(const std::string& name) {
  if (name == "scalar") return true;
#if defined(SELSTAB_HAVE_AVX2)
  if (name == "avx2") return __builtin_cpu_supports("avx2");
#endif
  return false;
}

ScanFn select_scan_kernel(const std::string& name) {
  if (name == "auto") {
#if defined(SELSTAB_HAVE_AVX2)
    if (__builtin_cpu_supports("avx2")) return &scan_avx2;
#endif
    return &scan_scalar;
  }
  if (name == "scalar") return &scan_scalar;
#if defined(SELSTAB_HAVE_AVX2)
  if (name == "avx2") {
    if (!__builtin_cpu_supports("avx2")) throw InvalidParameter("avx2 not supported on this cpu");
    return &scan_avx2;
  }
#endif
  throw InvalidParameter("unknown scan kernel: " + name);
}

std::string active_scan_kernel_name(const std::string& name) {
  if (name != "auto") {
    select_scan_kernel(name);  // validates
    return name;
  }
#if defined(SELSTAB_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2")) return "avx2";
#endif
  return "scalar";
}

}  // namespace selstab
