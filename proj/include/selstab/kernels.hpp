#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace selstab {

// Kernel input cap: conditional-subtract adds need v + d < 2^31.
inline constexpr std::uint64_t kKernelMaxModulus = 1ull << 30;

// tbl[v] = #{y in [0,ell) : y^2 = v mod ell}; values lie in {0,1,2}.
// The buffer is padded with >= 8 zero bytes past tbl[ell-1] so vector gathers
// may read past the logical end.
std::vector<std::uint8_t> build_square_count_table(std::uint32_t ell);

// sum over x in [0,ell) of tbl[(x^3 + A*x + B) mod ell]; A, B already reduced.
using ScanFn = std::uint64_t (*)(std::uint32_t ell, std::uint32_t a, std::uint32_t b,
                                 const std::uint8_t* tbl);

std::uint64_t scan_scalar(std::uint32_t ell, std::uint32_t a, std::uint32_t b,
                          const std::uint8_t* tbl);

// True when the named variant is compiled in and runnable on this CPU.
bool scan_kernel_available(const std::string& name);

// name: "auto" picks the fastest variant the CPU supports; "scalar" and
// "avx2" force one. Unknown or unavailable names throw InvalidParameter.
ScanFn select_scan_kernel(const std::string& name);

// Resolves "auto" to the variant select_scan_kernel would return.
std::string active_scan_kernel_name(const std::string& name);

}  // namespace selstab
