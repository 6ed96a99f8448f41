#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "selstab/errors.hpp"

namespace selstab {

inline constexpr std::uint64_t kDefaultPointCountBound = 1'000'000;
inline constexpr std::int64_t kMaxCurveCoefficient = 100'000;

// Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
struct CurveSpec {
  std::int64_t a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;

  // Exact in __int128 because |ai| <= kMaxCurveCoefficient keeps every term
  // well inside range.
  __int128 discriminant() const;
  void validate() const;  // InvalidParameter on zero discriminant or huge ai
};

// #E(F_ell) including the point at infinity; exhaustive, O(ell).
// Errors: InvalidParameter (ell not prime), BadReduction (ell | disc),
// ResourceLimit (ell > bound or beyond what the scan kernel accepts).
std::uint64_t count_points(const CurveSpec& curve, std::uint64_t ell,
                           std::uint64_t bound = kDefaultPointCountBound,
                           const std::string& kernel = "auto");

// a_ell = ell + 1 - #E(F_ell); |a_ell| <= 2*sqrt(ell).
std::int64_t trace_of_frobenius(const CurveSpec& curve, std::uint64_t ell,
                                std::uint64_t bound = kDefaultPointCountBound,
                                const std::string& kernel = "auto");

// Precomputed a_ell mod p. File format: optional "# p=<p>" header line,
// then "ell,value" rows; values are reduced mod p on load.
struct TraceTable {
  std::uint32_t p = 0;  // 0 until a header or binding supplies it
  std::map<std::uint64_t, std::uint32_t> entries;
};

TraceTable load_trace_table(const std::string& path);

// Semisimple Frobenius data mod p at a good prime.
struct FrobClass {
  std::uint64_t ell = 0;
  std::uint32_t trace = 0;  // a_ell mod p
  std::uint32_t det = 0;    // ell mod p
};

struct CurveSource {
  CurveSpec curve;
};
struct TableSource {
  TraceTable table;
};

// Everything the sieve and level machinery needs to know about the residual
// representation: p, its conductor, and where trace values come from.
struct ResidualRepSpec {
  std::uint32_t p = 0;
  std::uint64_t n_rho_bar = 0;
  std::variant<CurveSource, TableSource> source = CurveSource{};
  bool surjective_asserted = false;
  std::uint64_t pointcount_bound = kDefaultPointCountBound;
  std::string kernel = "auto";

  void validate() const;
  bool has_curve() const { return std::holds_alternative<CurveSource>(source); }
};

// a_ell mod p, or nullopt when no source covers ell (table gap, bad
// reduction, or ell beyond pointcount_bound). Never throws for prime ell.
std::optional<std::uint32_t> trace_mod_p(const ResidualRepSpec& spec, std::uint64_t ell);

// Errors: InvalidParameter when ell | p * n_rho_bar, MissingTrace when the
// source cannot supply a_ell.
FrobClass frobenius_data(const ResidualRepSpec& spec, std::uint64_t ell);

// Batched trace residues for every prime <= bound coprime to p * n_rho_bar;
// nullopt entries mark unavailable values. With omega_candidates_only set,
// primes = +-1 mod p are skipped (their classification never reads a trace).
struct TraceMap {
  std::map<std::uint64_t, std::optional<std::uint32_t>> entries;
};

TraceMap compute_traces(const ResidualRepSpec& spec, std::uint64_t bound, unsigned threads,
                        bool omega_candidates_only);

}  // namespace selstab
