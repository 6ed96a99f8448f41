#pragma once

#include <cstdint>
#include <vector>

#include "selstab/frobenius.hpp"
#include "selstab/omega.hpp"

namespace selstab {

// Case split for one raised prime power ell^alpha, checked in this order.
enum class CarayolCase { C1, C2a, C2b, C3a, C3b };

const char* carayol_case_name(CarayolCase c);

struct RaisedPrime {
  std::uint64_t ell = 0;
  std::uint32_t alpha = 0;
  CarayolCase kase = CarayolCase::C1;
};

struct LevelFactorization {
  std::uint64_t level = 0;
  std::uint64_t base = 0;              // n_rho_bar
  std::vector<RaisedPrime> raised;     // ascending ell
};

enum class LevelVerdict { Admissible, NotAdmissible, Unknown };

enum class LevelFailure {
  None,
  BaseNotDividing,   // n_rho_bar does not divide level
  PDividesLevel,     // p | level
  FailedAt,          // no case applies at failed_prime
  MissingTraceAt,    // some case undecidable at failed_prime, none certified
};

struct CarayolResult {
  LevelVerdict verdict = LevelVerdict::Unknown;
  LevelFactorization factorization;    // filled for Admissible
  LevelFailure failure = LevelFailure::None;
  std::uint64_t failed_prime = 0;      // set for FailedAt / MissingTraceAt
};

// Decides level admissibility prime by prime. For each ell^alpha dividing
// level/n_rho_bar the cases are tried in declaration order; the first one
// whose hypotheses hold certifies ell. A prime where some case needs an
// unavailable trace (and no later case certifies) makes the level Unknown
// rather than NotAdmissible; a definite failure at any prime wins over
// Unknown at another.
CarayolResult carayol_check(const ResidualRepSpec& spec, std::uint64_t level,
                            const TraceMap* cache = nullptr);

struct AdmissibleEnumeration {
  std::uint64_t bound = 0;
  std::vector<LevelFactorization> levels;   // ascending level
  std::vector<std::uint64_t> unknown;       // ascending
};

// All admissible levels N <= X (multiples of n_rho_bar only).
AdmissibleEnumeration enumerate_admissible(const ResidualRepSpec& spec, std::uint64_t x,
                                           unsigned threads = 1);

}  // namespace selstab
