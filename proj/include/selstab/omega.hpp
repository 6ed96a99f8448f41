#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "selstab/frobenius.hpp"
#include "selstab/rational.hpp"

namespace selstab {

enum class Verdict { InOmega, Excluded, Unknown };

enum class ExclusionReason {
  None,                // verdict InOmega
  DividesLevel,        // ell | n_rho_bar
  EqualsP,             // ell == p
  CongruencePlusOne,   // ell = +1 mod p
  CongruenceMinusOne,  // ell = -1 mod p
  TraceMismatch,       // a_ell != -(ell+1) mod p
  MissingTrace,        // verdict Unknown
};

const char* verdict_name(Verdict v);
const char* reason_name(ExclusionReason r);

struct PrimeClassification {
  std::uint64_t ell = 0;
  Verdict verdict = Verdict::Unknown;
  ExclusionReason reason = ExclusionReason::None;
  std::optional<std::uint32_t> trace = std::nullopt;  // a_ell mod p when fetched
};

// Applies the cheap congruence filters before touching any trace source, so
// only primes with ell != 0, +-1 mod p and ell coprime to the level ever cost
// a point count. Exactly one verdict per prime.
PrimeClassification classify_prime(const ResidualRepSpec& spec, std::uint64_t ell,
                                   const TraceMap* cache = nullptr);

struct OmegaSieve {
  std::uint64_t bound = 0;
  std::vector<PrimeClassification> classified;  // one row per prime <= bound
  std::vector<std::uint64_t> omega;             // sorted
  std::vector<std::uint64_t> unknown;           // sorted
};

OmegaSieve sieve_omega(const ResidualRepSpec& spec, std::uint64_t bound, unsigned threads = 1);

struct DensityEstimate {
  std::uint64_t bound = 0;
  std::uint64_t prime_count = 0;  // all primes <= bound
  std::uint64_t omega_count = 0;
  std::uint64_t unknown_count = 0;
  Rational fraction;  // omega_count / prime_count
  Rational target;    // (p-3)/(p-1)^2
  double deviation = 0.0;  // |fraction - target| / target
};

// Compares the sieve's hit rate against the expected density. Refuses unless
// spec.surjective_asserted: without full residual image the expected rate
// has no meaning (HypothesisViolated). Errors: InvalidParameter (bound < 2
// or no primes).
DensityEstimate empirical_density(const ResidualRepSpec& spec, std::uint64_t bound,
                                  unsigned threads = 1);

// Same summary over an already-computed sieve.
DensityEstimate summarize_density(const ResidualRepSpec& spec, const OmegaSieve& sieve);

}  // namespace selstab
