#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "selstab/frobenius.hpp"
#include "selstab/omega.hpp"

namespace selstab {

// A place of Q: a finite prime or the archimedean place.
struct Place {
  bool archimedean = false;
  std::uint64_t ell = 0;  // meaningful when !archimedean

  auto operator<=>(const Place&) const = default;
  std::string str() const { return archimedean ? "arch" : std::to_string(ell); }
};

struct LocalTerm {
  std::int64_t dim_condition = 0;  // dim of the local Selmer condition L_v
  std::int64_t h0 = 0;             // dim H^0 at v
};

// Inputs to the global Euler-characteristic bookkeeping. All dims are over
// the residue field and must be nonnegative; local_terms must contain the
// archimedean place and the place at p (the two that are pulled out of the
// lower bound separately).
struct LedgerInput {
  std::int64_t h0_q = 0;       // dim H^0(Q, W)
  std::int64_t h0_q_star = 0;  // dim H^0(Q, W*)
  std::uint64_t p = 0;         // distinguished residual prime
  std::map<Place, LocalTerm> local_terms;
  std::int64_t residual_selmer_dim = 0;  // dim of the base Selmer group
  std::int64_t sha2_dim = 0;             // auxiliary correction term
  std::map<std::uint64_t, std::int64_t> betas;  // ell -> beta_ell

  void validate() const;  // InvalidParameter on negatives / missing places
};

// dim Sel - dim Sel* = h0(Q) - h0(Q*) + sum_v (dim L_v - h0_v).
std::int64_t wiles_ledger(const LedgerInput& input);

struct DimBounds {
  std::int64_t lower = 0;
  std::int64_t upper = 0;
};

// upper = residual_selmer_dim + sum beta_ell;
// lower = sum beta_ell + (L_p - h0_p) + (L_arch - h0_arch) + sha2_dim.
DimBounds selmer_dim_bounds(const LedgerInput& input);

// Flat key=value ledger file; "local.<ell>" / "local.arch" carry
// "dim,h0" pairs, "beta.<ell>" carries an integer.
LedgerInput parse_ledger_file(const std::string& path);

enum class CertFailure {
  BaseNotDividing,         // n_rho_bar does not divide the level
  PDividesLevel,           // p | level
  BasePrimeCongruent,      // a prime of n_rho_bar is +-1 mod p
  CofactorNotSquarefree,   // some ell^2 divides level / n_rho_bar
  CofactorPrimeExcluded,   // cofactor prime fails the omega test
  CofactorPrimeUnknown,    // no trace available for a cofactor prime
};

struct CertReason {
  CertFailure kind;
  std::uint64_t ell = 0;                             // offending prime (0 = n/a)
  ExclusionReason omega_reason = ExclusionReason::None;  // for CofactorPrimeExcluded
  std::string str() const;
};

struct StabilityVerdict {
  bool certified = false;
  std::uint64_t level = 0;
  std::uint64_t base = 0;
  std::uint64_t cofactor = 0;  // level / base when divisible, else 0
  std::vector<CertReason> reasons;  // empty iff certified
};

// Checks every hypothesis needed for the Selmer groups at the raised level to
// coincide with the base: base level divides, p-free, base primes not +-1
// mod p, cofactor squarefree with every prime in omega. Collects all
// failures instead of stopping at the first.
StabilityVerdict stability_certificate(const ResidualRepSpec& spec, std::uint64_t level,
                                       const TraceMap* cache = nullptr);

}  // namespace selstab
