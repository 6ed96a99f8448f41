#include "selstab/omega.hpp"

#include <cmath>

#include "selstab/parallel.hpp"
#include "selstab/primes.hpp"

namespace selstab {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::InOmega: return "in_omega";
    case Verdict::Excluded: return "excluded";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

const char* reason_name(ExclusionReason r) {
  switch (r) {
    case ExclusionReason::None: return "";
    case ExclusionReason::DividesLevel: return "divides_level";
    case ExclusionReason::EqualsP: return "equals_p";
    case ExclusionReason::CongruencePlusOne: return "congruence_plus_one";
    case ExclusionReason::CongruenceMinusOne: return "congruence_minus_one";
    case ExclusionReason::TraceMismatch: return "trace_mismatch";
    case ExclusionReason::MissingTrace: return "missing_trace";
  }
  return "?";
}

PrimeClassification classify_prime(const ResidualRepSpec& spec, std::uint64_t ell,
                                   const TraceMap* cache) {
  if (!is_prime_u64(ell)) throw InvalidParameter("classify_prime at non-prime");
  PrimeClassification out;
  out.ell = ell;
  if (spec.n_rho_bar % ell == 0) {
    out.verdict = Verdict::Excluded;
    out.reason = ExclusionReason::DividesLevel;
    return out;
  }
  if (ell == spec.p) {
    out.verdict = Verdict::Excluded;
    out.reason = ExclusionReason::EqualsP;
    return out;
  }
  std::uint64_t r = ell % spec.p;
  if (r == 1) {
    out.verdict = Verdict::Excluded;
    out.reason = ExclusionReason::CongruencePlusOne;
    return out;
  }
  if (r == spec.p - 1) {
    out.verdict = Verdict::Excluded;
    out.reason = ExclusionReason::CongruenceMinusOne;
    return out;
  }
  std::optional<std::uint32_t> tr;
  if (cache) {
    auto it = cache->entries.find(ell);
    tr = (it != cache->entries.end()) ? it->second : trace_mod_p(spec, ell);
  } else {
    tr = trace_mod_p(spec, ell);
  }
  if (!tr) {
    out.verdict = Verdict::Unknown;
    out.reason = ExclusionReason::MissingTrace;
    return out;
  }
  out.trace = tr;
  // Frobenius ~ diag(-ell, -1) iff a_ell = -(ell + 1) mod p (determinant is
  // ell automatically); ell != 0, +-1 mod p already makes -ell a valid mu.
  std::uint64_t want = (2 * static_cast<std::uint64_t>(spec.p) - 1 - r) % spec.p;
  if (*tr == want) {
    out.verdict = Verdict::InOmega;
    out.reason = ExclusionReason::None;
  } else {
    out.verdict = Verdict::Excluded;
    out.reason = ExclusionReason::TraceMismatch;
  }
  return out;
}

OmegaSieve sieve_omega(const ResidualRepSpec& spec, std::uint64_t bound, unsigned threads) {
  spec.validate();
  OmegaSieve sieve;
  sieve.bound = bound;
  auto primes = primes_up_to(bound);
  TraceMap traces = compute_traces(spec, bound, threads, /*omega_candidates_only=*/true);
  sieve.classified.reserve(primes.size());
  for (std::uint64_t ell : primes) {
    PrimeClassification pc = classify_prime(spec, ell, &traces);
    if (pc.verdict == Verdict::InOmega) sieve.omega.push_back(ell);
    if (pc.verdict == Verdict::Unknown) sieve.unknown.push_back(ell);
    sieve.classified.push_back(pc);
  }
  return sieve;
}

DensityEstimate summarize_density(const ResidualRepSpec& spec, const OmegaSieve& sieve) {
  if (!spec.surjective_asserted)
    throw HypothesisViolated(
        "empirical density needs surjective=true: without full residual image "
        "the expected hit rate is undefined",
        spec.p);
  DensityEstimate est;
  est.bound = sieve.bound;
  est.prime_count = sieve.classified.size();
  est.omega_count = sieve.omega.size();
  est.unknown_count = sieve.unknown.size();
  if (est.prime_count == 0) throw InvalidParameter("no primes below bound");
  est.fraction = make_rational(static_cast<std::int64_t>(est.omega_count),
                               static_cast<std::int64_t>(est.prime_count));
  std::int64_t pp = spec.p;
  est.target = make_rational(pp - 3, (pp - 1) * (pp - 1));
  est.deviation = std::abs(est.fraction.value() - est.target.value()) / est.target.value();
  return est;
}

DensityEstimate empirical_density(const ResidualRepSpec& spec, std::uint64_t bound,
                                  unsigned threads) {
  spec.validate();
  if (!spec.surjective_asserted)
    throw HypothesisViolated("empirical density needs surjective=true", spec.p);
  if (bound < 2) throw InvalidParameter("density bound too small");
  return summarize_density(spec, sieve_omega(spec, bound, threads));
}

}  // namespace selstab
