#include "selstab/stability.hpp"

#include <fstream>

#include "selstab/primes.hpp"
#include "selstab/report.hpp"

namespace selstab {

void LedgerInput::validate() const {
  if (p < 5 || !is_prime_u64(p)) throw InvalidParameter("ledger needs prime p >= 5");
  if (h0_q < 0 || h0_q_star < 0 || residual_selmer_dim < 0 || sha2_dim < 0)
    throw InvalidParameter("ledger dimensions must be nonnegative");
  for (const auto& [place, term] : local_terms) {
    if (term.dim_condition < 0 || term.h0 < 0)
      throw InvalidParameter("local term at " + place.str() + " has a negative dimension");
  }
  for (const auto& [ell, beta] : betas) {
    if (beta < 0)
      throw InvalidParameter("beta at " + std::to_string(ell) + " must be nonnegative");
  }
  if (!local_terms.count(Place{true, 0}))
    throw InvalidParameter("ledger is missing the archimedean place");
  if (!local_terms.count(Place{false, p}))
    throw InvalidParameter("ledger is missing the place at p");
}

std::int64_t wiles_ledger(const LedgerInput& input) {
  input.validate();
  std::int64_t total = input.h0_q - input.h0_q_star;
  for (const auto& [place, term] : input.local_terms) {
    (void)place;
    total += term.dim_condition - term.h0;
  }
  return total;
}

DimBounds selmer_dim_bounds(const LedgerInput& input) {
  input.validate();
  std::int64_t beta_sum = 0;
  for (const auto& [ell, beta] : input.betas) {
    (void)ell;
    beta_sum += beta;
  }
  const LocalTerm& at_p = input.local_terms.at(Place{false, input.p});
  const LocalTerm& at_arch = input.local_terms.at(Place{true, 0});
  DimBounds b;
  b.upper = input.residual_selmer_dim + beta_sum;
  b.lower = beta_sum + (at_p.dim_condition - at_p.h0) + (at_arch.dim_condition - at_arch.h0) +
            input.sha2_dim;
  return b;
}

LedgerInput parse_ledger_file(const std::string& path) {
  auto kv = parse_kv_file(path);
  LedgerInput input;
  auto get_int = [&](const std::string& key, std::int64_t& out) {
    auto it = kv.find(key);
    if (it == kv.end()) throw InvalidParameter("ledger file missing key: " + key);
    out = std::stoll(it->second);
  };
  get_int("h0_q", input.h0_q);
  get_int("h0_q_star", input.h0_q_star);
  get_int("residual_selmer_dim", input.residual_selmer_dim);
  std::int64_t p_val = 0;
  get_int("p", p_val);
  input.p = static_cast<std::uint64_t>(p_val);
  if (kv.count("sha2_dim")) input.sha2_dim = std::stoll(kv.at("sha2_dim"));
  for (const auto& [key, value] : kv) {
    if (key.rfind("local.", 0) == 0) {
      std::string where = key.substr(6);
      Place place;
      if (where == "arch") {
        place = Place{true, 0};
      } else {
        place = Place{false, std::stoull(where)};
      }
      std::size_t comma = value.find(',');
      if (comma == std::string::npos)
        throw InvalidParameter("local term must be 'dim,h0': " + key);
      LocalTerm term;
      term.dim_condition = std::stoll(value.substr(0, comma));
      term.h0 = std::stoll(value.substr(comma + 1));
      input.local_terms[place] = term;
    } else if (key.rfind("beta.", 0) == 0) {
      input.betas[std::stoull(key.substr(5))] = std::stoll(value);
    }
  }
  input.validate();
  return input;
}

std::string CertReason::str() const {
  switch (kind) {
    case CertFailure::BaseNotDividing:
      return "base level does not divide " + std::to_string(ell);
    case CertFailure::PDividesLevel:
      return "p divides the level";
    case CertFailure::BasePrimeCongruent:
      return "base prime " + std::to_string(ell) + " is +-1 mod p";
    case CertFailure::CofactorNotSquarefree:
      return "cofactor prime " + std::to_string(ell) + " appears with exponent > 1";
    case CertFailure::CofactorPrimeExcluded:
      return "cofactor prime " + std::to_string(ell) + " fails the omega test (" +
             reason_name(omega_reason) + ")";
    case CertFailure::CofactorPrimeUnknown:
      return "no trace available for cofactor prime " + std::to_string(ell);
  }
  return "?";
}

StabilityVerdict stability_certificate(const ResidualRepSpec& spec, std::uint64_t level,
                                       const TraceMap* cache) {
  spec.validate();
  if (level == 0) throw InvalidParameter("level must be positive");
  StabilityVerdict v;
  v.level = level;
  v.base = spec.n_rho_bar;
  for (auto [q, e] : factorize(spec.n_rho_bar)) {
    (void)e;
    std::uint64_t r = q % spec.p;
    if (r == 1 || r == spec.p - 1)
      v.reasons.push_back({CertFailure::BasePrimeCongruent, q, ExclusionReason::None});
  }
  if (level % spec.n_rho_bar != 0) {
    v.reasons.push_back({CertFailure::BaseNotDividing, level, ExclusionReason::None});
    v.certified = false;
    return v;
  }
  if (level % spec.p == 0)
    v.reasons.push_back({CertFailure::PDividesLevel, spec.p, ExclusionReason::None});
  v.cofactor = level / spec.n_rho_bar;
  for (auto [ell, alpha] : factorize(v.cofactor)) {
    if (alpha > 1)
      v.reasons.push_back({CertFailure::CofactorNotSquarefree, ell, ExclusionReason::None});
    if (ell == spec.p) continue;  // already reported as PDividesLevel
    PrimeClassification pc = classify_prime(spec, ell, cache);
    if (pc.verdict == Verdict::InOmega) continue;
    if (pc.verdict == Verdict::Unknown) {
      v.reasons.push_back({CertFailure::CofactorPrimeUnknown, ell, ExclusionReason::None});
    } else {
      v.reasons.push_back({CertFailure::CofactorPrimeExcluded, ell, pc.reason});
    }
  }
  v.certified = v.reasons.empty();
  return v;
}

}  // namespace selstab
