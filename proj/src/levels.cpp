#include "selstab/levels.hpp"

#include <algorithm>

#include "selstab/parallel.hpp"
#include "selstab/primes.hpp"

namespace selstab {

const char* carayol_case_name(CarayolCase c) {
  switch (c) {
    case CarayolCase::C1: return "C1";
    case CarayolCase::C2a: return "C2a";
    case CarayolCase::C2b: return "C2b";
    case CarayolCase::C3a: return "C3a";
    case CarayolCase::C3b: return "C3b";
  }
  return "?";
}

namespace {

enum class CaseStatus { Applies, Fails, Undecidable };

// One raised prime ell^alpha on top of the base level. Trace-dependent
// hypotheses go Undecidable when no trace is available; structural ones
// never do.
CaseStatus try_case(CarayolCase c, const ResidualRepSpec& spec, std::uint64_t ell,
                    std::uint32_t alpha, const std::optional<std::uint32_t>& trace) {
  const std::uint64_t p = spec.p;
  const std::uint64_t r = ell % p;
  const bool divides_base = spec.n_rho_bar % ell == 0;
  switch (c) {
    case CarayolCase::C1: {
      // ell a_ell^2 = (1 + ell)^2 ell mod p, new part exactly ell^1
      if (alpha != 1 || divides_base) return CaseStatus::Fails;
      if (!trace) return CaseStatus::Undecidable;
      std::uint64_t lhs = r * ((static_cast<std::uint64_t>(*trace) * *trace) % p) % p;
      std::uint64_t rhs = (1 + r) % p * ((1 + r) % p) % p * r % p;
      return lhs == rhs ? CaseStatus::Applies : CaseStatus::Fails;
    }
    case CarayolCase::C2a: {
      // ell = -1 mod p, a_ell = 0 mod p, new part ell^2
      if (alpha != 2 || divides_base || r != p - 1) return CaseStatus::Fails;
      if (!trace) return CaseStatus::Undecidable;
      return *trace == 0 ? CaseStatus::Applies : CaseStatus::Fails;
    }
    case CarayolCase::C2b:
      // ell = -1 mod p, ell already in the base level, exponent raised by 1
      if (alpha != 1 || !divides_base || r != p - 1) return CaseStatus::Fails;
      return CaseStatus::Applies;
    case CarayolCase::C3a:
      // ell = +1 mod p, new part ell^2
      if (alpha != 2 || divides_base || r != 1) return CaseStatus::Fails;
      return CaseStatus::Applies;
    case CarayolCase::C3b:
      // ell = +1 mod p, one extra factor of ell (fresh or on top of the base)
      if (alpha != 1 || r != 1) return CaseStatus::Fails;
      return CaseStatus::Applies;
  }
  return CaseStatus::Fails;
}

}  // namespace

CarayolResult carayol_check(const ResidualRepSpec& spec, std::uint64_t level,
                            const TraceMap* cache) {
  spec.validate();
  if (level == 0) throw InvalidParameter("level must be positive");
  CarayolResult res;
  res.factorization.level = level;
  res.factorization.base = spec.n_rho_bar;
  if (level % spec.n_rho_bar != 0) {
    res.verdict = LevelVerdict::NotAdmissible;
    res.failure = LevelFailure::BaseNotDividing;
    return res;
  }
  if (level % spec.p == 0) {
    res.verdict = LevelVerdict::NotAdmissible;
    res.failure = LevelFailure::PDividesLevel;
    return res;
  }
  std::uint64_t cofactor = level / spec.n_rho_bar;
  bool some_undecidable = false;
  std::uint64_t first_undecidable = 0;
  for (auto [ell, alpha] : factorize(cofactor)) {
    std::optional<std::uint32_t> trace;
    bool have = false;
    if (cache) {
      auto it = cache->entries.find(ell);
      if (it != cache->entries.end()) {
        trace = it->second;
        have = true;
      }
    }
    if (!have) trace = trace_mod_p(spec, ell);
    bool certified = false;
    bool undecidable_here = false;
    for (CarayolCase c : {CarayolCase::C1, CarayolCase::C2a, CarayolCase::C2b,
                          CarayolCase::C3a, CarayolCase::C3b}) {
      CaseStatus st = try_case(c, spec, ell, alpha, trace);
      if (st == CaseStatus::Applies) {
        res.factorization.raised.push_back({ell, alpha, c});
        certified = true;
        break;
      }
      if (st == CaseStatus::Undecidable) undecidable_here = true;
    }
    if (certified) continue;
    if (undecidable_here) {
      if (!some_undecidable) first_undecidable = ell;
      some_undecidable = true;
      continue;  // a later prime may still fail outright
    }
    res.verdict = LevelVerdict::NotAdmissible;
    res.failure = LevelFailure::FailedAt;
    res.failed_prime = ell;
    res.factorization.raised.clear();
    return res;
  }
  if (some_undecidable) {
    res.verdict = LevelVerdict::Unknown;
    res.failure = LevelFailure::MissingTraceAt;
    res.failed_prime = first_undecidable;
    res.factorization.raised.clear();
    return res;
  }
  res.verdict = LevelVerdict::Admissible;
  res.failure = LevelFailure::None;
  return res;
}

AdmissibleEnumeration enumerate_admissible(const ResidualRepSpec& spec, std::uint64_t x,
                                           unsigned threads) {
  spec.validate();
  AdmissibleEnumeration out;
  out.bound = x;
  if (x < spec.n_rho_bar) return out;
  // Every prime that can appear in a cofactor is <= x / n_rho_bar.
  TraceMap traces = compute_traces(spec, x / spec.n_rho_bar, threads,
                                   /*omega_candidates_only=*/false);
  std::uint64_t n_multiples = x / spec.n_rho_bar;
  auto chunks = parallel_chunk_map<std::vector<CarayolResult>>(
      n_multiples, threads, 64, [&](std::uint64_t b, std::uint64_t e) {
        std::vector<CarayolResult> rs;
        rs.reserve(e - b);
        for (std::uint64_t k = b; k < e; ++k)
          rs.push_back(carayol_check(spec, (k + 1) * spec.n_rho_bar, &traces));
        return rs;
      });
  for (const auto& chunk : chunks) {
    for (const auto& r : chunk) {
      if (r.verdict == LevelVerdict::Admissible) out.levels.push_back(r.factorization);
      if (r.verdict == LevelVerdict::Unknown) out.unknown.push_back(r.factorization.level);
    }
  }
  return out;
}

}  // namespace selstab
