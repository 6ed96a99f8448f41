#include "selstab/census.hpp"

#include <algorithm>
#include <cmath>

#include "selstab/omega.hpp"
#include "selstab/parallel.hpp"
#include "selstab/primes.hpp"

namespace selstab {

namespace {

void validate_prime_list(std::span<const std::uint64_t> primes) {
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (primes[i] < 2) throw InvalidParameter("prime list entries must be >= 2");
    if (i && primes[i] <= primes[i - 1])
      throw InvalidParameter("prime list must be ascending and distinct");
  }
}

// Subsets of primes[idx..] with product <= rem, the empty subset included.
// a * q <= rem  <=>  a <= rem / q in integers, so dividing through prunes
// exactly.
std::uint64_t count_subsets(std::span<const std::uint64_t> primes, std::size_t idx,
                            std::uint64_t rem) {
  std::uint64_t n = 1;
  for (std::size_t i = idx; i < primes.size() && primes[i] <= rem; ++i)
    n += count_subsets(primes, i + 1, rem / primes[i]);
  return n;
}

void collect_subsets(std::span<const std::uint64_t> primes, std::size_t idx, std::uint64_t rem,
                     std::uint64_t product, std::vector<std::uint64_t>& out) {
  out.push_back(product);
  for (std::size_t i = idx; i < primes.size() && primes[i] <= rem; ++i)
    collect_subsets(primes, i + 1, rem / primes[i], product * primes[i], out);
}

}  // namespace

std::uint64_t count_squarefree_smooth(std::span<const std::uint64_t> primes, std::uint64_t y,
                                      unsigned threads) {
  validate_prime_list(primes);
  if (y == 0) throw InvalidParameter("census bound must be >= 1");
  if (threads <= 1 || primes.size() < 8) return count_subsets(primes, 0, y);
  // Split on the first chosen prime; chunk results merge by index, so the
  // total is independent of the thread count.
  auto chunks = parallel_chunk_map<std::uint64_t>(
      primes.size(), threads, 1, [&](std::uint64_t b, std::uint64_t) {
        std::size_t i = static_cast<std::size_t>(b);
        if (primes[i] > y) return std::uint64_t{0};
        return count_subsets(primes, i + 1, y / primes[i]);
      });
  std::uint64_t total = 1;  // empty product
  for (std::uint64_t c : chunks) total += c;
  return total;
}

std::vector<std::uint64_t> enumerate_squarefree_smooth(std::span<const std::uint64_t> primes,
                                                       std::uint64_t y, std::uint64_t cap,
                                                       unsigned threads) {
  std::uint64_t n = count_squarefree_smooth(primes, y, threads);
  if (n > cap) throw CapExceeded(n, cap);
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(n));
  collect_subsets(primes, 0, y, 1, out);
  std::sort(out.begin(), out.end());
  return out;
}

CensusCurve census_ratios(std::span<const std::uint64_t> primes, Rational delta,
                          std::span<const std::uint64_t> checkpoints, double band,
                          unsigned threads) {
  validate_prime_list(primes);
  if (delta.num <= 0 || delta.num > delta.den) throw InvalidParameter("delta must lie in (0, 1]");
  if (checkpoints.size() < 3) throw InvalidParameter("need at least three checkpoints");
  if (checkpoints[0] < 2) throw InvalidParameter("checkpoints start at 2");
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= checkpoints[i - 1])
      throw InvalidParameter("checkpoints must be strictly increasing");
  }
  if (band <= 1.0) throw InvalidParameter("stability band must exceed 1");
  CensusCurve curve;
  curve.delta = delta;
  curve.band = band;
  for (std::uint64_t y : checkpoints) {
    CensusPoint pt;
    pt.y = y;
    pt.count = count_squarefree_smooth(primes, y, threads);
    // Expected growth: const * y / log(y)^(1 - delta).
    double logy = std::log(static_cast<double>(y));
    pt.ratio = static_cast<double>(pt.count) /
               (static_cast<double>(y) * std::pow(logy, delta.value() - 1.0));
    curve.points.push_back(pt);
  }
  double lo = curve.points[curve.points.size() - 3].ratio;
  double hi = lo;
  for (std::size_t i = curve.points.size() - 3; i < curve.points.size(); ++i) {
    lo = std::min(lo, curve.points[i].ratio);
    hi = std::max(hi, curve.points[i].ratio);
  }
  curve.stable = lo > 0.0 && hi / lo < band;
  return curve;
}

std::uint64_t nf_lower_bound(const ResidualRepSpec& spec, std::uint64_t x, unsigned threads) {
  spec.validate();
  if (x < spec.n_rho_bar)
    throw InvalidParameter("bound below the base level");
  for (auto [q, e] : factorize(spec.n_rho_bar)) {
    (void)e;
    std::uint64_t r = q % spec.p;
    if (r == 1 || r == spec.p - 1)
      throw HypothesisViolated(
          "base level prime " + std::to_string(q) + " is +-1 mod p", q);
  }
  std::uint64_t cofactor_bound = x / spec.n_rho_bar;
  OmegaSieve sieve = sieve_omega(spec, cofactor_bound, threads);
  if (!sieve.unknown.empty()) throw MissingTrace(sieve.unknown.front());
  return count_squarefree_smooth(sieve.omega, cofactor_bound, threads);
}

}  // namespace selstab
