#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "selstab/frobenius.hpp"
#include "selstab/rational.hpp"

namespace selstab {

// Number of squarefree integers <= y whose prime factors all lie in primes
// (the empty product 1 always counts). primes must be ascending and distinct.
std::uint64_t count_squarefree_smooth(std::span<const std::uint64_t> primes, std::uint64_t y,
                                      unsigned threads = 1);

// The members themselves, sorted ascending. Errors: CapExceeded (with the
// true count) when more than cap members exist.
std::vector<std::uint64_t> enumerate_squarefree_smooth(std::span<const std::uint64_t> primes,
                                                       std::uint64_t y, std::uint64_t cap,
                                                       unsigned threads = 1);

struct CensusPoint {
  std::uint64_t y = 0;
  std::uint64_t count = 0;
  double ratio = 0.0;  // count / (y * log(y)^(delta-1))
};

struct CensusCurve {
  Rational delta;
  double band = 0.0;
  std::vector<CensusPoint> points;
  bool stable = false;  // max/min ratio over the last three checkpoints < band
};

// Growth diagnostic: for a set of primes of Dirichlet density delta the count
// grows like c * y / log(y)^(1-delta), so the normalized ratio should level
// off. checkpoints: >= 3 values, strictly increasing, first one >= 2.
CensusCurve census_ratios(std::span<const std::uint64_t> primes, Rational delta,
                          std::span<const std::uint64_t> checkpoints, double band = 2.0,
                          unsigned threads = 1);

// Lower bound for the number of newforms of level <= x congruent to the
// residual representation: sieves omega up to x / n_rho_bar and counts
// squarefree omega-smooth cofactors. Errors: HypothesisViolated when some
// prime q | n_rho_bar has q = +-1 mod p or p | n_rho_bar; MissingTrace when
// any needed classification is Unknown; InvalidParameter when x < n_rho_bar.
std::uint64_t nf_lower_bound(const ResidualRepSpec& spec, std::uint64_t x, unsigned threads = 1);

}  // namespace selstab
