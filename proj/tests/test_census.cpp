#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "selstab/census.hpp"
#include "selstab/errors.hpp"
#include "selstab/primes.hpp"

using namespace selstab;

namespace {

// Oracle that factors every integer: smallest-prime-factor sieve, then a
// direct squarefree-and-smooth test per n.
struct FactorOracle {
  std::vector<std::uint32_t> spf;

  explicit FactorOracle(std::uint64_t y) : spf(y + 1, 0) {
    for (std::uint64_t i = 2; i <= y; ++i) {
      if (spf[i] != 0) continue;
      for (std::uint64_t j = i; j <= y; j += i) {
        if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
      }
    }
  }

  bool counted(std::uint64_t n, const std::set<std::uint64_t>& allowed) const {
    while (n > 1) {
      std::uint64_t p = spf[n];
      n /= p;
      if (n % p == 0) return false;  // square factor
      if (!allowed.count(p)) return false;
    }
    return true;
  }

  std::vector<std::uint64_t> members(std::uint64_t y, const std::set<std::uint64_t>& allowed) const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 1; n <= y; ++n) {
      if (counted(n, allowed)) out.push_back(n);
    }
    return out;
  }
};

}  // namespace

TEST_CASE("tiny hand-checked census") {
  std::vector<std::uint64_t> ps{2, 3};
  CHECK(count_squarefree_smooth(ps, 10) == 4);  // 1, 2, 3, 6
  CHECK((enumerate_squarefree_smooth(ps, 10, 10) ==
         std::vector<std::uint64_t>{1, 2, 3, 6}));
  CHECK(count_squarefree_smooth(ps, 1) == 1);  // the empty product
  CHECK(count_squarefree_smooth(std::vector<std::uint64_t>{}, 1000000) == 1);
  CHECK(count_squarefree_smooth(ps, 5) == 3);  // 1, 2, 3
}

TEST_CASE("all-primes census counts the squarefree integers") {
  auto ps = primes_up_to(10000);
  CHECK(count_squarefree_smooth(ps, 100) == 61);
  CHECK(count_squarefree_smooth(ps, 10000) == 6083);
}

TEST_CASE("census agrees with the factor-everything oracle") {
  const std::uint64_t y = 5000;
  FactorOracle oracle(y);
  auto pool = primes_up_to(100);
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint64_t> subset;
    std::set<std::uint64_t> allowed;
    for (std::uint64_t p : pool) {
      if (rng() & 1) {
        subset.push_back(p);
        allowed.insert(p);
      }
    }
    auto expected = oracle.members(y, allowed);
    CHECK(count_squarefree_smooth(subset, y) == expected.size());
    auto got = enumerate_squarefree_smooth(subset, y, expected.size());
    CHECK(got == expected);
  }
}

TEST_CASE("adding one prime obeys the splitting recurrence") {
  // members either avoid q (counted by M(Y)) or are q * m with m <= Y/q
  std::mt19937_64 rng(777);
  auto pool = primes_up_to(1000);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint64_t> omega;
    for (std::uint64_t p : pool) {
      if (rng() % 4 == 0) omega.push_back(p);
    }
    std::uint64_t q;
    do {
      q = pool[rng() % pool.size()];
    } while (std::binary_search(omega.begin(), omega.end(), q));
    std::uint64_t y = 1000 + rng() % 999000;  // keeps y >= q, so y/q >= 1
    std::vector<std::uint64_t> with_q = omega;
    with_q.insert(std::upper_bound(with_q.begin(), with_q.end(), q), q);
    CHECK(count_squarefree_smooth(with_q, y) ==
          count_squarefree_smooth(omega, y) + count_squarefree_smooth(omega, y / q));
  }
}

TEST_CASE("count is thread-count independent") {
  auto ps = primes_up_to(200);
  for (std::uint64_t y : {17ull, 1000ull, 99991ull}) {
    CHECK(count_squarefree_smooth(ps, y, 1) == count_squarefree_smooth(ps, y, 4));
  }
}

TEST_CASE("enumeration respects the cap with the true count attached") {
  std::vector<std::uint64_t> ps{2, 3};
  try {
    enumerate_squarefree_smooth(ps, 10, 3);
    FAIL("expected CapExceeded");
  } catch (const CapExceeded& e) {
    CHECK(e.count == 4);
    CHECK(e.cap == 3);
  }
}

TEST_CASE("prime list validation") {
  CHECK_THROWS_AS(count_squarefree_smooth(std::vector<std::uint64_t>{3, 2}, 10), InvalidParameter);
  CHECK_THROWS_AS(count_squarefree_smooth(std::vector<std::uint64_t>{2, 2}, 10), InvalidParameter);
  CHECK_THROWS_AS(count_squarefree_smooth(std::vector<std::uint64_t>{1, 2}, 10), InvalidParameter);
  CHECK_THROWS_AS(count_squarefree_smooth(std::vector<std::uint64_t>{2, 3}, 0), InvalidParameter);
}

TEST_CASE("ratio points follow the stated normalization") {
  std::vector<std::uint64_t> ps{2};
  std::vector<std::uint64_t> cps{100, 1000, 10000};
  CensusCurve curve = census_ratios(ps, make_rational(1, 9), cps);
  REQUIRE(curve.points.size() == 3);
  for (const auto& pt : curve.points) {
    double expected = static_cast<double>(pt.count) /
                      (static_cast<double>(pt.y) *
                       std::pow(std::log(static_cast<double>(pt.y)), 1.0 / 9.0 - 1.0));
    CHECK(pt.ratio == doctest::Approx(expected));
    CHECK(pt.count == 2);  // 1 and 2 are the only members
  }
  // a two-member census cannot track y / log(y)^(8/9): ratio collapses
  CHECK_FALSE(curve.stable);
}

TEST_CASE("squarefree census is stable under the delta = 1 normalization") {
  auto ps = primes_up_to(10000);
  std::vector<std::uint64_t> cps{100, 1000, 10000};
  CensusCurve curve = census_ratios(ps, make_rational(1, 1), cps);
  CHECK(curve.stable);  // ratios hover near 6 / pi^2
  for (const auto& pt : curve.points) {
    CHECK(pt.ratio > 0.5);
    CHECK(pt.ratio < 0.7);
  }
}

TEST_CASE("ratio parameter validation") {
  std::vector<std::uint64_t> ps{2, 3};
  std::vector<std::uint64_t> two{10, 100};
  CHECK_THROWS_AS(census_ratios(ps, make_rational(1, 9), two), InvalidParameter);
  std::vector<std::uint64_t> unsorted{10, 10, 100};
  CHECK_THROWS_AS(census_ratios(ps, make_rational(1, 9), unsorted), InvalidParameter);
  std::vector<std::uint64_t> low{1, 10, 100};
  CHECK_THROWS_AS(census_ratios(ps, make_rational(1, 9), low), InvalidParameter);
  std::vector<std::uint64_t> ok{10, 100, 1000};
  CHECK_THROWS_AS(census_ratios(ps, make_rational(0, 9), ok), InvalidParameter);
  CHECK_THROWS_AS(census_ratios(ps, make_rational(10, 9), ok), InvalidParameter);
  CHECK_THROWS_AS(census_ratios(ps, make_rational(1, 9), ok, 1.0), InvalidParameter);
}

TEST_CASE("newform lower bound for the conductor-11 representation") {
  ResidualRepSpec spec;
  spec.p = 7;
  spec.n_rho_bar = 11;
  spec.source = CurveSource{CurveSpec{0, -1, 1, -10, -20}};

  CHECK(nf_lower_bound(spec, 110) == 2);  // cofactors 1 and 5
  CHECK(nf_lower_bound(spec, 11) == 1);   // just the base level
  CHECK_THROWS_AS(nf_lower_bound(spec, 10), InvalidParameter);

  ResidualRepSpec bad = spec;
  bad.n_rho_bar = 13;  // 13 = -1 mod 7
  CHECK_THROWS_AS(nf_lower_bound(bad, 130), HypothesisViolated);

  ResidualRepSpec gaps = spec;
  TraceTable t;
  t.p = 7;
  t.entries = {{2, 5}};
  gaps.source = TableSource{t};
  CHECK_THROWS_AS(nf_lower_bound(gaps, 110), MissingTrace);
}
