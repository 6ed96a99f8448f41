#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "selstab/errors.hpp"
#include "selstab/frobenius.hpp"
#include "selstab/primes.hpp"

using namespace selstab;

namespace {

// Exhaustive oracle on the long model: every (x, y) pair, no square table.
std::uint64_t count_points_direct(const CurveSpec& c, std::uint64_t ell) {
  auto red = [&](std::int64_t v) {
    std::int64_t r = v % static_cast<std::int64_t>(ell);
    if (r < 0) r += static_cast<std::int64_t>(ell);
    return static_cast<std::uint64_t>(r);
  };
  std::uint64_t a1 = red(c.a1), a2 = red(c.a2), a3 = red(c.a3), a4 = red(c.a4), a6 = red(c.a6);
  std::uint64_t n = 1;
  for (std::uint64_t x = 0; x < ell; ++x) {
    std::uint64_t rhs = (((x + a2) % ell * x % ell + a4) % ell * x % ell + a6) % ell;
    for (std::uint64_t y = 0; y < ell; ++y) {
      std::uint64_t lhs = (y * y % ell + a1 * x % ell * y % ell + a3 * y % ell) % ell;
      if (lhs == rhs) ++n;
    }
  }
  return n;
}

const CurveSpec k11a1{0, -1, 1, -10, -20};

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = "/tmp/" + name;
  std::ofstream out(path);
  out << content;
  out.close();
  return path;
}

}  // namespace

TEST_CASE("discriminant is exact") {
  CHECK(k11a1.discriminant() == static_cast<__int128>(-161051));  // -11^5
  CHECK((CurveSpec{0, 0, 0, 1, 1}.discriminant() == static_cast<__int128>(-496)));
  CHECK((CurveSpec{0, 0, 0, 0, 1}.discriminant() == static_cast<__int128>(-432)));
  CHECK_THROWS_AS((CurveSpec{0, 0, 0, 0, 0}.validate()), InvalidParameter);  // singular
  CHECK_THROWS_AS((CurveSpec{0, 0, 0, 100001, 1}.validate()), InvalidParameter);
}

TEST_CASE("point counts match the exhaustive oracle") {
  std::mt19937_64 rng(42);
  auto primes = primes_up_to(200);
  std::uniform_int_distribution<std::int64_t> coeff(-20, 20);
  int checked = 0;
  while (checked < 120) {
    CurveSpec c{coeff(rng), coeff(rng), coeff(rng), coeff(rng), coeff(rng)};
    if (c.discriminant() == 0) continue;
    std::uint64_t ell = primes[rng() % primes.size()];
    std::uint64_t expected;
    try {
      expected = count_points(c, ell);
    } catch (const BadReduction&) {
      continue;
    }
    CHECK(expected == count_points_direct(c, ell));
    ++checked;
  }
}

TEST_CASE("known small counts") {
  CurveSpec c{0, 0, 0, 1, 1};  // y^2 = x^3 + x + 1
  CHECK(count_points(c, 5) == 9);
  CHECK(count_points(c, 3) == 4);
  CHECK_THROWS_AS(count_points(c, 2), BadReduction);  // disc = -496
}

TEST_CASE("trace values of a rank-zero conductor-11 curve") {
  CHECK(trace_of_frobenius(k11a1, 2) == -2);
  CHECK(trace_of_frobenius(k11a1, 3) == -1);
  CHECK(trace_of_frobenius(k11a1, 5) == 1);
  CHECK(trace_of_frobenius(k11a1, 7) == -2);
  CHECK(trace_of_frobenius(k11a1, 13) == 4);
  CHECK(trace_of_frobenius(k11a1, 19) == 0);
  CHECK(trace_of_frobenius(k11a1, 29) == 0);
  CHECK_THROWS_AS(trace_of_frobenius(k11a1, 11), BadReduction);
}

TEST_CASE("hasse bound holds across a random prime sample") {
  std::mt19937_64 rng(7);
  auto primes = primes_up_to(10000);
  for (int i = 0; i < 1000; ++i) {
    std::uint64_t ell = primes[rng() % primes.size()];
    if (ell == 11) continue;
    std::int64_t a = trace_of_frobenius(k11a1, ell);
    CHECK(static_cast<double>(a) * a <= 4.0 * static_cast<double>(ell));
  }
}

TEST_CASE("quadratic twist complements the count") {
  // For d a non-residue mod ell, #E + #E_d = 2 ell + 2.
  CurveSpec base{0, 0, 0, 1, 1};
  for (std::uint64_t ell : {7ull, 13ull, 97ull, 101ull, 499ull}) {
    std::uint64_t d = 2;
    while (powmod_u64(d, (ell - 1) / 2, ell) == 1) ++d;
    CurveSpec twist{0, 0, 0, static_cast<std::int64_t>(d * d % ell),
                    static_cast<std::int64_t>(d * d % ell * d % ell)};
    std::uint64_t n = count_points(base, ell);
    std::uint64_t nt = count_points(twist, ell);
    CHECK(n + nt == 2 * ell + 2);
  }
}

TEST_CASE("count_points input validation") {
  CurveSpec c{0, 0, 0, 1, 1};
  CHECK_THROWS_AS(count_points(c, 10), InvalidParameter);           // composite
  CHECK_THROWS_AS(count_points(c, 1009, 1000), ResourceLimit);      // beyond bound
}

TEST_CASE("trace table parsing") {
  std::string ok = write_temp("selstab_tt_ok.csv",
                              "# conductor 11 curve\n"
                              "# p=7\n"
                              "2,-2\n"
                              "3,-1\n"
                              "5,1\n"
                              "13, 4\n");
  TraceTable t = load_trace_table(ok);
  CHECK(t.p == 7);
  REQUIRE(t.entries.size() == 4);
  CHECK(t.entries.at(2) == 5);   // -2 mod 7
  CHECK(t.entries.at(3) == 6);   // -1 mod 7
  CHECK(t.entries.at(5) == 1);
  CHECK(t.entries.at(13) == 4);

  std::string empty = write_temp("selstab_tt_empty.csv", "");
  TraceTable te = load_trace_table(empty);
  CHECK(te.p == 0);
  CHECK(te.entries.empty());

  CHECK_THROWS_AS(load_trace_table("/nonexistent/file.csv"), InvalidParameter);
  CHECK_THROWS_AS(load_trace_table(write_temp("selstab_tt_nohdr.csv", "2,-2\n")), ParseError);
  CHECK_THROWS_AS(load_trace_table(write_temp("selstab_tt_nonprime.csv", "# p=7\n4,1\n")),
                  ParseError);
  CHECK_THROWS_AS(load_trace_table(write_temp("selstab_tt_dup.csv", "# p=7\n2,1\n2,1\n")),
                  ParseError);
  CHECK_THROWS_AS(load_trace_table(write_temp("selstab_tt_nocomma.csv", "# p=7\n5\n")), ParseError);
  CHECK_THROWS_AS(load_trace_table(write_temp("selstab_tt_badval.csv", "# p=7\n5,xy\n")),
                  ParseError);
  CHECK_THROWS_AS(load_trace_table(write_temp("selstab_tt_badp.csv", "# p=zz\n")), ParseError);
}

TEST_CASE("spec validation") {
  ResidualRepSpec spec;
  spec.p = 7;
  spec.n_rho_bar = 11;
  spec.source = CurveSource{k11a1};
  CHECK_NOTHROW(spec.validate());

  ResidualRepSpec bad = spec;
  bad.p = 6;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  bad = spec;
  bad.p = 3;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  bad = spec;
  bad.n_rho_bar = 14;  // p | level
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  bad = spec;
  bad.n_rho_bar = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);

  TraceTable t;
  t.p = 5;
  bad = spec;
  bad.source = TableSource{t};
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);  // table p disagrees
  t.p = 7;
  bad.source = TableSource{t};
  CHECK_NOTHROW(bad.validate());
}

TEST_CASE("trace residues from either source") {
  ResidualRepSpec curve_spec;
  curve_spec.p = 7;
  curve_spec.n_rho_bar = 11;
  curve_spec.source = CurveSource{k11a1};
  CHECK(trace_mod_p(curve_spec, 5) == 1u);
  CHECK(trace_mod_p(curve_spec, 2) == 5u);  // -2 mod 7
  CHECK_FALSE(trace_mod_p(curve_spec, 11).has_value());  // bad reduction

  curve_spec.pointcount_bound = 100;
  CHECK_FALSE(trace_mod_p(curve_spec, 101).has_value());  // beyond bound
  curve_spec.pointcount_bound = kDefaultPointCountBound;

  ResidualRepSpec table_spec = curve_spec;
  TraceTable t;
  t.p = 7;
  t.entries = {{2, 5}, {5, 1}};
  table_spec.source = TableSource{t};
  CHECK(trace_mod_p(table_spec, 5) == 1u);
  CHECK_FALSE(trace_mod_p(table_spec, 3).has_value());  // gap

  FrobClass f = frobenius_data(curve_spec, 5);
  CHECK(f.ell == 5);
  CHECK(f.trace == 1);
  CHECK(f.det == 5);
  FrobClass f13 = frobenius_data(curve_spec, 13);
  CHECK(f13.trace == 4);
  CHECK(f13.det == 6);

  CHECK_THROWS_AS(frobenius_data(curve_spec, 11), InvalidParameter);  // divides level
  CHECK_THROWS_AS(frobenius_data(curve_spec, 7), InvalidParameter);   // equals p
  CHECK_THROWS_AS(frobenius_data(table_spec, 3), MissingTrace);
}

TEST_CASE("batched traces agree with single calls") {
  ResidualRepSpec spec;
  spec.p = 7;
  spec.n_rho_bar = 11;
  spec.source = CurveSource{k11a1};

  TraceMap all = compute_traces(spec, 100, 1, false);
  auto primes = primes_up_to(100);
  for (std::uint64_t ell : primes) {
    if (ell == 7 || ell == 11) {
      CHECK_FALSE(all.entries.count(ell));
      continue;
    }
    REQUIRE(all.entries.count(ell));
    CHECK(all.entries.at(ell) == trace_mod_p(spec, ell));
  }

  TraceMap candidates = compute_traces(spec, 100, 1, true);
  for (std::uint64_t ell : primes) {
    std::uint64_t r = ell % 7;
    bool skipped = ell == 7 || ell == 11 || r == 1 || r == 6;
    CHECK(candidates.entries.count(ell) == (skipped ? 0u : 1u));
  }

  TraceMap parallel = compute_traces(spec, 100, 4, false);
  CHECK(parallel.entries == all.entries);
}
