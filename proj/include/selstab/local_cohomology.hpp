#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "selstab/errors.hpp"

namespace selstab {

// Arithmetic happens in Z/p^N with p^N < 2^32 so products fit in uint64.
struct PadicContext {
  std::uint32_t p = 0;
  std::uint32_t precision = 0;  // N >= 2
  std::uint64_t modulus = 0;    // p^N

  static PadicContext make(std::uint32_t p, std::uint32_t precision);
};

struct Mat2z {
  std::uint64_t a = 0, b = 0, c = 0, d = 0;  // entries mod p^N

  bool operator==(const Mat2z&) const = default;
};

Mat2z mat_identity();
Mat2z mat_mul(const PadicContext& ctx, const Mat2z& x, const Mat2z& y);
Mat2z mat_pow(const PadicContext& ctx, Mat2z x, std::uint64_t e);
std::uint64_t mat_det(const PadicContext& ctx, const Mat2z& m);
bool mat_invertible(const PadicContext& ctx, const Mat2z& m);  // det a unit
Mat2z mat_inverse(const PadicContext& ctx, const Mat2z& m);

// Elementary-divisor exponent for entries of Z/p^N; kDivisible marks a
// divisor that vanishes mod p^N (indistinguishable from genuinely divisible).
inline constexpr int kDivisible = -1;

std::string divisor_exp_name(int e);  // "divisible" or the decimal exponent

struct SmithForm {
  int e1 = 0;  // min-valuation divisor; kDivisible when the matrix is 0
  int e2 = 0;
  Mat2z u, v;  // unimodular: u * m * v is diagonal with the stated valuations
};

// 2x2 Smith normal form over Z/p^N: exponents sorted, e1 <= e2 with
// kDivisible sorting last. u and v are invertible mod p^N.
SmithForm smith_normal_form(const PadicContext& ctx, const Mat2z& m);

// One tame local representation at ell != p, to precision N: sigma lifts
// Frobenius, tau generates tame inertia, and the tame relation
// sigma tau sigma^-1 = tau^ell must hold mod p^N.
struct LocalRepData {
  PadicContext ctx;
  std::uint64_t ell = 0;
  Mat2z sigma, tau;
};

// True iff both matrices are invertible and the tame relation holds mod p^N.
bool validate_relation(const LocalRepData& data);

// Inertia-invariant structure of the p^N-torsion module A = (Qp/Zp)^2:
// H0 = ker(tau - 1), decomposed by the Smith form of tau - 1. quotient_dim
// counts finite cyclic summands (exponent in 1..N-1); exponent-0 summands
// vanish and kDivisible summands die in H0 / p H0. frob_action is the matrix
// of sigma on that quotient, entries mod p, row-major quotient_dim^2.
struct InvariantStructure {
  int div1 = 0, div2 = 0;        // Smith exponents of tau - 1
  int quotient_dim = 0;          // 0, 1 or 2
  std::array<std::uint32_t, 4> frob_action{};  // quotient_dim x quotient_dim
  int beta_bound = 0;            // dim ker(frob_action - 1) over F_p
};

// Errors: RelationViolated when validate_relation fails,
// PrecisionInsufficient when a Smith exponent equals N-1 (a finite summand
// there cannot be told apart from a divisible one), InvalidParameter on a
// bad context or ell == p or ell not prime.
InvariantStructure inertia_invariants(const LocalRepData& data);

// Shorthand for inertia_invariants(data).beta_bound.
int beta_upper_bound(const LocalRepData& data);

}  // namespace selstab
