#include "selstab/local_cohomology.hpp"

#include <algorithm>

#include "selstab/primes.hpp"

namespace selstab {

namespace {

std::uint64_t egcd_inverse(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, newt = 1;
  std::int64_t r = static_cast<std::int64_t>(m), newr = static_cast<std::int64_t>(a % m);
  while (newr != 0) {
    std::int64_t q = r / newr;
    std::int64_t tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (r != 1) throw InvalidParameter("inverse of a non-unit");
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(t);
}

// p-adic valuation of x mod p^N, capped at N (x == 0 reports N).
int valuation(std::uint64_t x, std::uint32_t p, std::uint32_t n) {
  if (x == 0) return static_cast<int>(n);
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

std::uint64_t unit_part(std::uint64_t x, std::uint32_t p) {
  while (x % p == 0) x /= p;
  return x;
}

}  // namespace

PadicContext PadicContext::make(std::uint32_t p, std::uint32_t precision) {
  if (p < 2 || !is_prime_u64(p)) throw InvalidParameter("context needs prime p");
  if (precision < 2) throw InvalidParameter("precision must be >= 2");
  std::uint64_t m = 1;
  for (std::uint32_t i = 0; i < precision; ++i) {
    m *= p;
    if (m >= (1ull << 32)) throw InvalidParameter("p^N must stay below 2^32");
  }
  return PadicContext{p, precision, m};
}

Mat2z mat_identity() { return Mat2z{1, 0, 0, 1}; }

Mat2z mat_mul(const PadicContext& ctx, const Mat2z& x, const Mat2z& y) {
  const std::uint64_t m = ctx.modulus;
  return Mat2z{(x.a * y.a + x.b * y.c) % m, (x.a * y.b + x.b * y.d) % m,
               (x.c * y.a + x.d * y.c) % m, (x.c * y.b + x.d * y.d) % m};
}

Mat2z mat_pow(const PadicContext& ctx, Mat2z x, std::uint64_t e) {
  Mat2z r = mat_identity();
  while (e) {
    if (e & 1) r = mat_mul(ctx, r, x);
    x = mat_mul(ctx, x, x);
    e >>= 1;
  }
  return r;
}

std::uint64_t mat_det(const PadicContext& ctx, const Mat2z& m) {
  const std::uint64_t mod = ctx.modulus;
  return (m.a * m.d % mod + mod - m.b * m.c % mod) % mod;
}

bool mat_invertible(const PadicContext& ctx, const Mat2z& m) {
  return mat_det(ctx, m) % ctx.p != 0;
}

Mat2z mat_inverse(const PadicContext& ctx, const Mat2z& m) {
  const std::uint64_t mod = ctx.modulus;
  std::uint64_t det = mat_det(ctx, m);
  if (det % ctx.p == 0) throw InvalidParameter("matrix not invertible mod p^N");
  std::uint64_t inv = egcd_inverse(det, mod);
  return Mat2z{m.d * inv % mod, (mod - m.b % mod) * inv % mod,
               (mod - m.c % mod) * inv % mod, m.a * inv % mod};
}

std::string divisor_exp_name(int e) {
  return e == kDivisible ? std::string("divisible") : std::to_string(e);
}

SmithForm smith_normal_form(const PadicContext& ctx, const Mat2z& m) {
  const std::uint64_t mod = ctx.modulus;
  const std::uint32_t p = ctx.p;
  const std::uint32_t n = ctx.precision;
  // Invariant kept throughout: a = u * m * v.
  std::uint64_t e[2][2] = {{m.a % mod, m.b % mod}, {m.c % mod, m.d % mod}};
  Mat2z u = mat_identity();
  Mat2z v = mat_identity();
  auto swap_rows = [&] {
    std::swap(e[0][0], e[1][0]);
    std::swap(e[0][1], e[1][1]);
    std::swap(u.a, u.c);
    std::swap(u.b, u.d);
  };
  auto swap_cols = [&] {
    std::swap(e[0][0], e[0][1]);
    std::swap(e[1][0], e[1][1]);
    std::swap(v.a, v.b);
    std::swap(v.c, v.d);
  };
  // Pivot: entry of least valuation to position (0,0).
  int best = valuation(e[0][0], p, n);
  int bi = 0, bj = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      int val = valuation(e[i][j], p, n);
      if (val < best) {
        best = val;
        bi = i;
        bj = j;
      }
    }
  }
  SmithForm out;
  if (best >= static_cast<int>(n)) {  // zero matrix mod p^N
    out.e1 = kDivisible;
    out.e2 = kDivisible;
    out.u = u;
    out.v = v;
    return out;
  }
  if (bi == 1) swap_rows();
  if (bj == 1) swap_cols();
  std::uint64_t pivot_unit_inv = egcd_inverse(unit_part(e[0][0], p), mod);
  std::uint64_t piv_pow = 1;
  for (int i = 0; i < best; ++i) piv_pow *= p;
  // Row 1 -= q * row 0 with q = (e10 / p^e1) * unit(e00)^-1: kills e[1][0]
  // because e1 is minimal.
  {
    std::uint64_t q = (e[1][0] / piv_pow) % mod * pivot_unit_inv % mod;
    for (int j = 0; j < 2; ++j) e[1][j] = (e[1][j] + mod - q * e[0][j] % mod) % mod;
    u.c = (u.c + mod - q * u.a % mod) % mod;
    u.d = (u.d + mod - q * u.b % mod) % mod;
  }
  // Column 1 -= q * column 0; row 1 entry (1,0) is already 0 so (1,1) is
  // untouched.
  {
    std::uint64_t q = (e[0][1] / piv_pow) % mod * pivot_unit_inv % mod;
    e[0][1] = (e[0][1] + mod - q * e[0][0] % mod) % mod;
    e[1][1] = (e[1][1] + mod - q * e[1][0] % mod) % mod;
    v.b = (v.b + mod - q * v.a % mod) % mod;
    v.d = (v.d + mod - q * v.c % mod) % mod;
  }
  out.e1 = best;
  int val2 = valuation(e[1][1], p, n);
  out.e2 = val2 >= static_cast<int>(n) ? kDivisible : val2;
  out.u = u;
  out.v = v;
  return out;
}

bool validate_relation(const LocalRepData& data) {
  const PadicContext& ctx = data.ctx;
  if (!mat_invertible(ctx, data.sigma) || !mat_invertible(ctx, data.tau)) return false;
  Mat2z lhs = mat_mul(ctx, mat_mul(ctx, data.sigma, data.tau), mat_inverse(ctx, data.sigma));
  Mat2z rhs = mat_pow(ctx, data.tau, data.ell);
  return lhs == rhs;
}

InvariantStructure inertia_invariants(const LocalRepData& data) {
  const PadicContext& ctx = data.ctx;
  if (ctx.modulus == 0) throw InvalidParameter("uninitialized context");
  if (!is_prime_u64(data.ell) || data.ell == ctx.p)
    throw InvalidParameter("ell must be a prime different from p");
  if (!validate_relation(data))
    throw RelationViolated("sigma tau sigma^-1 != tau^ell at this precision");
  const std::uint64_t mod = ctx.modulus;
  const std::uint32_t p = ctx.p;
  const int n = static_cast<int>(ctx.precision);

  Mat2z t{(data.tau.a + mod - 1) % mod, data.tau.b % mod, data.tau.c % mod,
          (data.tau.d + mod - 1) % mod};
  SmithForm snf = smith_normal_form(ctx, t);
  InvariantStructure out;
  out.div1 = snf.e1;
  out.div2 = snf.e2;

  int exps[2] = {snf.e1, snf.e2};
  for (int exp : exps) {
    if (exp != kDivisible && exp == n - 1)
      throw PrecisionInsufficient(
          "elementary divisor p^" + std::to_string(exp) +
          " at precision " + std::to_string(n) +
          ": cannot separate a finite summand from a divisible one");
  }

  // H0 = ker(tau - 1) on the p^N torsion of (Qp/Zp)^2. With u t v = diag,
  // the kernel is v * (A[p^e1] + A[p^e2]); the summand with exponent e
  // contributes the generator w = p^(N-e) * (column of v), order p^e.
  // Exponent 0 summands are trivial and divisible summands disappear in
  // H0 / p H0, so only 1 <= e <= N-2 columns carry the quotient.
  int kept[2];
  int n_kept = 0;
  for (int i = 0; i < 2; ++i) {
    if (exps[i] != kDivisible && exps[i] >= 1) kept[n_kept++] = i;
  }
  out.quotient_dim = n_kept;
  if (n_kept == 0) {
    out.beta_bound = 0;
    return out;
  }

  // sigma(w_i) expanded in the generators of both summands: with
  // z = v^-1 sigma w_i, the coefficient on summand j is z_j / p^(N-e_j)
  // (exact because the relation makes H0 sigma-stable).
  auto pow_p = [&](int k) {
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) r *= p;
    return r;
  };
  std::uint64_t col[2][2] = {{snf.v.a, snf.v.c}, {snf.v.b, snf.v.d}};  // col[j] = j-th column
  Mat2z v_inv = mat_inverse(ctx, snf.v);
  std::uint32_t action[2][2] = {{0, 0}, {0, 0}};
  for (int ii = 0; ii < n_kept; ++ii) {
    int i = kept[ii];
    std::uint64_t scale_i = pow_p(n - exps[i]);
    std::uint64_t w0 = col[i][0] * scale_i % mod;
    std::uint64_t w1 = col[i][1] * scale_i % mod;
    std::uint64_t s0 = (data.sigma.a * w0 + data.sigma.b * w1) % mod;
    std::uint64_t s1 = (data.sigma.c * w0 + data.sigma.d * w1) % mod;
    std::uint64_t z0 = (v_inv.a * s0 + v_inv.b * s1) % mod;
    std::uint64_t z1 = (v_inv.c * s0 + v_inv.d * s1) % mod;
    std::uint64_t z[2] = {z0, z1};
    for (int j = 0; j < 2; ++j) {
      int ej = exps[j] == kDivisible ? n : exps[j];
      std::uint64_t denom = pow_p(n - ej);
      if (z[j] % denom != 0)
        throw RelationViolated("inertia invariants are not frobenius-stable");
      std::uint64_t coeff = z[j] / denom;
      action[j][i] = static_cast<std::uint32_t>(coeff % p);
    }
  }
  // Restrict to the kept summands and compute dim ker(action - 1) over F_p.
  if (n_kept == 1) {
    int i = kept[0];
    std::uint32_t c = action[i][i];
    out.frob_action[0] = c;
    out.beta_bound = (c == 1) ? 1 : 0;
    return out;
  }
  std::uint32_t m00 = action[kept[0]][kept[0]], m01 = action[kept[0]][kept[1]];
  std::uint32_t m10 = action[kept[1]][kept[0]], m11 = action[kept[1]][kept[1]];
  out.frob_action = {m00, m01, m10, m11};
  // rank of (action - I) mod p
  std::uint64_t r00 = (m00 + p - 1) % p, r01 = m01 % p;
  std::uint64_t r10 = m10 % p, r11 = (m11 + p - 1) % p;
  std::uint64_t det = (r00 * r11 % p + p - r01 * r10 % p) % p;
  int rank;
  if (det != 0) {
    rank = 2;
  } else if (r00 || r01 || r10 || r11) {
    rank = 1;
  } else {
    rank = 0;
  }
  out.beta_bound = 2 - rank;
  return out;
}

int beta_upper_bound(const LocalRepData& data) { return inertia_invariants(data).beta_bound; }

}  // namespace selstab
