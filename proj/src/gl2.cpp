#include "selstab/gl2.hpp"

#include "selstab/errors.hpp"
#include "selstab/parallel.hpp"
#include "selstab/primes.hpp"

namespace selstab {

bool is_omega_class(const Mat2f& m, std::uint32_t p) {
  if (p < 5 || !is_prime_u64(p)) throw InvalidParameter("is_omega_class needs prime p >= 5");
  std::uint64_t a = m.a % p, b = m.b % p, c = m.c % p, d = m.d % p;
  std::uint64_t det = (a * d % p + p * p - b * c % p) % p;
  if (det == 0) throw InvalidParameter("is_omega_class on a singular matrix");
  std::uint64_t tr = (a + d) % p;
  // char(-1) = 1 + tr + det
  if ((1 + tr + det) % p != 0) return false;
  std::uint64_t mu = (p - det % p) % p;  // the eigenvalue besides -1
  return mu != 1 && mu != p - 1;
}

Rational omega_density_closed_form(std::uint32_t p) {
  if (p < 5 || !is_prime_u64(p)) throw InvalidParameter("density needs prime p >= 5");
  std::int64_t pp = p;
  return make_rational(pp - 3, (pp - 1) * (pp - 1));
}

DensityReport omega_density_bruteforce(std::uint32_t p, std::uint32_t max_p, unsigned threads) {
  if (p < 5 || !is_prime_u64(p)) throw InvalidParameter("density needs prime p >= 5");
  if (p > max_p)
    throw ResourceLimit("density enumeration capped at p <= " + std::to_string(max_p));
  const std::uint64_t pu = p;
  // One task per (a, b) pair; (c, d) enumerated inside.
  auto chunks = parallel_chunk_map<std::pair<std::uint64_t, std::uint64_t>>(
      pu * pu, threads, pu, [&](std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t group = 0, match = 0;
        for (std::uint64_t ab = lo; ab < hi; ++ab) {
          std::uint32_t a = static_cast<std::uint32_t>(ab / pu);
          std::uint32_t b = static_cast<std::uint32_t>(ab % pu);
          for (std::uint32_t c = 0; c < p; ++c) {
            std::uint64_t bc = static_cast<std::uint64_t>(b) * c % pu;
            for (std::uint32_t d = 0; d < p; ++d) {
              std::uint64_t det = (static_cast<std::uint64_t>(a) * d % pu + pu - bc) % pu;
              if (det == 0) continue;
              ++group;
              std::uint64_t tr = (static_cast<std::uint64_t>(a) + d) % pu;
              if ((1 + tr + det) % pu != 0) continue;
              std::uint64_t mu = pu - det;
              if (mu != 1 && mu != pu - 1) ++match;
            }
          }
        }
        return std::make_pair(group, match);
      });
  std::uint64_t group = 0, match = 0;
  for (auto [g, m] : chunks) {
    group += g;
    match += m;
  }
  DensityReport rep;
  rep.p = p;
  rep.group_order = static_cast<std::int64_t>(group);
  rep.matching_count = static_cast<std::int64_t>(match);
  rep.exact_fraction = make_rational(rep.matching_count, rep.group_order);
  rep.closed_form = omega_density_closed_form(p);
  rep.match = rep.exact_fraction == rep.closed_form;
  return rep;
}

}  // namespace selstab
