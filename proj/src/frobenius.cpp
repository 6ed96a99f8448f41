#include "selstab/frobenius.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "selstab/kernels.hpp"
#include "selstab/parallel.hpp"
#include "selstab/primes.hpp"

namespace selstab {

namespace {

std::uint64_t reduce(std::int64_t v, std::uint64_t m) {
  std::int64_t r = v % static_cast<std::int64_t>(m);
  if (r < 0) r += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(r);
}

struct BValues {
  std::uint64_t b2, b4, b6, b8;
};

BValues b_values_mod(const CurveSpec& c, std::uint64_t m) {
  std::uint64_t a1 = reduce(c.a1, m), a2 = reduce(c.a2, m), a3 = reduce(c.a3, m),
                a4 = reduce(c.a4, m), a6 = reduce(c.a6, m);
  std::uint64_t b2 = (mulmod_u64(a1, a1, m) + 4 * a2) % m;
  std::uint64_t b4 = (2 * a4 + mulmod_u64(a1, a3, m)) % m;
  std::uint64_t b6 = (mulmod_u64(a3, a3, m) + 4 * a6) % m;
  std::uint64_t b8 = (mulmod_u64(mulmod_u64(a1, a1, m), a6, m) + 4 * mulmod_u64(a2, a6, m) +
                      m - mulmod_u64(mulmod_u64(a1, a3, m), a4, m) +
                      mulmod_u64(a2, mulmod_u64(a3, a3, m), m) + m -
                      mulmod_u64(a4, a4, m)) %
                     m;
  return {b2, b4, b6, b8};
}

std::uint64_t disc_mod(const CurveSpec& c, std::uint64_t m) {
  auto [b2, b4, b6, b8] = b_values_mod(c, m);
  // -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
  std::uint64_t t1 = mulmod_u64(mulmod_u64(b2, b2, m), b8, m);
  std::uint64_t t2 = mulmod_u64(8 % m, mulmod_u64(mulmod_u64(b4, b4, m), b4, m), m);
  std::uint64_t t3 = mulmod_u64(27 % m, mulmod_u64(b6, b6, m), m);
  std::uint64_t t4 = mulmod_u64(9 % m, mulmod_u64(b2, mulmod_u64(b4, b6, m), m), m);
  return (4 * m - t1 - t2 - t3 + t4) % m;
}

// Exhaustive count on the long model; only used for ell in {2, 3} where no
// square-counting shortcut applies.
std::uint64_t count_points_tiny(const CurveSpec& c, std::uint64_t ell) {
  std::uint64_t a1 = reduce(c.a1, ell), a2 = reduce(c.a2, ell), a3 = reduce(c.a3, ell),
                a4 = reduce(c.a4, ell), a6 = reduce(c.a6, ell);
  std::uint64_t n = 1;  // infinity
  for (std::uint64_t x = 0; x < ell; ++x) {
    std::uint64_t rhs = (((x + a2) % ell * x + a4) % ell * x + a6) % ell;
    for (std::uint64_t y = 0; y < ell; ++y) {
      std::uint64_t lhs = (y * y + a1 * x % ell * y + a3 * y) % ell;
      if (lhs == rhs) ++n;
    }
  }
  return n;
}

}  // namespace

__int128 CurveSpec::discriminant() const {
  __int128 a1v = a1, a2v = a2, a3v = a3, a4v = a4, a6v = a6;
  __int128 b2 = a1v * a1v + 4 * a2v;
  __int128 b4 = 2 * a4v + a1v * a3v;
  __int128 b6 = a3v * a3v + 4 * a6v;
  __int128 b8 = a1v * a1v * a6v + 4 * a2v * a6v - a1v * a3v * a4v + a2v * a3v * a3v - a4v * a4v;
  return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

void CurveSpec::validate() const {
  for (std::int64_t v : {a1, a2, a3, a4, a6}) {
    if (v > kMaxCurveCoefficient || v < -kMaxCurveCoefficient)
      throw InvalidParameter("curve coefficient beyond +-100000");
  }
  if (discriminant() == 0) throw InvalidParameter("curve is singular (discriminant 0)");
}

std::uint64_t count_points(const CurveSpec& curve, std::uint64_t ell, std::uint64_t bound,
                           const std::string& kernel) {
  curve.validate();
  if (!is_prime_u64(ell)) throw InvalidParameter("count_points at non-prime " + std::to_string(ell));
  if (ell > bound) throw ResourceLimit("prime " + std::to_string(ell) + " beyond point-count bound");
  if (ell >= kKernelMaxModulus) throw ResourceLimit("prime beyond scan kernel range");
  if (disc_mod(curve, ell) == 0) throw BadReduction(ell);
  if (ell < 5) return count_points_tiny(curve, ell);
  // Complete the square: for ell > 3 the curve is isomorphic to
  // y^2 = x^3 - 27 c4 x - 54 c6.
  auto [b2, b4, b6, b8] = b_values_mod(curve, ell);
  (void)b8;
  std::uint64_t c4 = (mulmod_u64(b2, b2, ell) + 24 * ell - 24 * b4) % ell;
  std::uint64_t c6 = (ell - mulmod_u64(mulmod_u64(b2, b2, ell), b2, ell) +
                      mulmod_u64(36 % ell, mulmod_u64(b2, b4, ell), ell) + ell -
                      mulmod_u64(216 % ell, b6, ell)) %
                     ell;
  std::uint64_t a = mulmod_u64(ell - 27 % ell, c4, ell);
  std::uint64_t b = mulmod_u64(ell - 54 % ell, c6, ell);
  auto tbl = build_square_count_table(static_cast<std::uint32_t>(ell));
  ScanFn scan = select_scan_kernel(kernel);
  std::uint64_t affine = scan(static_cast<std::uint32_t>(ell), static_cast<std::uint32_t>(a),
                              static_cast<std::uint32_t>(b), tbl.data());
  return affine + 1;
}

std::int64_t trace_of_frobenius(const CurveSpec& curve, std::uint64_t ell, std::uint64_t bound,
                                const std::string& kernel) {
  std::uint64_t n = count_points(curve, ell, bound, kernel);
  return static_cast<std::int64_t>(ell) + 1 - static_cast<std::int64_t>(n);
}

TraceTable load_trace_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open trace table: " + path);
  TraceTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') {
      std::size_t eq = line.find("p=", start);
      if (eq != std::string::npos) {
        errno = 0;
        char* end = nullptr;
        unsigned long v = std::strtoul(line.c_str() + eq + 2, &end, 10);
        if (end == line.c_str() + eq + 2 || errno != 0 || v < 2)
          throw ParseError("bad p= header", line_no);
        table.p = static_cast<std::uint32_t>(v);
      }
      continue;
    }
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) throw ParseError("expected ell,value", line_no);
    errno = 0;
    char* end = nullptr;
    unsigned long long ell = std::strtoull(line.c_str() + start, &end, 10);
    if (end != line.c_str() + comma || errno != 0) throw ParseError("bad prime field", line_no);
    errno = 0;
    long long value = std::strtoll(line.c_str() + comma + 1, &end, 10);
    while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
    if (end == line.c_str() + comma + 1 || (end && *end != '\0') || errno != 0)
      throw ParseError("value out of range", line_no);
    if (!is_prime_u64(ell)) throw ParseError("key " + std::to_string(ell) + " is not prime", line_no);
    if (table.entries.count(ell)) throw ParseError("duplicate prime " + std::to_string(ell), line_no);
    if (table.p == 0) throw ParseError("data row before '# p=' header", line_no);
    std::int64_t r = value % static_cast<std::int64_t>(table.p);
    if (r < 0) r += table.p;
    table.entries.emplace(ell, static_cast<std::uint32_t>(r));
  }
  return table;
}

void ResidualRepSpec::validate() const {
  if (p < 5 || !is_prime_u64(p)) throw InvalidParameter("p must be a prime >= 5");
  if (n_rho_bar == 0) throw InvalidParameter("n_rho_bar must be positive");
  if (n_rho_bar % p == 0) throw InvalidParameter("p divides n_rho_bar");
  if (const auto* cs = std::get_if<CurveSource>(&source)) {
    cs->curve.validate();
  } else {
    const auto& t = std::get<TableSource>(source).table;
    if (t.p != 0 && t.p != p) throw InvalidParameter("trace table p disagrees with spec p");
  }
}

std::optional<std::uint32_t> trace_mod_p(const ResidualRepSpec& spec, std::uint64_t ell) {
  if (const auto* cs = std::get_if<CurveSource>(&spec.source)) {
    try {
      std::int64_t a = trace_of_frobenius(cs->curve, ell, spec.pointcount_bound, spec.kernel);
      return static_cast<std::uint32_t>(reduce(a, spec.p));
    } catch (const ToolError&) {
      return std::nullopt;
    }
  }
  const auto& t = std::get<TableSource>(spec.source).table;
  auto it = t.entries.find(ell);
  if (it == t.entries.end()) return std::nullopt;
  return it->second;
}

FrobClass frobenius_data(const ResidualRepSpec& spec, std::uint64_t ell) {
  spec.validate();
  if (!is_prime_u64(ell)) throw InvalidParameter("frobenius_data at non-prime");
  if (ell == spec.p || spec.n_rho_bar % ell == 0)
    throw InvalidParameter("frobenius_data needs ell coprime to p * n_rho_bar");
  auto tr = trace_mod_p(spec, ell);
  if (!tr) throw MissingTrace(ell);
  return FrobClass{ell, *tr, static_cast<std::uint32_t>(ell % spec.p)};
}

TraceMap compute_traces(const ResidualRepSpec& spec, std::uint64_t bound, unsigned threads,
                        bool omega_candidates_only) {
  spec.validate();
  auto primes = primes_up_to(bound);
  std::vector<std::uint64_t> wanted;
  wanted.reserve(primes.size());
  for (std::uint64_t ell : primes) {
    if (ell == spec.p || spec.n_rho_bar % ell == 0) continue;
    if (omega_candidates_only) {
      std::uint64_t r = ell % spec.p;
      if (r == 1 || r == spec.p - 1) continue;
    }
    wanted.push_back(ell);
  }
  auto chunks = parallel_chunk_map<std::vector<std::optional<std::uint32_t>>>(
      wanted.size(), threads, 256, [&](std::uint64_t b, std::uint64_t e) {
        std::vector<std::optional<std::uint32_t>> out;
        out.reserve(e - b);
        for (std::uint64_t i = b; i < e; ++i) out.push_back(trace_mod_p(spec, wanted[i]));
        return out;
      });
  TraceMap map;
  std::size_t idx = 0;
  for (const auto& chunk : chunks) {
    for (const auto& v : chunk) map.entries.emplace(wanted[idx++], v);
  }
  return map;
}

}  // namespace selstab
