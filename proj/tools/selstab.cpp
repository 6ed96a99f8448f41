// selstab: level-raising arithmetic toolkit.
//
//   density  exact vs closed-form share of useful frobenius classes in GL2(F_p)
//   sieve    classify primes into / out of the level-raising set
//   census   squarefree smooth-cofactor counts with growth diagnostics
//   levels   admissible raised levels up to a bound
//   beta     local invariant bound from explicit (sigma, tau) matrices
//   certify  stability hypotheses for one raised level
//   ledger   global Euler-characteristic bookkeeping from a ledger file
//   report   everything above as one deterministic csv/json document
//
// Exit codes: 0 ok, 2 bad usage or limits, 3 missing data, 4 hypothesis
// failure, 1 unexpected.

#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "selstab/census.hpp"
#include "selstab/frobenius.hpp"
#include "selstab/gl2.hpp"
#include "selstab/levels.hpp"
#include "selstab/local_cohomology.hpp"
#include "selstab/omega.hpp"
#include "selstab/report.hpp"
#include "selstab/stability.hpp"

using namespace selstab;

namespace {

struct Args {
  std::map<std::string, std::string> flags;

  bool has(const std::string& name) const { return flags.count(name) > 0; }

  const std::string& get(const std::string& name) const {
    auto it = flags.find(name);
    if (it == flags.end()) throw InvalidParameter("missing flag --" + name);
    return it->second;
  }

  std::string get_or(const std::string& name, const std::string& fallback) const {
    auto it = flags.find(name);
    return it == flags.end() ? fallback : it->second;
  }
};

Args parse_args(int argc, char** argv, int first, const std::set<std::string>& allowed) {
  Args args;
  for (int i = first; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg.rfind("--", 0) != 0) throw InvalidParameter("unexpected argument: " + arg);
    std::string name = arg.substr(2);
    std::string value;
    std::size_t eq = name.find('=');
    if (eq != std::string::npos) {
      value = name.substr(eq + 1);
      name = name.substr(0, eq);
    } else {
      if (i + 1 >= argc) throw InvalidParameter("flag --" + name + " needs a value");
      value = argv[++i];
    }
    if (!allowed.count(name)) throw InvalidParameter("unknown flag --" + name);
    if (args.flags.count(name)) throw InvalidParameter("duplicate flag --" + name);
    args.flags[name] = value;
  }
  return args;
}

void write_out(const Args& args, const std::string& text) {
  if (args.has("out")) {
    std::ofstream out(args.get("out"), std::ios::binary);
    if (!out) throw InvalidParameter("cannot write " + args.get("out"));
    out << text;
  } else {
    std::fwrite(text.data(), 1, text.size(), stdout);
  }
}

ResidualRepSpec load_spec(const Args& args) {
  auto kv = parse_kv_file(args.get("spec"));
  std::string dir;
  std::size_t slash = args.get("spec").find_last_of('/');
  if (slash != std::string::npos) dir = args.get("spec").substr(0, slash);
  ResidualRepSpec spec = spec_from_kv(kv, dir);
  if (args.has("kernel")) spec.kernel = args.get("kernel");
  if (args.has("pointcount-bound")) spec.pointcount_bound = parse_count(args.get("pointcount-bound"));
  return spec;
}

unsigned threads_of(const Args& args) {
  return args.has("threads") ? static_cast<unsigned>(parse_count(args.get("threads"))) : 1;
}

int cmd_density(int argc, char** argv) {
  Args args = parse_args(argc, argv, 2, {"p", "max-p", "threads", "out"});
  std::uint32_t p = static_cast<std::uint32_t>(parse_count(args.get("p")));
  std::uint32_t max_p = static_cast<std::uint32_t>(
      parse_count(args.get_or("max-p", std::to_string(kDefaultDensityMaxP))));
  DensityReport rep = omega_density_bruteforce(p, max_p, threads_of(args));
  std::string text =
      "p,group_order,matching_count,fraction_num,fraction_den,closed_form_num,closed_form_den,match\n" +
      std::to_string(rep.p) + "," + std::to_string(rep.group_order) + "," +
      std::to_string(rep.matching_count) + "," + std::to_string(rep.exact_fraction.num) + "," +
      std::to_string(rep.exact_fraction.den) + "," + std::to_string(rep.closed_form.num) + "," +
      std::to_string(rep.closed_form.den) + "," + (rep.match ? "true" : "false") + "\n";
  write_out(args, text);
  return rep.match ? 0 : 4;
}

int cmd_sieve(int argc, char** argv) {
  Args args = parse_args(argc, argv, 2,
                         {"spec", "bound", "threads", "out", "kernel", "pointcount-bound"});
  ResidualRepSpec spec = load_spec(args);
  std::uint64_t bound = parse_count(args.get("bound"));
  OmegaSieve sieve = sieve_omega(spec, bound, threads_of(args));
  std::string text = "ell,verdict,reason,a_ell_mod_p\n";
  for (const auto& pc : sieve.classified) {
    text += std::to_string(pc.ell);
    text += ",";
    text += verdict_name(pc.verdict);
    text += ",";
    text += reason_name(pc.reason);
    text += ",";
    if (pc.trace) text += std::to_string(*pc.trace);
    text += "\n";
  }
  write_out(args, text);
  std::fprintf(stderr, "sieve: %zu primes, %zu in omega, %zu unknown\n", sieve.classified.size(),
               sieve.omega.size(), sieve.unknown.size());
  return 0;
}

int cmd_census(int argc, char** argv) {
  Args args = parse_args(argc, argv, 2,
                         {"spec", "max", "checkpoints", "band", "threads", "out", "kernel",
                          "pointcount-bound"});
  ResidualRepSpec spec = load_spec(args);
  std::uint64_t bound = parse_count(args.get("max"));
  unsigned threads = threads_of(args);
  OmegaSieve sieve = sieve_omega(spec, bound, threads);
  if (!sieve.unknown.empty()) throw MissingTrace(sieve.unknown.front());
  std::vector<std::uint64_t> checkpoints;
  if (args.has("checkpoints")) {
    std::string text = args.get("checkpoints");
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t comma = text.find(',', start);
      std::string part = text.substr(start, comma == std::string::npos ? comma : comma - start);
      checkpoints.push_back(parse_count(part));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  } else {
    std::uint64_t c0 = std::max<std::uint64_t>(2, bound / 100);
    std::uint64_t c1 = std::max<std::uint64_t>(c0 + 1, bound / 10);
    std::uint64_t c2 = std::max<std::uint64_t>(c1 + 1, bound);
    if (c2 > bound) throw InvalidParameter("max too small to derive three checkpoints");
    checkpoints = {c0, c1, c2};
  }
  double band = args.has("band") ? std::stod(args.get("band")) : 2.0;
  CensusCurve curve =
      census_ratios(sieve.omega, omega_density_closed_form(spec.p), checkpoints, band, threads);
  std::string text = "y,count,ratio\n";
  char buf[64];
  for (const auto& pt : curve.points) {
    std::snprintf(buf, sizeof(buf), "%llu,%llu,%.6f\n",
                  static_cast<unsigned long long>(pt.y),
                  static_cast<unsigned long long>(pt.count), pt.ratio);
    text += buf;
  }
  write_out(args, text);
  std::fprintf(stderr, "census: delta %s, stable %s\n", curve.delta.str().c_str(),
               curve.stable ? "true" : "false");
  return 0;
}

int cmd_levels(int argc, char** argv) {
  Args args = parse_args(argc, argv, 2,
                         {"spec", "max", "threads", "out", "kernel", "pointcount-bound"});
  ResidualRepSpec spec = load_spec(args);
  std::uint64_t x = parse_count(args.get("max"));
  unsigned threads = threads_of(args);
  TraceMap traces = compute_traces(spec, x / spec.n_rho_bar, threads, false);
  std::string text = "level,verdict,detail\n";
  for (std::uint64_t level = spec.n_rho_bar; level <= x; level += spec.n_rho_bar) {
    CarayolResult r = carayol_check(spec, level, &traces);
    text += std::to_string(level);
    text += ",";
    switch (r.verdict) {
      case LevelVerdict::Admissible: {
        text += "admissible,";
        std::string cases;
        for (const auto& rp : r.factorization.raised) {
          if (!cases.empty()) cases += ";";
          cases += std::to_string(rp.ell) + "^" + std::to_string(rp.alpha) + ":" +
                   carayol_case_name(rp.kase);
        }
        text += cases;
        break;
      }
      case LevelVerdict::NotAdmissible:
        text += "not_admissible,";
        switch (r.failure) {
          case LevelFailure::BaseNotDividing: text += "base_not_dividing"; break;
          case LevelFailure::PDividesLevel: text += "p_divides_level"; break;
          case LevelFailure::FailedAt:
            text += "failed_at:" + std::to_string(r.failed_prime);
            break;
          default: text += "?"; break;
        }
        break;
      case LevelVerdict::Unknown:
        text += "unknown,missing_trace_at:" + std::to_string(r.failed_prime);
        break;
    }
    text += "\n";
  }
  write_out(args, text);
  return 0;
}

int cmd_beta(int argc, char** argv) {
  Args args = parse_args(argc, argv, 2, {"p", "prec", "ell", "sigma", "tau"});
  LocalRepData data;
  data.ctx = PadicContext::make(static_cast<std::uint32_t>(parse_count(args.get("p"))),
                                static_cast<std::uint32_t>(parse_count(args.get("prec"))));
  data.ell = parse_count(args.get("ell"));
  auto parse_mat = [&](const std::string& text) {
    long long entries[4];
    std::size_t start = 0;
    for (int i = 0; i < 4; ++i) {
      std::size_t comma = text.find(',', start);
      if ((i < 3) == (comma == std::string::npos))
        throw InvalidParameter("matrix needs a,b,c,d");
      std::string part = text.substr(start, comma == std::string::npos ? comma : comma - start);
      try {
        entries[i] = std::stoll(part);
      } catch (const std::exception&) {
        throw InvalidParameter("bad matrix entry: " + part);
      }
      start = comma + 1;
    }
    auto wrap = [&](long long v) {
      long long m = static_cast<long long>(data.ctx.modulus);
      long long r = v % m;
      if (r < 0) r += m;
      return static_cast<std::uint64_t>(r);
    };
    return Mat2z{wrap(entries[0]), wrap(entries[1]), wrap(entries[2]), wrap(entries[3])};
  };
  data.sigma = parse_mat(args.get("sigma"));
  data.tau = parse_mat(args.get("tau"));
  InvariantStructure inv = inertia_invariants(data);
  std::printf("divisors: %s,%s\n", divisor_exp_name(inv.div1).c_str(),
              divisor_exp_name(inv.div2).c_str());
  std::printf("quotient_dim: %d\n", inv.quotient_dim);
  std::string action = "[";
  for (int r = 0; r < inv.quotient_dim; ++r) {
    if (r) action += ";";
    for (int c = 0; c < inv.quotient_dim; ++c) {
      if (c) action += ",";
      action += std::to_string(inv.frob_action[r * inv.quotient_dim + c]);
    }
  }
  action += "]";
  std::printf("frob_action: %s\n", action.c_str());
  std::printf("beta_bound: %d\n", inv.beta_bound);
  return 0;
}

int cmd_certify(int argc, char** argv) {
  Args args = parse_args(argc, argv, 2,
                         {"spec", "level", "threads", "kernel", "pointcount-bound"});
  ResidualRepSpec spec = load_spec(args);
  std::uint64_t level = parse_count(args.get("level"));
  StabilityVerdict v = stability_certificate(spec, level);
  if (v.certified) {
    std::printf("certified: level %llu = %llu * %llu\n",
                static_cast<unsigned long long>(v.level),
                static_cast<unsigned long long>(v.base),
                static_cast<unsigned long long>(v.cofactor));
    return 0;
  }
  std::printf("not certified: level %llu\n", static_cast<unsigned long long>(v.level));
  bool unknown_blocked = false;
  for (const auto& r : v.reasons) {
    std::printf("  - %s\n", r.str().c_str());
    if (r.kind == CertFailure::CofactorPrimeUnknown) unknown_blocked = true;
  }
  return unknown_blocked ? 3 : 4;
}

int cmd_ledger(int argc, char** argv) {
  Args args = parse_args(argc, argv, 2, {"input"});
  LedgerInput input = parse_ledger_file(args.get("input"));
  std::int64_t ledger = wiles_ledger(input);
  DimBounds bounds = selmer_dim_bounds(input);
  std::printf("wiles_ledger: %lld\n", static_cast<long long>(ledger));
  std::printf("selmer_dim_lower: %lld\n", static_cast<long long>(bounds.lower));
  std::printf("selmer_dim_upper: %lld\n", static_cast<long long>(bounds.upper));
  return 0;
}

int cmd_report(int argc, char** argv) {
  Args args = parse_args(argc, argv, 2,
                         {"config", "spec", "max", "checkpoints", "band", "format", "out", "seed",
                          "threads", "density-max-p", "kernel", "pointcount-bound"});
  RunConfig cfg;
  if (args.has("config")) {
    cfg = config_from_file(args.get("config"));
  } else {
    cfg.spec = load_spec(args);
  }
  if (args.has("kernel")) cfg.spec.kernel = args.get("kernel");
  if (args.has("pointcount-bound"))
    cfg.spec.pointcount_bound = parse_count(args.get("pointcount-bound"));
  if (args.has("max")) cfg.max_level = parse_count(args.get("max"));
  if (args.has("checkpoints")) {
    cfg.checkpoints.clear();
    std::string text = args.get("checkpoints");
    std::size_t start = 0;
    for (;;) {
      std::size_t comma = text.find(',', start);
      cfg.checkpoints.push_back(
          parse_count(text.substr(start, comma == std::string::npos ? comma : comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (args.has("band")) cfg.band = std::stod(args.get("band"));
  if (args.has("seed")) cfg.seed = parse_count(args.get("seed"));
  if (args.has("threads")) cfg.threads = static_cast<unsigned>(parse_count(args.get("threads")));
  if (args.has("density-max-p"))
    cfg.density_max_p = static_cast<std::uint32_t>(parse_count(args.get("density-max-p")));
  if (args.has("format")) {
    const std::string& f = args.get("format");
    if (f == "csv") cfg.format = ReportFormat::Csv;
    else if (f == "json") cfg.format = ReportFormat::Json;
    else throw InvalidParameter("format must be csv or json");
  }
  if (args.has("out")) cfg.out_path = args.get("out");
  ReportDocument doc = run_report(cfg);
  std::string text = doc.render(cfg.format);
  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw InvalidParameter("cannot write " + cfg.out_path);
    out << text;
  } else {
    std::fwrite(text.data(), 1, text.size(), stdout);
  }
  return 0;
}

void usage() {
  std::fprintf(stderr,
               "usage: selstab <command> [flags]\n"
               "  density  --p P [--max-p P] [--threads N] [--out F]\n"
               "  sieve    --spec F --bound B [--threads N] [--out F]\n"
               "  census   --spec F --max B [--checkpoints a,b,c] [--band X] [--out F]\n"
               "  levels   --spec F --max X [--threads N] [--out F]\n"
               "  beta     --p P --prec N --ell L --sigma a,b,c,d --tau a,b,c,d\n"
               "  certify  --spec F --level N\n"
               "  ledger   --input F\n"
               "  report   --config F | --spec F --max X [--format csv|json] [--out F]\n");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    usage();
    return 2;
  }
  std::string cmd = argv[1];
  try {
    if (cmd == "density") return cmd_density(argc, argv);
    if (cmd == "sieve") return cmd_sieve(argc, argv);
    if (cmd == "census") return cmd_census(argc, argv);
    if (cmd == "levels") return cmd_levels(argc, argv);
    if (cmd == "beta") return cmd_beta(argc, argv);
    if (cmd == "certify") return cmd_certify(argc, argv);
    if (cmd == "ledger") return cmd_ledger(argc, argv);
    if (cmd == "report") return cmd_report(argc, argv);
    if (cmd == "--help" || cmd == "-h" || cmd == "help") {
      usage();
      return 0;
    }
    std::fprintf(stderr, "selstab: unknown command '%s'\n", cmd.c_str());
    usage();
    return 2;
  } catch (const ToolError& e) {
    std::fprintf(stderr, "selstab: %s\n", e.what());
    switch (e.category) {
      case ErrorCategory::Usage: return 2;
      case ErrorCategory::Data: return 3;
      case ErrorCategory::Hypothesis: return 4;
    }
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "selstab: internal error: %s\n", e.what());
    return 1;
  }
}
