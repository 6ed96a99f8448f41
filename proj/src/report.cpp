#include "selstab/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "selstab/primes.hpp"

namespace selstab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(trim(s.substr(start)));
      return out;
    }
    out.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
}

std::int64_t parse_int(const std::string& text) {
  std::size_t pos = 0;
  std::int64_t v = std::stoll(text, &pos);
  if (pos != text.size()) throw InvalidParameter("bad integer: " + text);
  return v;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw InvalidParameter("bad boolean: " + text);
}

std::string curve_str(const CurveSpec& c) {
  std::ostringstream os;
  os << c.a1 << ";" << c.a2 << ";" << c.a3 << ";" << c.a4 << ";" << c.a6;
  return os.str();
}

std::string cases_str(const LevelFactorization& f) {
  std::string out;
  for (const auto& r : f.raised) {
    if (!out.empty()) out += ";";
    out += std::to_string(r.ell) + "^" + std::to_string(r.alpha) + ":" + carayol_case_name(r.kase);
  }
  return out;
}

std::string reasons_str(const StabilityVerdict& v) {
  std::string out;
  for (const auto& r : v.reasons) {
    if (!out.empty()) out += "; ";
    out += r.str();
  }
  return out;
}

template <class F>
auto stage(const char* name, F f) {
  try {
    return f();
  } catch (const ToolError& e) {
    throw ToolError("stage " + std::string(name) + ": " + e.what(), e.category);
  }
}

}  // namespace

std::uint64_t parse_count(const std::string& text) {
  std::string t = trim(text);
  if (t.empty()) throw InvalidParameter("empty count");
  std::size_t epos = t.find_first_of("eE");
  try {
    if (epos == std::string::npos) {
      std::size_t pos = 0;
      std::uint64_t v = std::stoull(t, &pos);
      if (pos != t.size()) throw InvalidParameter("");
      return v;
    }
    std::size_t pos = 0;
    std::uint64_t mant = std::stoull(t.substr(0, epos), &pos);
    if (pos != epos) throw InvalidParameter("");
    std::size_t pos2 = 0;
    std::string exp_part = t.substr(epos + 1);
    std::uint64_t exp = std::stoull(exp_part, &pos2);
    if (pos2 != exp_part.size() || exp > 18) throw InvalidParameter("");
    for (std::uint64_t i = 0; i < exp; ++i) {
      if (mant > UINT64_MAX / 10) throw InvalidParameter("");
      mant *= 10;
    }
    return mant;
  } catch (const std::exception&) {
    throw InvalidParameter("bad count: " + text);
  }
}

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_no);
    if (kv.count(key)) throw ParseError("duplicate key: " + key, line_no);
    kv[key] = value;
  }
  return kv;
}

ResidualRepSpec spec_from_kv(const std::map<std::string, std::string>& kv,
                             const std::string& base_dir) {
  ResidualRepSpec spec;
  auto need = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw InvalidParameter(std::string("missing key: ") + key);
    return it->second;
  };
  spec.p = static_cast<std::uint32_t>(parse_count(need("p")));
  spec.n_rho_bar = parse_count(need("n_rho_bar"));
  bool has_curve = kv.count("curve") > 0;
  bool has_table = kv.count("trace_table") > 0;
  if (has_curve == has_table)
    throw InvalidParameter("spec needs exactly one of: curve, trace_table");
  if (has_curve) {
    auto parts = split(kv.at("curve"), ',');
    if (parts.size() != 5) throw InvalidParameter("curve needs a1,a2,a3,a4,a6");
    CurveSpec c;
    c.a1 = parse_int(parts[0]);
    c.a2 = parse_int(parts[1]);
    c.a3 = parse_int(parts[2]);
    c.a4 = parse_int(parts[3]);
    c.a6 = parse_int(parts[4]);
    spec.source = CurveSource{c};
  } else {
    std::filesystem::path tp(kv.at("trace_table"));
    if (tp.is_relative() && !base_dir.empty()) tp = std::filesystem::path(base_dir) / tp;
    TraceTable table = load_trace_table(tp.string());
    spec.source = TableSource{std::move(table)};
  }
  if (kv.count("surjective")) spec.surjective_asserted = parse_bool(kv.at("surjective"));
  if (kv.count("pointcount_bound")) spec.pointcount_bound = parse_count(kv.at("pointcount_bound"));
  if (kv.count("kernel")) spec.kernel = kv.at("kernel");
  spec.validate();
  return spec;
}

RunConfig config_from_file(const std::string& path) {
  auto kv = parse_kv_file(path);
  std::string dir = std::filesystem::path(path).parent_path().string();
  RunConfig cfg;
  cfg.spec = spec_from_kv(kv, dir);
  if (kv.count("max")) cfg.max_level = parse_count(kv.at("max"));
  if (kv.count("checkpoints")) {
    for (const auto& part : split(kv.at("checkpoints"), ','))
      cfg.checkpoints.push_back(parse_count(part));
  }
  if (kv.count("density_max_p"))
    cfg.density_max_p = static_cast<std::uint32_t>(parse_count(kv.at("density_max_p")));
  if (kv.count("band")) cfg.band = std::stod(kv.at("band"));
  if (kv.count("format")) {
    const std::string& f = kv.at("format");
    if (f == "csv") cfg.format = ReportFormat::Csv;
    else if (f == "json") cfg.format = ReportFormat::Json;
    else throw InvalidParameter("format must be csv or json");
  }
  if (kv.count("out")) cfg.out_path = kv.at("out");
  if (kv.count("seed")) cfg.seed = parse_count(kv.at("seed"));
  if (kv.count("threads")) cfg.threads = static_cast<unsigned>(parse_count(kv.at("threads")));
  return cfg;
}

void RunConfig::validate() const {
  spec.validate();
  if (max_level < 4 * spec.n_rho_bar)
    throw InvalidParameter("max must be at least 4 * n_rho_bar");
  std::uint64_t cofactor_bound = max_level / spec.n_rho_bar;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] > cofactor_bound)
      throw InvalidParameter("checkpoint beyond max / n_rho_bar");
    if (i && checkpoints[i] <= checkpoints[i - 1])
      throw InvalidParameter("checkpoints must be strictly increasing");
  }
  if (!checkpoints.empty() && checkpoints.size() < 3)
    throw InvalidParameter("need at least three checkpoints");
  if (band <= 1.0) throw InvalidParameter("band must exceed 1");
}

ReportDocument run_report(const RunConfig& config) {
  config.validate();
  const ResidualRepSpec& spec = config.spec;
  const std::uint64_t cofactor_bound = config.max_level / spec.n_rho_bar;
  ReportDocument doc;
  doc.cofactor_bound = cofactor_bound;

  doc.config.emplace_back("p", std::to_string(spec.p));
  doc.config.emplace_back("n_rho_bar", std::to_string(spec.n_rho_bar));
  if (spec.has_curve()) {
    doc.config.emplace_back("source", "curve");
    doc.config.emplace_back("curve", curve_str(std::get<CurveSource>(spec.source).curve));
  } else {
    doc.config.emplace_back("source", "trace_table");
  }
  doc.config.emplace_back("surjective", spec.surjective_asserted ? "true" : "false");
  doc.config.emplace_back("max_level", std::to_string(config.max_level));
  doc.config.emplace_back("cofactor_bound", std::to_string(cofactor_bound));
  doc.config.emplace_back("band", fmt6(config.band));
  doc.config.emplace_back("density_max_p", std::to_string(config.density_max_p));
  doc.config.emplace_back("seed", std::to_string(config.seed));

  doc.density = stage("density", [&] {
    return omega_density_bruteforce(spec.p, config.density_max_p, config.threads);
  });

  doc.sieve = stage("sieve", [&] { return sieve_omega(spec, cofactor_bound, config.threads); });
  doc.estimate = stage("sieve", [&] { return summarize_density(spec, doc.sieve); });

  std::vector<std::uint64_t> checkpoints = config.checkpoints;
  if (checkpoints.empty()) {
    std::uint64_t c0 = std::max<std::uint64_t>(2, cofactor_bound / 100);
    std::uint64_t c1 = std::max<std::uint64_t>(c0 + 1, cofactor_bound / 10);
    std::uint64_t c2 = std::max<std::uint64_t>(c1 + 1, cofactor_bound);
    if (c2 > cofactor_bound)
      throw InvalidParameter("stage census: max too small to derive three checkpoints");
    checkpoints = {c0, c1, c2};
  }
  {
    std::string cps;
    for (std::uint64_t c : checkpoints) {
      if (!cps.empty()) cps += ";";
      cps += std::to_string(c);
    }
    doc.config.emplace_back("checkpoints", cps);
  }

  doc.census = stage("census", [&] {
    return census_ratios(doc.sieve.omega, omega_density_closed_form(spec.p), checkpoints,
                         config.band, config.threads);
  });

  doc.admissible =
      stage("levels", [&] { return enumerate_admissible(spec, config.max_level, config.threads); });

  doc.lower_bound = stage("lower_bound", [&]() -> std::uint64_t {
    for (auto [q, e] : factorize(spec.n_rho_bar)) {
      (void)e;
      std::uint64_t r = q % spec.p;
      if (r == 1 || r == spec.p - 1)
        throw HypothesisViolated("base level prime " + std::to_string(q) + " is +-1 mod p", q);
    }
    if (!doc.sieve.unknown.empty()) throw MissingTrace(doc.sieve.unknown.front());
    return count_squarefree_smooth(doc.sieve.omega, cofactor_bound, config.threads);
  });

  doc.certificates = stage("certify", [&] {
    auto members = enumerate_squarefree_smooth(doc.sieve.omega, cofactor_bound, doc.lower_bound,
                                               config.threads);
    std::vector<StabilityVerdict> out;
    out.reserve(members.size());
    for (std::uint64_t m : members)
      out.push_back(stability_certificate(spec, m * spec.n_rho_bar));
    return out;
  });

  stage("consistency", [&] {
    bool all_certified = true;
    for (const auto& cert : doc.certificates) all_certified = all_certified && cert.certified;
    bool all_admissible = true;
    {
      std::size_t i = 0;
      for (const auto& cert : doc.certificates) {
        while (i < doc.admissible.levels.size() && doc.admissible.levels[i].level < cert.level)
          ++i;
        if (i >= doc.admissible.levels.size() || doc.admissible.levels[i].level != cert.level) {
          all_admissible = false;
          break;
        }
      }
    }
    doc.checks.push_back({"lower_bound_equals_census_count",
                          doc.lower_bound == doc.certificates.size()});
    doc.checks.push_back({"census_levels_certified", all_certified});
    doc.checks.push_back({"census_levels_admissible", all_admissible});
    doc.checks.push_back({"lower_bound_le_admissible_plus_unknown",
                          doc.lower_bound <=
                              doc.admissible.levels.size() + doc.admissible.unknown.size()});
    doc.checks.push_back({"density_identity", doc.density.match});
    doc.checks.push_back({"census_ratio_stable", doc.census.stable});
    return 0;
  });

  return doc;
}

std::string ReportDocument::to_csv() const {
  std::ostringstream os;
  os << "# selstab report\n";
  os << "# section: config\n";
  os << "key,value\n";
  for (const auto& [k, v] : config) os << k << "," << v << "\n";
  os << "# section: density\n";
  os << "p,group_order,matching_count,fraction_num,fraction_den,closed_form_num,closed_form_den,"
        "match\n";
  os << density.p << "," << density.group_order << "," << density.matching_count << ","
     << density.exact_fraction.num << "," << density.exact_fraction.den << ","
     << density.closed_form.num << "," << density.closed_form.den << ","
     << (density.match ? "true" : "false") << "\n";
  os << "# section: sieve\n";
  os << "bound,primes,in_omega,unknown,excl_divides_level,excl_equals_p,excl_congruence_plus_one,"
        "excl_congruence_minus_one,excl_trace_mismatch,fraction_num,fraction_den,target_num,"
        "target_den,deviation\n";
  std::uint64_t excl[5] = {0, 0, 0, 0, 0};
  for (const auto& pc : sieve.classified) {
    if (pc.verdict != Verdict::Excluded) continue;
    switch (pc.reason) {
      case ExclusionReason::DividesLevel: ++excl[0]; break;
      case ExclusionReason::EqualsP: ++excl[1]; break;
      case ExclusionReason::CongruencePlusOne: ++excl[2]; break;
      case ExclusionReason::CongruenceMinusOne: ++excl[3]; break;
      case ExclusionReason::TraceMismatch: ++excl[4]; break;
      default: break;
    }
  }
  os << sieve.bound << "," << estimate.prime_count << "," << estimate.omega_count << ","
     << estimate.unknown_count << "," << excl[0] << "," << excl[1] << "," << excl[2] << ","
     << excl[3] << "," << excl[4] << "," << estimate.fraction.num << "," << estimate.fraction.den
     << "," << estimate.target.num << "," << estimate.target.den << "," << fmt6(estimate.deviation)
     << "\n";
  os << "# section: omega_primes\n";
  os << "ell\n";
  for (std::uint64_t ell : sieve.omega) os << ell << "\n";
  os << "# section: census\n";
  os << "y,count,ratio\n";
  for (const auto& pt : census.points)
    os << pt.y << "," << pt.count << "," << fmt6(pt.ratio) << "\n";
  os << "# section: census_summary\n";
  os << "delta_num,delta_den,band,stable\n";
  os << census.delta.num << "," << census.delta.den << "," << fmt6(census.band) << ","
     << (census.stable ? "true" : "false") << "\n";
  os << "# section: levels\n";
  os << "level,cofactor,cases\n";
  for (const auto& f : admissible.levels)
    os << f.level << "," << f.level / f.base << "," << cases_str(f) << "\n";
  os << "# section: levels_summary\n";
  os << "admissible,unknown\n";
  os << admissible.levels.size() << "," << admissible.unknown.size() << "\n";
  os << "# section: lower_bound\n";
  os << "max_level,cofactor_bound,count\n";
  os << admissible.bound << "," << cofactor_bound << "," << lower_bound << "\n";
  os << "# section: certificates\n";
  os << "level,certified,reasons\n";
  for (const auto& cert : certificates)
    os << cert.level << "," << (cert.certified ? "true" : "false") << "," << reasons_str(cert)
       << "\n";
  os << "# section: consistency\n";
  os << "check,ok\n";
  for (const auto& chk : checks) os << chk.name << "," << (chk.ok ? "true" : "false") << "\n";
  return os.str();
}

std::string ReportDocument::to_json() const {
  ordered_json j;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  j["config"] = cfg;
  j["density"] = {
      {"p", density.p},
      {"group_order", density.group_order},
      {"matching_count", density.matching_count},
      {"fraction", density.exact_fraction.str()},
      {"closed_form", density.closed_form.str()},
      {"match", density.match},
  };
  ordered_json excl = ordered_json::object();
  std::uint64_t counts[5] = {0, 0, 0, 0, 0};
  for (const auto& pc : sieve.classified) {
    if (pc.verdict != Verdict::Excluded) continue;
    switch (pc.reason) {
      case ExclusionReason::DividesLevel: ++counts[0]; break;
      case ExclusionReason::EqualsP: ++counts[1]; break;
      case ExclusionReason::CongruencePlusOne: ++counts[2]; break;
      case ExclusionReason::CongruenceMinusOne: ++counts[3]; break;
      case ExclusionReason::TraceMismatch: ++counts[4]; break;
      default: break;
    }
  }
  excl["divides_level"] = counts[0];
  excl["equals_p"] = counts[1];
  excl["congruence_plus_one"] = counts[2];
  excl["congruence_minus_one"] = counts[3];
  excl["trace_mismatch"] = counts[4];
  j["sieve"] = {
      {"bound", sieve.bound},
      {"primes", estimate.prime_count},
      {"in_omega", estimate.omega_count},
      {"unknown", estimate.unknown_count},
      {"excluded", excl},
      {"fraction", estimate.fraction.str()},
      {"target", estimate.target.str()},
      {"deviation", fmt6(estimate.deviation)},
  };
  j["omega_primes"] = sieve.omega;
  ordered_json pts = ordered_json::array();
  for (const auto& pt : census.points)
    pts.push_back({{"y", pt.y}, {"count", pt.count}, {"ratio", fmt6(pt.ratio)}});
  j["census"] = {
      {"delta", census.delta.str()},
      {"band", fmt6(census.band)},
      {"stable", census.stable},
      {"points", pts},
  };
  ordered_json lv = ordered_json::array();
  for (const auto& f : admissible.levels)
    lv.push_back({{"level", f.level}, {"cofactor", f.level / f.base}, {"cases", cases_str(f)}});
  j["levels"] = {
      {"admissible", lv},
      {"unknown", admissible.unknown},
  };
  j["lower_bound"] = {
      {"max_level", admissible.bound},
      {"cofactor_bound", cofactor_bound},
      {"count", lower_bound},
  };
  ordered_json certs = ordered_json::array();
  for (const auto& cert : certificates) {
    ordered_json reasons = ordered_json::array();
    for (const auto& r : cert.reasons) reasons.push_back(r.str());
    certs.push_back({{"level", cert.level}, {"certified", cert.certified}, {"reasons", reasons}});
  }
  j["certificates"] = certs;
  ordered_json cons = ordered_json::array();
  for (const auto& chk : checks) cons.push_back({{"check", chk.name}, {"ok", chk.ok}});
  j["consistency"] = cons;
  return j.dump(2) + "\n";
}

std::string ReportDocument::render(ReportFormat f) const {
  return f == ReportFormat::Csv ? to_csv() : to_json();
}

}  // namespace selstab
