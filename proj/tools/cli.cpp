#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "ksubdiv/certify.hpp"
#include "ksubdiv/construction.hpp"
#include "ksubdiv/error.hpp"
#include "ksubdiv/identities.hpp"

#ifndef KSUBDIV_VERSION
#define KSUBDIV_VERSION "0.0.0"
#endif

namespace ksubdiv::cli {

using json = nlohmann::ordered_json;

std::uint64_t parse_budget(const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || !std::isfinite(v) || v < 1 || v > 1.8e19 || v != std::floor(v))
    throw Error(Errc::ParseError, "budget must be a positive integer such as 1e8, got '" + text + "'");
  return static_cast<std::uint64_t>(v);
}

namespace {

std::uint64_t parse_u64(const std::string& s) {
  if (s.empty() || s.size() > 19 || s.find_first_not_of("0123456789") != std::string::npos)
    throw Error(Errc::ParseError, "not a non-negative integer: '" + s + "'");
  return std::stoull(s);
}

bool admissible(std::uint64_t p) { return p > 11 && p % 6 == 5 && is_prime(p); }

}  // namespace

std::vector<std::uint64_t> parse_prime_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    std::uint64_t lo = parse_u64(text.substr(0, dots)), hi = parse_u64(text.substr(dots + 2));
    if (lo > hi) throw Error(Errc::ParseError, "empty range " + text);
    if (hi > 100'000) throw Error(Errc::ParseError, "range upper end too large: " + text);
    for (std::uint64_t p = lo; p <= hi; ++p)
      if (admissible(p)) out.push_back(p);
    return out;
  }
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(parse_u64(cell));
  if (out.empty()) throw Error(Errc::ParseError, "no primes given");
  return out;
}

namespace {

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

// Output goes to a file when a path is given, else to the fallback stream.
void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::Io, "cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error(Errc::Io, "write failed for " + path);
}

json stamp(bool timestamp, const std::string& command) {
  json j;
  j["tool"] = "ksubdiv " + command;
  j["version"] = KSUBDIV_VERSION;
  if (timestamp) j["generated_at"] = utc_now();
  return j;
}

std::string census_line(const Graph& g, const EdgeCensus& c) {
  return "p=" + std::to_string(g.p()) + " n=" + std::to_string(c.vertex_count) + " edges=" +
         std::to_string(c.edge_count) + " min_deg=" + std::to_string(c.min_degree) +
         " max_deg=" + std::to_string(c.max_degree) + " edge_bound=" + std::to_string(edge_lower_bound(g.p())) +
         " degree_bound=" + std::to_string(degree_lower_bound(g.p()));
}

// ------------------------------------------------------------------ commands

struct BuildArgs {
  std::uint64_t prime = 0;
  std::string out;
  std::string format = "csv";
};

int cmd_build(const BuildArgs& a, std::ostream& out, std::ostream& err) {
  Graph g(a.prime);
  std::ostringstream body;
  export_edges(g, a.format == "json" ? ExportFormat::AdjacencyJson : ExportFormat::EdgeCsv, body);
  auto line = census_line(g, census(g)) + " format=" + a.format;
  if (a.out.empty()) {
    out << body.str();
    err << line << "\n";
  } else {
    emit(a.out, body.str(), out);
    out << line << " out=" << a.out << "\n";
  }
  return kExitOk;
}

struct StatsArgs {
  std::uint64_t prime = 0;
  std::string in;
};

int cmd_stats(const StatsArgs& a, std::ostream& out) {
  if (!a.in.empty()) {
    std::ifstream f(a.in, std::ios::binary);
    if (!f) throw Error(Errc::Io, "cannot open " + a.in);
    auto list = import_edge_csv(f);
    Graph g(list.p);
    out << census_line(g, census_from_edges(list)) << " source=" << a.in << "\n";
    return kExitOk;
  }
  Graph g(a.prime);
  auto c = census(g);
  out << census_line(g, c) << " deficient=" << c.deficient_count << "\n";
  return kExitOk;
}

struct CertifyArgs {
  std::vector<std::uint64_t> primes{17, 23, 29};
  std::string budget = "1e9";
  std::uint64_t seed = 1;
  std::string json_path;
  bool no_timestamp = false;
  std::size_t theta_limit = 10'000;
  std::uint64_t apex_trials = 500;
};

int cmd_certify(const CertifyArgs& a, std::ostream& out) {
  CertifyOptions opts;
  opts.budget = parse_budget(a.budget);
  opts.seed = a.seed;
  opts.theta_limit = a.theta_limit;
  opts.apex_trials = a.apex_trials;

  // Validate every prime and the budget before any work starts.
  std::vector<Graph> graphs;
  for (auto p : a.primes) {
    graphs.emplace_back(p);
    if (auto w = estimate_sequence_work(graphs.back()); w > opts.budget)
      throw Error(Errc::ScaleRefused, "p=" + std::to_string(p) + ": estimated work " + std::to_string(w) +
                                          " exceeds budget " + std::to_string(opts.budget));
  }

  const bool timings = !a.no_timestamp;
  json doc = stamp(timings, "certify");
  doc["config"] = {{"primes", a.primes}, {"budget", opts.budget}, {"seed", opts.seed},
                   {"theta_limit", opts.theta_limit}, {"apex_trials", opts.apex_trials}};
  json reports = json::array();
  bool all = true;
  for (const auto& g : graphs) {
    auto r = certify_all(g, opts);
    all = all && r.pass;
    out << "p=" << r.prime << ' ' << (r.pass ? "PASS" : "FAIL");
    if (r.sequence_census)
      out << " per_triple_max=" << r.sequence_census->per_triple_max << " threshold=" << r.sequence_census->threshold;
    out << "\n";
    for (const auto& c : r.checks) {
      out << "  " << c.name << ' ' << (c.pass ? "PASS" : "FAIL");
      if (timings) out << " elapsed=" << fixed(c.elapsed_ms, 1) << "ms";
      out << "\n";
    }
    reports.push_back(to_json(r, timings));
  }
  doc["pass"] = all;
  doc["reports"] = std::move(reports);
  if (!a.json_path.empty()) emit(a.json_path, doc.dump(2) + "\n", out);
  return all ? kExitOk : kExitFailed;
}

struct IdentitiesArgs {
  std::string mode = "exact";
  std::vector<std::string> only;
  std::uint64_t seed = 1;
  int trials = 20;
  std::string json_path;
  bool no_timestamp = false;
  bool mutate_f1 = false;
};

// "g4 in w3" -> "deg_w3(g4)"
std::string degree_label(const std::string& s) {
  auto pos = s.find(" in ");
  if (pos == std::string::npos) return s;
  return "deg_" + s.substr(pos + 4) + "(" + s.substr(0, pos) + ")";
}

json report_json(const IdentityReport& r, bool timings) {
  json j;
  j["id"] = r.id;
  j["locator"] = r.locator;
  j["pass"] = r.pass;
  j["mode"] = std::string(to_string(r.mode));
  json units = json::object();
  for (const auto& [k, u] : r.units) units[k] = u.get_str();
  j["units"] = std::move(units);
  json degrees = json::object();
  for (const auto& [k, d] : r.degrees) degrees[k] = d;
  j["degrees"] = std::move(degrees);
  json notes = json::object();
  for (const auto& [k, v] : r.notes) notes[k] = v;
  j["notes"] = std::move(notes);
  if (!r.pass) j["failure"] = r.failure;
  if (timings) j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

int cmd_identities(const IdentitiesArgs& a, std::ostream& out) {
  CatalogOptions opts;
  opts.mode = parse_check_mode(a.mode);
  opts.seed = a.seed;
  opts.trials = a.trials;
  opts.mutate_f1 = a.mutate_f1;
  if (opts.trials < 1) throw Error(Errc::ParseError, "--trials must be positive");

  std::vector<std::string> ids = a.only.empty() ? catalog_ids() : a.only;
  for (const auto& id : ids)
    if (std::find(catalog_ids().begin(), catalog_ids().end(), id) == catalog_ids().end())
      throw Error(Errc::UnknownCheck, "no registered check " + id);

  const bool timings = !a.no_timestamp;
  IdentityCatalog catalog(opts);
  json entries = json::array();
  std::size_t passed = 0;
  for (const auto& id : ids) {
    auto r = catalog.run(id);
    passed += r.pass;
    std::string units, degrees;
    for (const auto& [k, u] : r.units) units += (units.empty() ? "" : ",") + u.get_str();
    for (const auto& [k, d] : r.degrees) degrees += (degrees.empty() ? "" : ",") + degree_label(k) + "=" + std::to_string(d);
    out << r.id << ' ' << (r.pass ? "PASS" : "FAIL") << " unit=" << (units.empty() ? "-" : units)
        << " degree_claims=" << (degrees.empty() ? "-" : degrees)
        << " elapsed=" << (timings ? fixed(r.elapsed_ms, 2) + "ms" : "-") << "\n";
    if (!r.pass) out << "  " << r.failure << "\n";
    entries.push_back(report_json(r, timings));
  }
  if (ids.size() > 1) out << passed << "/" << ids.size() << " PASS (" << to_string(opts.mode) << ")\n";

  json doc = stamp(timings, "identities");
  doc["config"] = {{"mode", std::string(to_string(opts.mode))}, {"seed", opts.seed}, {"trials", opts.trials},
                   {"mutate_f1", opts.mutate_f1}};
  doc["passed"] = passed;
  doc["total"] = ids.size();
  doc["reports"] = std::move(entries);
  if (!a.json_path.empty()) emit(a.json_path, doc.dump(2) + "\n", out);
  return passed == ids.size() ? kExitOk : kExitFailed;
}

struct ScanArgs {
  std::string primes = "17..101";
  std::string out;
  std::uint64_t sequences_upto = 29;
  std::string budget = "1e9";
};

int cmd_scan(const ScanArgs& a, std::ostream& out) {
  auto primes = parse_prime_list(a.primes);
  const auto budget = parse_budget(a.budget);
  std::ostringstream csv;
  csv << "p,n,edges,min_deg,ratio,per_triple_max,status\n";
  for (auto p : primes) {
    try {
      Graph g(p);
      auto c = census(g);
      const long double ratio =
          static_cast<long double>(c.edge_count) / std::pow(static_cast<long double>(c.vertex_count), 4.0L / 3.0L);
      std::string seq;
      if (p <= a.sequences_upto) seq = std::to_string(certify_sequence_bound(g, 30, budget).per_triple_max);
      csv << p << ',' << c.vertex_count << ',' << c.edge_count << ',' << c.min_degree << ','
          << fixed(static_cast<double>(ratio), 6) << ',' << seq << ",ok\n";
    } catch (const Error& e) {
      csv << p << ",,,,,," << to_string(e.code()) << "\n";
    }
  }
  emit(a.out, csv.str(), out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Build, census and certify the K_{3,30}' free construction G_p", "ksubdiv"};
  app.require_subcommand(1);
  app.set_version_flag("--version", KSUBDIV_VERSION);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Write the edge list of G_p");
  b->add_option("--prime,-p", build.prime, "p = 5 mod 6, p > 11")->required();
  b->add_option("--out,-o", build.out, "Output file (default: standard output)");
  b->add_option("--format", build.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  StatsArgs stats;
  auto* s = app.add_subcommand("stats", "Census of G_p or of an exported edge CSV");
  auto* sp = s->add_option("--prime,-p", stats.prime, "Build G_p and count");
  auto* si = s->add_option("--in", stats.in, "Read an edge CSV written by build");
  sp->excludes(si);
  s->require_option(1);

  CertifyArgs cert;
  auto* c = app.add_subcommand("certify", "Run every finite certification check");
  c->add_option("--prime,-p", cert.primes, "Primes (repeatable; default 17 23 29)");
  c->add_option("--budget", cert.budget, "Work limit for the sequence census, e.g. 1e8");
  c->add_option("--seed", cert.seed, "Seed for the sampled apex checks");
  c->add_option("--json", cert.json_path, "Write the JSON report here");
  c->add_option("--theta-limit", cert.theta_limit, "Max theta_{3,3} witnesses per prime");
  c->add_option("--apex-trials", cert.apex_trials, "Apex reconstruction samples");
  c->add_flag("--no-timestamp", cert.no_timestamp, "Omit timestamps and timings");

  IdentitiesArgs ids;
  auto* i = app.add_subcommand("identities", "Verify the resultant and factorization catalog");
  i->add_option("--mode", ids.mode, "exact or probabilistic")->check(CLI::IsMember({"exact", "probabilistic"}));
  i->add_option("--only", ids.only, "Restrict to these ids (repeatable), e.g. I-6");
  i->add_option("--seed", ids.seed, "Seed for probabilistic comparisons");
  i->add_option("--trials", ids.trials, "Evaluation points per probabilistic comparison");
  i->add_option("--json", ids.json_path, "Write the JSON report here");
  i->add_flag("--no-timestamp", ids.no_timestamp, "Omit timestamps and timings");
  i->add_flag("--mutate-f1", ids.mutate_f1, "Perturb the first base equation; most checks should then fail");

  ScanArgs scan;
  auto* sc = app.add_subcommand("scan", "Census table over many primes as CSV");
  sc->add_option("--primes", scan.primes, "Range lo..hi (admissible primes only) or a comma list");
  sc->add_option("--out,-o", scan.out, "Output CSV (default: standard output)");
  sc->add_option("--sequences-upto", scan.sequences_upto, "Also run the sequence census for p up to this");
  sc->add_option("--budget", scan.budget, "Work limit for the sequence census");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << KSUBDIV_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (b->parsed()) return cmd_build(build, out, err);
    if (s->parsed()) return cmd_stats(stats, out);
    if (c->parsed()) return cmd_certify(cert, out);
    if (i->parsed()) return cmd_identities(ids, out);
    if (sc->parsed()) return cmd_scan(scan, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace ksubdiv::cli
