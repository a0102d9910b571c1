#include "ksubdiv/certify.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <random>
#include <unordered_map>

#include "ksubdiv/error.hpp"
#include "ksubdiv/identities.hpp"
#include "ksubdiv/parallel.hpp"

namespace ksubdiv {

namespace {

bool is_anchor(const Vertex& v, const Vertex& a, const Vertex& b, const Vertex& c) {
  return v == a || v == b || v == c;
}

// Vertices at distance two from a through some midpoint, a itself excluded.
std::vector<Vertex> second_neighbourhood(const Graph& g, const Vertex& a) {
  std::vector<Vertex> out;
  for (const Vertex& x : g.neighbors(a))
    for (const Vertex& w : g.neighbors(x))
      if (w != a) out.push_back(w);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string triple_text(const Vertex& a, const Vertex& b, const Vertex& c) {
  return "(" + to_string(a) + ") (" + to_string(b) + ") (" + to_string(c) + ")";
}

}  // namespace

SequenceCount count_sequences(const Graph& g, const Vertex& a, const Vertex& b, const Vertex& c) {
  SequenceCount out;
  for (const Vertex& w : second_neighbourhood(g, a)) {
    if (is_anchor(w, a, b, c)) continue;
    auto xs = g.common_neighbors(a, w);
    if (xs.empty()) continue;
    auto ys = g.common_neighbors(b, w);
    if (ys.empty()) continue;
    auto zs = g.common_neighbors(c, w);
    std::uint64_t here = 0;
    for (const Vertex& x : xs)
      for (const Vertex& y : ys)
        for (const Vertex& z : zs) {
          if (x == y || x == z || y == z) continue;
          ++here;
          out.witnesses.push_back({x, y, z, w});
          if (is_anchor(x, a, b, c) || is_anchor(y, a, b, c) || is_anchor(z, a, b, c)) ++out.anchor_collisions;
        }
    out.count += here;
    if (here > 0) ++out.distinct_w;
  }
  std::sort(out.witnesses.begin(), out.witnesses.end());
  return out;
}

std::uint64_t estimate_sequence_work(const Graph& g) {
  const unsigned __int128 k = static_cast<unsigned __int128>(g.s_size()) * g.s_size();
  const unsigned __int128 choose3 = k < 3 ? 0 : k * (k - 1) * (k - 2) / 6;
  const unsigned __int128 total = choose3 * g.vertex_count();
  return total > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                          : static_cast<std::uint64_t>(total);
}

namespace {

struct TripleAcc {
  std::uint64_t count = 0;
  std::uint64_t distinct_w = 0;
  std::uint64_t collisions = 0;
};

struct WorkerCensus {
  std::uint64_t per_triple_max = 0;
  std::optional<Triple> argmax;
  std::uint64_t distinct_w_max = 0;
  std::uint64_t triples = 0;
  std::uint64_t sequences = 0;
  std::uint64_t collisions = 0;
  std::map<std::uint64_t, std::uint64_t> histogram;
  std::vector<std::pair<Triple, std::uint64_t>> per_triple;

  void offer(const Triple& t, const TripleAcc& acc, bool collect) {
    ++triples;
    sequences += acc.count;
    collisions += acc.collisions;
    ++histogram[acc.count];
    distinct_w_max = std::max(distinct_w_max, acc.distinct_w);
    if (acc.count > per_triple_max || (acc.count == per_triple_max && (!argmax || t < *argmax))) {
      per_triple_max = acc.count;
      argmax = t;
    }
    if (collect) per_triple.emplace_back(t, acc.count);
  }
};

}  // namespace

SequenceCensus certify_sequence_bound(const Graph& g, std::uint64_t t, std::uint64_t budget, bool collect_triples) {
  SequenceCensus census;
  census.prime = g.p();
  census.threshold = t - 1;
  census.estimated_work = estimate_sequence_work(g);
  if (census.estimated_work > budget)
    throw Error(Errc::ScaleRefused, "p=" + std::to_string(g.p()) + ": estimated work " +
                                        std::to_string(census.estimated_work) + " exceeds budget " +
                                        std::to_string(budget));

  const std::uint64_t n = g.vertex_count();
  const unsigned workers = worker_count();
  std::vector<WorkerCensus> parts(workers);

  // Each unordered triple is owned by its smallest vertex a; for a fixed a we
  // walk the w at distance two and aggregate over the anchors of w above a.
  parallel_for(n, workers, [&](std::size_t ia, unsigned worker) {
    const Vertex a = g.vertex_at(ia);
    std::unordered_map<std::uint64_t, TripleAcc> local;
    std::vector<std::pair<Vertex, Vertex>> anchors;  // (anchor, midpoint)
    for (const Vertex& w : second_neighbourhood(g, a)) {
      anchors.clear();
      for (const Vertex& m : g.neighbors(w))
        for (const Vertex& b : g.neighbors(m))
          if (b != w && !(b < a)) anchors.emplace_back(b, m);
      std::sort(anchors.begin(), anchors.end());
      // Group boundaries; the first group is a itself when a is an anchor of w.
      std::vector<std::size_t> start;
      for (std::size_t i = 0; i < anchors.size(); ++i)
        if (i == 0 || anchors[i].first != anchors[i - 1].first) start.push_back(i);
      start.push_back(anchors.size());
      if (anchors.empty() || anchors.front().first != a) continue;
      const std::size_t groups = start.size() - 1;
      auto mids = [&](std::size_t gi) {
        return std::pair{anchors.begin() + static_cast<std::ptrdiff_t>(start[gi]),
                         anchors.begin() + static_cast<std::ptrdiff_t>(start[gi + 1])};
      };
      auto [xa, xe] = mids(0);
      for (std::size_t gb = 1; gb < groups; ++gb) {
        auto [yb, ye] = mids(gb);
        const Vertex& b = yb->first;
        for (std::size_t gc = gb + 1; gc < groups; ++gc) {
          auto [zb, ze] = mids(gc);
          const Vertex& c = zb->first;
          std::uint64_t here = 0, coll = 0;
          for (auto x = xa; x != xe; ++x)
            for (auto y = yb; y != ye; ++y)
              for (auto z = zb; z != ze; ++z) {
                if (x->second == y->second || x->second == z->second || y->second == z->second) continue;
                ++here;
                if (is_anchor(x->second, a, b, c) || is_anchor(y->second, a, b, c) || is_anchor(z->second, a, b, c))
                  ++coll;
              }
          if (here == 0) continue;
          auto& acc = local[g.index_of(b) * n + g.index_of(c)];
          acc.count += here;
          acc.distinct_w += 1;
          acc.collisions += coll;
        }
      }
    }
    std::vector<std::pair<std::uint64_t, TripleAcc>> ordered(local.begin(), local.end());
    std::sort(ordered.begin(), ordered.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    for (const auto& [key, acc] : ordered)
      parts[worker].offer(Triple{a, g.vertex_at(key / n), g.vertex_at(key % n)}, acc, collect_triples);
  });

  std::optional<Triple> best;
  for (auto& part : parts) {
    census.triples_checked += part.triples;
    census.sequences_total += part.sequences;
    census.anchor_collisions += part.collisions;
    census.distinct_w_max = std::max(census.distinct_w_max, part.distinct_w_max);
    for (const auto& [k, v] : part.histogram) census.histogram[k] += v;
    if (part.argmax && (!best || part.per_triple_max > census.per_triple_max ||
                        (part.per_triple_max == census.per_triple_max && *part.argmax < *best))) {
      best = part.argmax;
      census.per_triple_max = part.per_triple_max;
    }
    if (collect_triples)
      census.per_triple.insert(census.per_triple.end(), part.per_triple.begin(), part.per_triple.end());
  }
  if (best) census.argmax_triple = *best;
  std::sort(census.per_triple.begin(), census.per_triple.end());
  census.pass = census.per_triple_max <= census.threshold;
  return census;
}

// ---------------------------------------------------------------------- theta

bool validate_theta(const Graph& g, const ThetaWitness& t) {
  const Vertex all[] = {t.d, t.a, t.b, t.c, t.x, t.y, t.z, t.w};
  for (std::size_t i = 0; i < 8; ++i) {
    if (!g.contains(all[i])) return false;
    for (std::size_t j = i + 1; j < 8; ++j)
      if (all[i] == all[j]) return false;
  }
  const std::pair<Vertex, Vertex> edges[] = {{t.d, t.a}, {t.d, t.b}, {t.d, t.c}, {t.a, t.x}, {t.b, t.y},
                                             {t.c, t.z}, {t.w, t.x}, {t.w, t.y}, {t.w, t.z}};
  for (const auto& [u, v] : edges)
    if (!g.are_adjacent(u, v)) return false;
  return true;
}

void evaluate_dichotomy(const Graph& g, ThetaWitness& t) {
  const std::uint64_t p = g.p();
  t.satisfies_sum = (static_cast<std::uint64_t>(t.a.x1) + t.b.x1 + t.c.x1) % p == t.w.x1;
  auto term = [&](std::uint32_t u, std::uint32_t v) { return static_cast<std::uint64_t>(u) * v % p; };
  std::uint64_t plus = (term(t.a.x1, t.y.x1) + term(t.b.x1, t.z.x1) + term(t.c.x1, t.x.x1)) % p;
  std::uint64_t minus = (term(t.a.x1, t.z.x1) + term(t.b.x1, t.x.x1) + term(t.c.x1, t.y.x1)) % p;
  t.satisfies_linear = plus == minus;
}

std::vector<ThetaWitness> enumerate_theta33(const Graph& g, std::size_t limit) {
  std::vector<ThetaWitness> out;
  if (limit == 0) return out;
  const std::uint64_t n = g.vertex_count();
  std::vector<std::vector<Vertex>> second;
  std::vector<Vertex> ab, abc;
  for (std::uint64_t id = 0; id < n; ++id) {
    const Vertex d = g.vertex_at(id);
    const auto nd = g.neighbors(d);
    second.clear();
    for (const Vertex& v : nd) second.push_back(second_neighbourhood(g, v));
    for (std::size_t i = 0; i < nd.size(); ++i)
      for (std::size_t j = i + 1; j < nd.size(); ++j) {
        ab.clear();
        std::set_intersection(second[i].begin(), second[i].end(), second[j].begin(), second[j].end(),
                              std::back_inserter(ab));
        if (ab.empty()) continue;
        for (std::size_t k = j + 1; k < nd.size(); ++k) {
          const Vertex &a = nd[i], &b = nd[j], &c = nd[k];
          abc.clear();
          std::set_intersection(ab.begin(), ab.end(), second[k].begin(), second[k].end(), std::back_inserter(abc));
          for (const Vertex& w : abc) {
            if (w == d || is_anchor(w, a, b, c)) continue;
            auto xs = g.common_neighbors(a, w);
            auto ys = g.common_neighbors(b, w);
            auto zs = g.common_neighbors(c, w);
            for (const Vertex& x : xs)
              for (const Vertex& y : ys)
                for (const Vertex& z : zs) {
                  ThetaWitness t{d, a, b, c, x, y, z, w, false, false};
                  if (!validate_theta(g, t)) continue;
                  evaluate_dichotomy(g, t);
                  out.push_back(t);
                  if (out.size() == limit) return out;
                }
          }
        }
      }
  }
  return out;
}

// ----------------------------------------------------------------------- apex

ApexReport check_apex_reconstruction(const Graph& g, const ApexOptions& options) {
  ApexReport rep;
  const std::uint32_t p = g.p();
  const std::uint32_t s = g.s_size();
  if (s < 3) {
    // Three distinct first coordinates do not exist.
    rep.applicable = false;
    rep.pass = true;
    return rep;
  }
  const auto& T = identity_table();
  const auto& rel = apex_relations();
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::uint32_t> in_s(1, s), any(0, p - 1), nonzero(1, p - 1);

  auto mod = [p](std::int64_t v) { return static_cast<std::uint32_t>(((v % p) + p) % p); };
  auto mulm = [p](std::uint64_t a, std::uint64_t b) { return static_cast<std::uint32_t>(a * b % p); };

  std::vector<std::uint64_t> point(T->size(), 0);
  auto load = [&](const Vertex& a, const Vertex& b, const Vertex& c) {
    const char* names[] = {"a", "b", "c"};
    const Vertex* vs[] = {&a, &b, &c};
    for (int k = 0; k < 3; ++k) {
      point[T->index(std::string(names[k]) + "1")] = vs[k]->x1;
      point[T->index(std::string(names[k]) + "2")] = vs[k]->x2;
      point[T->index(std::string(names[k]) + "3")] = vs[k]->x3;
    }
  };
  auto r_values = [&] {
    return std::array<std::uint64_t, 3>{evaluate_mod(rel.r1, point, p), evaluate_mod(rel.r2, point, p),
                                        evaluate_mod(rel.r3, point, p)};
  };

  // Guard against pathological loops when almost every draw is degenerate.
  const std::uint64_t max_draws = options.trials * 1000 + 1000;
  std::uint64_t draws = 0;
  while (rep.trials < options.trials && draws++ < max_draws) {
    Vertex d{options.domain == ApexDomain::IndexSet ? in_s(rng) : nonzero(rng), any(rng), any(rng)};
    std::uint32_t a1 = in_s(rng), b1 = in_s(rng), c1 = in_s(rng);
    if (a1 == b1 || a1 == c1 || b1 == c1) {
      ++rep.skipped;
      continue;
    }
    auto a = g.neighbor_from_first_coord(d, a1);
    auto b = g.neighbor_from_first_coord(d, b1);
    auto c = g.neighbor_from_first_coord(d, c1);
    if (!a || !b || !c) {
      ++rep.skipped;
      continue;
    }
    ++rep.trials;
    auto sample = [&] { return "d=(" + to_string(d) + ") a,b,c=" + triple_text(*a, *b, *c); };

    load(*a, *b, *c);
    auto r = r_values();
    if (r[0] != 0 || r[1] != 0 || r[2] != 0)
      throw Error(Errc::ReconstructionMismatch, "r-relations do not vanish at " + sample());

    std::uint32_t num = mod(static_cast<std::int64_t>(a->x3) - b->x3);
    std::uint32_t den = mod(static_cast<std::int64_t>(mulm(a1, a1)) - mulm(b1, b1));
    std::uint32_t e1 = mulm(num, static_cast<std::uint32_t>(inv_mod(den, p)));
    // d2 = a1^2 d1 - a3, d3 = a1 d1^2 - a2
    std::uint32_t e2 = mod(static_cast<std::int64_t>(mulm(mulm(a1, a1), e1)) - a->x3);
    std::uint32_t e3 = mod(static_cast<std::int64_t>(mulm(a1, mulm(e1, e1))) - a->x2);
    Vertex rebuilt{e1, e2, e3};
    if (rebuilt != d)
      throw Error(Errc::ReconstructionMismatch, "apex formulas give (" + to_string(rebuilt) + ") at " + sample());
    for (const Vertex* v : {&*a, &*b, &*c})
      if ((v->x2 + static_cast<std::uint64_t>(rebuilt.x3)) % p != mulm(v->x1, mulm(e1, e1)) ||
          (v->x3 + static_cast<std::uint64_t>(rebuilt.x2)) % p != mulm(mulm(v->x1, v->x1), e1))
        throw Error(Errc::ReconstructionMismatch, "rebuilt apex is not adjacent to (" + to_string(*v) + ") at " + sample());
    ++rep.passed;

    if (options.mutate) {
      Vertex bm = *b;
      bm.x3 = (bm.x3 + 1) % p;
      load(*a, bm, *c);
      auto rm = r_values();
      ++rep.mutated;
      if (rm[0] != 0) ++rep.mutation_r1_nonzero;
      if (rm[0] != 0 || rm[1] != 0 || rm[2] != 0) ++rep.mutation_detected;
    }
  }
  if (rep.trials < options.trials) rep.failure = "only " + std::to_string(rep.trials) + " non-degenerate samples drawn";
  rep.pass = !rep.failure && rep.passed == rep.trials &&
             (!options.mutate || rep.detection_rate() >= kRequiredDetectionRate);
  if (!rep.pass && !rep.failure) rep.failure = "mutation detection rate below threshold";
  return rep;
}

// --------------------------------------------------------------------- lemma 1

Lemma1Report check_lemma1(const Graph& g) {
  Lemma1Report rep;
  const std::uint64_t n = g.vertex_count();
  for (std::uint64_t i = 0; i < n && rep.pass; ++i) {
    const Vertex u = g.vertex_at(i);
    const auto nb = g.neighbors(u);
    for (std::size_t j = 0; j < nb.size() && rep.pass; ++j)
      for (std::size_t k = j + 1; k < nb.size(); ++k) {
        ++rep.pairs_checked;
        const Vertex &x = nb[j], &y = nb[k];
        if (x.x1 == y.x1 || x.x2 == y.x2 || x.x3 == y.x3) {
          rep.pass = false;
          rep.counterexample = "common neighbour (" + to_string(u) + ") of (" + to_string(x) + ") and (" + to_string(y) + ")";
          break;
        }
      }
  }
  return rep;
}

// ------------------------------------------------------------------ aggregate

nlohmann::ordered_json to_json(const SequenceCensus& c) {
  nlohmann::ordered_json j;
  j["prime"] = c.prime;
  j["per_triple_max"] = c.per_triple_max;
  j["threshold"] = c.threshold;
  j["pass"] = c.pass;
  j["argmax_triple"] = c.triples_checked == 0
                           ? nlohmann::ordered_json(nullptr)
                           : nlohmann::ordered_json::array({to_string(c.argmax_triple[0]), to_string(c.argmax_triple[1]),
                                                             to_string(c.argmax_triple[2])});
  j["distinct_w_max"] = c.distinct_w_max;
  j["triples_checked"] = c.triples_checked;
  j["sequences_total"] = c.sequences_total;
  j["anchor_collisions"] = c.anchor_collisions;
  nlohmann::ordered_json h = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c.histogram) h[std::to_string(k)] = v;
  j["histogram"] = std::move(h);
  j["estimated_work"] = c.estimated_work;
  return j;
}

nlohmann::ordered_json to_json(const CertifyReport& r, bool timings) {
  nlohmann::ordered_json j;
  j["prime"] = r.prime;
  j["pass"] = r.pass;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    if (timings) e["elapsed_ms"] = c.elapsed_ms;
    e["details"] = c.details;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  j["sequence_census"] = r.sequence_census ? to_json(*r.sequence_census) : nlohmann::ordered_json(nullptr);
  return j;
}

CertifyReport certify_all(const Graph& g, const CertifyOptions& options) {
  CertifyReport rep;
  rep.prime = g.p();
  const std::uint64_t p = g.p();

  if (auto work = estimate_sequence_work(g); work > options.budget)
    throw Error(Errc::ScaleRefused, "p=" + std::to_string(p) + ": estimated work " + std::to_string(work) +
                                        " exceeds budget " + std::to_string(options.budget));

  auto timed = [&](const std::string& name, auto&& body) {
    CheckResult r;
    r.name = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
      r.pass = body(r.details);
    } catch (const Error& e) {
      if (e.code() == Errc::ScaleRefused) throw;
      r.pass = false;
      r.details["error"] = e.what();
    }
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rep.checks.push_back(std::move(r));
  };

  timed("lemma3", [&](auto& d) {
    auto l = g.s_size() <= kLemma3MaxIndexSet ? check_lemma3(g.prime()) : check_lemma3_paired(g.prime());
    d["pair_checks"] = l.pair_checks;
    d["condition_checks"] = l.condition_checks;
    d["quadruple_checks"] = l.quadruple_checks;
    if (l.counterexample) d["counterexample"] = *l.counterexample;
    return l.pass;
  });

  timed("lemma1", [&](auto& d) {
    auto l = check_lemma1(g);
    d["pairs_checked"] = l.pairs_checked;
    if (l.counterexample) d["counterexample"] = *l.counterexample;
    return l.pass;
  });

  timed("census", [&](auto& d) {
    auto c = census(g);
    const std::uint64_t expected_n = (p - 5) * p * p / 6;
    d["vertex_count"] = c.vertex_count;
    d["edge_count"] = c.edge_count;
    d["min_degree"] = c.min_degree;
    d["max_degree"] = c.max_degree;
    d["deficient_count"] = c.deficient_count;
    d["edge_lower_bound"] = edge_lower_bound(p);
    d["degree_lower_bound"] = degree_lower_bound(p);
    // Degree law: exactly the |S| p self-compatible vertices lose one neighbour.
    const std::uint64_t s = g.s_size();
    bool law = c.deficient_count == s * p && c.max_degree == s && c.degree_sum == c.vertex_count * s - s * p;
    d["degree_law"] = law;
    return c.vertex_count == expected_n && c.min_degree >= degree_lower_bound(p) &&
           c.edge_count >= edge_lower_bound(p) && law;
  });

  timed("sequence_bound", [&](auto& d) {
    auto c = certify_sequence_bound(g, 30, options.budget);
    d["per_triple_max"] = c.per_triple_max;
    d["distinct_w_max"] = c.distinct_w_max;
    d["triples_checked"] = c.triples_checked;
    rep.sequence_census = c;
    return c.pass && c.distinct_w_max <= c.threshold;
  });

  timed("theta33", [&](auto& d) {
    auto ws = enumerate_theta33(g, options.theta_limit);
    std::uint64_t sum = 0, linear = 0, bad = 0;
    for (const auto& t : ws) {
      sum += t.satisfies_sum;
      linear += t.satisfies_linear;
      if (!t.dichotomy() || !validate_theta(g, t)) ++bad;
    }
    d["witnesses"] = ws.size();
    d["limit"] = options.theta_limit;
    d["sum_branch"] = sum;
    d["linear_branch"] = linear;
    d["violations"] = bad;
    if (ws.empty()) d["note"] = "no theta subgraph at this prime";
    return bad == 0;
  });

  for (auto domain : {ApexDomain::IndexSet, ApexDomain::NonzeroField}) {
    timed(domain == ApexDomain::IndexSet ? "apex" : "apex_extended", [&](auto& d) {
      ApexOptions o;
      o.trials = options.apex_trials;
      o.seed = options.seed;
      o.domain = domain;
      auto a = check_apex_reconstruction(g, o);
      d["applicable"] = a.applicable;
      d["trials"] = a.trials;
      d["skipped"] = a.skipped;
      d["passed"] = a.passed;
      d["mutated"] = a.mutated;
      d["detection_rate"] = a.detection_rate();
      d["r1_detection_rate"] = a.r1_detection_rate();
      if (a.failure) d["failure"] = *a.failure;
      return a.pass;
    });
  }

  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const CheckResult& c) { return c.pass; });
  return rep;
}

}  // namespace ksubdiv
