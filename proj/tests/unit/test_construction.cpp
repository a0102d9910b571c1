#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "ksubdiv/construction.hpp"
#include "ksubdiv/error.hpp"
#include "oracles.hpp"

using namespace ksubdiv;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::Io;
}

using oracle::adjacent;
using oracle::vertices;

std::vector<std::vector<Vertex>> oracle_lists(std::uint64_t p, const std::vector<Vertex>& vs) {
  std::vector<std::vector<Vertex>> adj(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (const auto& v : vs)
      if (adjacent(p, vs[i], v)) adj[i].push_back(v);
  return adj;
}

std::vector<Vertex> intersect(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
  std::vector<Vertex> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

TEST(Graph, RejectsBadPrimes) {
  EXPECT_EQ(code_of([] { Graph g(13); }), Errc::WrongResidueClass);
  EXPECT_EQ(code_of([] { Graph g(11); }), Errc::TooSmall);
  EXPECT_EQ(code_of([] { Graph g(65); }), Errc::NotPrime);
}

TEST(Graph, IndexingIsABijection) {
  Graph g(23);
  auto vs = vertices(23);
  ASSERT_EQ(vs.size(), g.vertex_count());
  for (std::uint64_t i = 0; i < vs.size(); ++i) {
    ASSERT_EQ(g.vertex_at(i), vs[i]);
    ASSERT_EQ(g.index_of(vs[i]), i);
    ASSERT_TRUE(g.contains(vs[i]));
  }
  EXPECT_FALSE(g.contains({0, 0, 0}));
  EXPECT_FALSE(g.contains({4, 0, 0}));
  EXPECT_FALSE(g.contains({1, 23, 0}));
}

TEST(Adjacency, Examples) {
  Graph g(17);
  EXPECT_TRUE(g.are_adjacent({1, 0, 0}, {2, 2, 4}));
  EXPECT_FALSE(g.are_adjacent({1, 0, 0}, {2, 2, 5}));
  EXPECT_FALSE(g.are_adjacent({1, 0, 0}, {1, 0, 0}));
}

TEST(Adjacency, NeighborFromFirstCoordinate) {
  Graph g17(17), g23(23);
  EXPECT_EQ(g17.neighbor_from_first_coord({1, 0, 0}, 2), (Vertex{2, 2, 4}));
  EXPECT_EQ(g17.neighbor_from_first_coord({1, 16, 2}, 1), std::nullopt);
  EXPECT_EQ(g23.neighbor_from_first_coord({3, 0, 0}, 1), (Vertex{1, 9, 3}));
}

TEST(Adjacency, ExhaustiveAgainstEquationsAtSeventeen) {
  Graph g(17);
  auto vs = vertices(17);
  for (const auto& u : vs)
    for (const auto& v : vs) {
      ASSERT_EQ(g.are_adjacent(u, v), adjacent(17, u, v)) << to_string(u) << " " << to_string(v);
      ASSERT_EQ(g.are_adjacent(u, v), g.are_adjacent(v, u));
    }
}

TEST(Adjacency, SymmetricOnRandomPairs) {
  std::mt19937_64 rng(1);
  for (std::uint64_t p : {29ULL, 101ULL, 1013ULL}) {
    Graph g(p);
    std::uniform_int_distribution<std::uint64_t> pick(0, g.vertex_count() - 1);
    std::uniform_int_distribution<std::uint32_t> first(1, g.s_size());
    for (int i = 0; i < 40000; ++i) {
      Vertex u = g.vertex_at(pick(rng));
      // Half the pairs are true edges, otherwise nearly every pair is a non-edge.
      Vertex v = g.vertex_at(pick(rng));
      if (i % 2 == 0) {
        if (auto n = g.neighbor_from_first_coord(u, first(rng))) v = *n;
      }
      ASSERT_EQ(g.are_adjacent(u, v), g.are_adjacent(v, u));
      ASSERT_EQ(g.are_adjacent(u, v), adjacent(p, u, v));
    }
  }
}

TEST(Neighbors, Examples) {
  Graph g(17);
  EXPECT_EQ(g.neighbors({1, 0, 0}).size(), 2u);
  EXPECT_EQ(g.neighbors({1, 16, 2}).size(), 1u);
  EXPECT_TRUE(g.self_compatible({1, 16, 2}));
  EXPECT_FALSE(g.self_compatible({1, 0, 0}));
}

TEST(Neighbors, ExhaustiveAgainstScanAtSeventeen) {
  Graph g(17);
  auto vs = vertices(17);
  auto adj = oracle_lists(17, vs);
  for (std::size_t i = 0; i < vs.size(); ++i) ASSERT_EQ(g.neighbors(vs[i]), adj[i]) << to_string(vs[i]);
}

TEST(Neighbors, DegreeLawAtTwentyNine) {
  Graph g(29);
  for (std::uint64_t i = 0; i < g.vertex_count(); ++i) {
    Vertex u = g.vertex_at(i);
    auto d = g.neighbors(u).size();
    ASSERT_GE(d, degree_lower_bound(29));
    ASSERT_EQ(d, g.s_size() - (g.self_compatible(u) ? 1u : 0u));
  }
}

TEST(CommonNeighbors, ExampleAgainstBruteForce) {
  Graph g(17);
  Vertex u{1, 0, 0}, w{1, 1, 1};
  std::vector<Vertex> brute;
  for (const auto& x : vertices(17))
    if (adjacent(17, u, x) && adjacent(17, x, w)) brute.push_back(x);
  EXPECT_EQ(g.common_neighbors(u, w), brute);
}

TEST(CommonNeighbors, ExhaustiveAtSeventeen) {
  Graph g(17);
  auto vs = vertices(17);
  auto adj = oracle_lists(17, vs);
  std::uint64_t nonempty = 0;
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j) {
      if (i == j) continue;
      auto expect = intersect(adj[i], adj[j]);
      nonempty += !expect.empty();
      ASSERT_EQ(g.common_neighbors(vs[i], vs[j]), expect) << to_string(vs[i]) << " " << to_string(vs[j]);
    }
  EXPECT_GT(nonempty, 0u);
}

TEST(CommonNeighbors, RandomPairsAtTwentyThree) {
  Graph g(23);
  auto vs = vertices(23);
  auto adj = oracle_lists(23, vs);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> pick(0, vs.size() - 1);
  int nonempty = 0;
  for (int i = 0; i < 1000; ++i) {
    std::size_t a = pick(rng), b = pick(rng);
    if (i % 2 == 0 && !adj[a].empty()) {
      // force distance two half the time
      const auto& mid = adj[a][pick(rng) % adj[a].size()];
      const auto& far = adj[g.index_of(mid)];
      b = g.index_of(far[pick(rng) % far.size()]);
    }
    if (a == b) continue;
    auto expect = intersect(adj[a], adj[b]);
    nonempty += !expect.empty();
    ASSERT_EQ(g.common_neighbors(vs[a], vs[b]), expect);
  }
  EXPECT_GT(nonempty, 300);
}

TEST(CommonNeighbors, AdjacentPairCanHaveNone) {
  Graph g(17);
  Vertex u{1, 0, 0};
  Vertex v = g.neighbors(u).front();
  // No triangles through this edge: checked against the oracle, not assumed.
  std::vector<Vertex> brute;
  for (const auto& x : vertices(17))
    if (adjacent(17, u, x) && adjacent(17, x, v)) brute.push_back(x);
  EXPECT_EQ(g.common_neighbors(u, v), brute);
}

TEST(Census, SeventeenValues) {
  auto c = census(Graph(17));
  EXPECT_EQ(c.vertex_count, 578u);
  EXPECT_EQ(c.edge_count, 561u);
  EXPECT_GE(c.edge_count, 289u);
  EXPECT_EQ(edge_lower_bound(17), 289u);
  EXPECT_EQ(c.degree_sum, 2 * c.edge_count);
  EXPECT_EQ(c.deficient_count, 34u);
}

TEST(Census, MatchesClosedFormAndBruteCountUpToHundredAndOne) {
  for (std::uint64_t p = 17; p <= 101; p += 6) {
    if (!is_prime(p)) continue;
    Graph g(p);
    auto c = census(g);
    const std::uint64_t s = (p - 5) / 6, n = (p - 5) * p * p / 6;
    EXPECT_EQ(c.vertex_count, n) << p;
    // Every vertex has |S| candidates; exactly the s*p self-compatible ones lose one.
    EXPECT_EQ(c.edge_count, (n * s - s * p) / 2) << p;
    EXPECT_GE(c.edge_count, edge_lower_bound(p)) << p;
    EXPECT_GE(c.min_degree, degree_lower_bound(p)) << p;
    EXPECT_EQ(c.degree_sum, 2 * c.edge_count);
  }
}

TEST(Census, EdgeCountAgainstFullPairScanAtSeventeen) {
  auto vs = vertices(17);
  std::uint64_t edges = 0;
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j) edges += adjacent(17, vs[i], vs[j]);
  EXPECT_EQ(census(Graph(17)).edge_count, edges);
}

TEST(Export, CsvHasOneRowPerEdgeAndRoundTrips) {
  Graph g(17);
  std::stringstream ss;
  export_edges(g, ExportFormat::EdgeCsv, ss);
  std::string text = ss.str();
  std::size_t lines = std::count(text.begin(), text.end(), '\n');
  EXPECT_EQ(lines, 561u + 2);
  EXPECT_EQ(text.rfind("# ksubdiv edge-csv version=1 p=17\nu1,u2,u3,v1,v2,v3\n", 0), 0u);
  auto list = import_edge_csv(ss);
  EXPECT_EQ(list.p, 17u);
  ASSERT_EQ(list.edges.size(), 561u);
  for (const auto& [u, v] : list.edges) ASSERT_TRUE(adjacent(17, u, v));
  auto a = census_from_edges(list), b = census(g);
  EXPECT_EQ(a.edge_count, b.edge_count);
  EXPECT_EQ(a.min_degree, b.min_degree);
  EXPECT_EQ(a.max_degree, b.max_degree);
  EXPECT_EQ(a.deficient_count, b.deficient_count);
}

TEST(Export, JsonAdjacencyMatchesNeighbors) {
  Graph g(17);
  std::stringstream ss;
  export_edges(g, ExportFormat::AdjacencyJson, ss);
  auto doc = nlohmann::json::parse(ss.str());
  EXPECT_EQ(doc["format"], "ksubdiv-adjacency");
  EXPECT_EQ(doc["version"], 1);
  EXPECT_EQ(doc["p"], 17);
  ASSERT_EQ(doc["adjacency"].size(), 578u);
  for (std::uint64_t i = 0; i < g.vertex_count(); ++i) {
    Vertex u = g.vertex_at(i);
    std::vector<std::string> expect;
    for (const auto& v : g.neighbors(u)) expect.push_back(to_string(v));
    ASSERT_EQ(doc["adjacency"][to_string(u)].get<std::vector<std::string>>(), expect);
  }
}

TEST(Export, ExportIsDeterministic) {
  Graph g(23);
  std::stringstream a, b;
  export_edges(g, ExportFormat::EdgeCsv, a);
  export_edges(g, ExportFormat::EdgeCsv, b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Import, RejectsMalformedInput) {
  auto parse = [](const std::string& s) {
    std::stringstream ss(s);
    return import_edge_csv(ss);
  };
  EXPECT_EQ(code_of([&] { parse("u1,u2,u3,v1,v2,v3\n1,0,0,2,2,4\n"); }), Errc::ParseError);
  EXPECT_EQ(code_of([&] { parse("# p=17\n1,0,0,2,2,4\n"); }), Errc::ParseError);
  EXPECT_EQ(code_of([&] { parse("# p=17\nu1,u2,u3,v1,v2,v3\n1,0,0,2,2\n"); }), Errc::ParseError);
  EXPECT_EQ(code_of([&] { parse("# p=17\nu1,u2,u3,v1,v2,v3\n1,0,x,2,2,4\n"); }), Errc::ParseError);
  auto bad = parse("# p=17\nu1,u2,u3,v1,v2,v3\n9,0,0,2,2,4\n");
  EXPECT_EQ(code_of([&] { census_from_edges(bad); }), Errc::ParseError);
}
