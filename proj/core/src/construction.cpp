#include "ksubdiv/construction.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <limits>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "ksubdiv/error.hpp"
#include "ksubdiv/parallel.hpp"

namespace ksubdiv {

std::string to_string(const Vertex& v) {
  return std::to_string(v.x1) + "," + std::to_string(v.x2) + "," + std::to_string(v.x3);
}

Graph::Graph(std::uint64_t p)
    : prime_(validate_construction_prime(p)),
      p_(static_cast<std::uint32_t>(p)),
      index_set_(build_index_set(prime_)) {
  // Vertex residues are stored in 32 bits and products go through 64 bits.
  if (p > std::numeric_limits<std::uint32_t>::max() / 2)
    throw Error(Errc::Overflow, "prime " + std::to_string(p) + " too large for the graph model");
}

std::uint64_t Graph::vertex_count() const noexcept {
  return static_cast<std::uint64_t>(s_size()) * p_ * p_;
}

bool Graph::contains(const Vertex& v) const noexcept {
  return index_set_.contains(v.x1) && v.x2 < p_ && v.x3 < p_;
}

std::uint64_t Graph::index_of(const Vertex& v) const noexcept {
  return (static_cast<std::uint64_t>(v.x1 - 1) * p_ + v.x2) * p_ + v.x3;
}

Vertex Graph::vertex_at(std::uint64_t index) const noexcept {
  Vertex v;
  v.x3 = static_cast<std::uint32_t>(index % p_);
  index /= p_;
  v.x2 = static_cast<std::uint32_t>(index % p_);
  v.x1 = static_cast<std::uint32_t>(index / p_) + 1;
  return v;
}

bool Graph::are_adjacent(const Vertex& u, const Vertex& v) const noexcept {
  if (u == v) return false;
  // x2 + y3 = x1 y1^2 and x3 + y2 = x1^2 y1
  std::uint32_t lhs1 = (u.x2 + v.x3) % p_;
  std::uint32_t lhs2 = (u.x3 + v.x2) % p_;
  return lhs1 == mul(u.x1, mul(v.x1, v.x1)) && lhs2 == mul(mul(u.x1, u.x1), v.x1);
}

std::optional<Vertex> Graph::neighbor_from_first_coord(const Vertex& u, std::uint32_t y1) const noexcept {
  Vertex v{y1, sub(mul(mul(u.x1, u.x1), y1), u.x3), sub(mul(u.x1, mul(y1, y1)), u.x2)};
  if (v == u) return std::nullopt;
  return v;
}

std::vector<Vertex> Graph::neighbors(const Vertex& u) const {
  std::vector<Vertex> out;
  out.reserve(s_size());
  // y1 ascending gives lexicographic order directly.
  for (std::uint32_t y1 = 1; y1 <= s_size(); ++y1)
    if (auto v = neighbor_from_first_coord(u, y1)) out.push_back(*v);
  return out;
}

bool Graph::self_compatible(const Vertex& u) const noexcept {
  return (u.x2 + u.x3) % p_ == mul(u.x1, mul(u.x1, u.x1));
}

std::vector<Vertex> Graph::common_neighbors(const Vertex& u, const Vertex& w) const {
  std::vector<Vertex> out;
  auto try_first = [&](std::uint32_t x1) {
    auto x = neighbor_from_first_coord(u, x1);
    if (x && are_adjacent(*x, w)) out.push_back(*x);
  };
  if (u.x1 != w.x1) {
    // u3 - w3 = x1 (u1^2 - w1^2); u1 + w1 is nonzero on S.
    std::uint64_t den = sub(mul(u.x1, u.x1), mul(w.x1, w.x1));
    if (den == 0) {
      for (std::uint32_t x1 = 1; x1 <= s_size(); ++x1) try_first(x1);
      return out;
    }
    auto x1 = static_cast<std::uint32_t>(mul_mod(sub(u.x3, w.x3), inv_mod(den, p_), p_));
    if (index_set_.contains(x1)) try_first(x1);
    return out;
  }
  for (std::uint32_t x1 = 1; x1 <= s_size(); ++x1) try_first(x1);
  return out;
}

std::uint64_t edge_lower_bound(std::uint64_t p) { return (p - 5) * (p - 11) * p * p / 72; }

std::uint64_t degree_lower_bound(std::uint64_t p) { return (p - 11) / 6; }

namespace {

void merge_census(EdgeCensus& into, const EdgeCensus& part) {
  into.vertex_count += part.vertex_count;
  into.degree_sum += part.degree_sum;
  into.deficient_count += part.deficient_count;
  into.max_degree = std::max(into.max_degree, part.max_degree);
  into.min_degree = std::min(into.min_degree, part.min_degree);
}

EdgeCensus empty_census() {
  EdgeCensus c;
  c.min_degree = std::numeric_limits<std::uint64_t>::max();
  return c;
}

}  // namespace

EdgeCensus census(const Graph& g) {
  const std::uint32_t p = g.p();
  const unsigned workers = worker_count();
  std::vector<EdgeCensus> parts(workers, empty_census());
  // One work item per (x1, x2) row of p vertices.
  parallel_for(static_cast<std::size_t>(g.s_size()) * p, workers, [&](std::size_t row, unsigned w) {
    auto& c = parts[w];
    Vertex u{static_cast<std::uint32_t>(row / p) + 1, static_cast<std::uint32_t>(row % p), 0};
    for (u.x3 = 0; u.x3 < p; ++u.x3) {
      std::uint64_t deg = 0;
      for (std::uint32_t y1 = 1; y1 <= g.s_size(); ++y1)
        if (g.neighbor_from_first_coord(u, y1)) ++deg;
      ++c.vertex_count;
      c.degree_sum += deg;
      if (deg + 1 == g.s_size()) ++c.deficient_count;
      c.min_degree = std::min(c.min_degree, deg);
      c.max_degree = std::max(c.max_degree, deg);
    }
  });
  EdgeCensus total = empty_census();
  for (const auto& part : parts) merge_census(total, part);
  if (total.vertex_count == 0) total.min_degree = 0;
  total.edge_count = total.degree_sum / 2;
  return total;
}

void export_edges(const Graph& g, ExportFormat format, std::ostream& out) {
  const std::uint64_t n = g.vertex_count();
  if (format == ExportFormat::EdgeCsv) {
    out << "# ksubdiv edge-csv version=" << kExportFormatVersion << " p=" << g.p() << "\n";
    out << "u1,u2,u3,v1,v2,v3\n";
    for (std::uint64_t i = 0; i < n; ++i) {
      Vertex u = g.vertex_at(i);
      for (const Vertex& v : g.neighbors(u))
        if (u < v) out << to_string(u) << ',' << to_string(v) << '\n';
    }
  } else {
    nlohmann::ordered_json adjacency = nlohmann::ordered_json::object();
    for (std::uint64_t i = 0; i < n; ++i) {
      Vertex u = g.vertex_at(i);
      auto list = nlohmann::ordered_json::array();
      for (const Vertex& v : g.neighbors(u)) list.push_back(to_string(v));
      adjacency[to_string(u)] = std::move(list);
    }
    nlohmann::ordered_json doc;
    doc["format"] = "ksubdiv-adjacency";
    doc["version"] = kExportFormatVersion;
    doc["p"] = g.p();
    doc["adjacency"] = std::move(adjacency);
    out << doc.dump() << '\n';
  }
  if (!out) throw Error(Errc::Io, "write failed while exporting edges");
}

namespace {

std::uint32_t parse_field(const std::string& s, std::size_t line) {
  std::uint64_t v = 0;
  if (s.empty() || s.size() > 9) throw Error(Errc::ParseError, "line " + std::to_string(line) + ": bad field '" + s + "'");
  for (char ch : s) {
    if (ch < '0' || ch > '9') throw Error(Errc::ParseError, "line " + std::to_string(line) + ": bad field '" + s + "'");
    v = v * 10 + static_cast<std::uint64_t>(ch - '0');
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

EdgeList import_edge_csv(std::istream& in) {
  EdgeList list;
  std::string line;
  std::size_t lineno = 0;
  bool have_p = false, have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto pos = line.find(" p=");
      if (pos != std::string::npos) {
        list.p = std::stoull(line.substr(pos + 3));
        have_p = true;
      }
      continue;
    }
    if (!have_header) {
      if (line != "u1,u2,u3,v1,v2,v3") throw Error(Errc::ParseError, "missing header row");
      have_header = true;
      continue;
    }
    std::array<std::uint32_t, 6> f{};
    std::stringstream ss(line);
    std::string cell;
    std::size_t k = 0;
    while (std::getline(ss, cell, ',')) {
      if (k == 6) throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": too many fields");
      f[k++] = parse_field(cell, lineno);
    }
    if (k != 6) throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected 6 fields");
    list.edges.push_back({Vertex{f[0], f[1], f[2]}, Vertex{f[3], f[4], f[5]}});
  }
  if (!have_p) throw Error(Errc::ParseError, "metadata line with p= not found");
  if (!have_header) throw Error(Errc::ParseError, "missing header row");
  return list;
}

EdgeCensus census_from_edges(const EdgeList& list) {
  Graph g(list.p);
  std::vector<std::uint32_t> degree(g.vertex_count(), 0);
  for (const auto& [u, v] : list.edges) {
    if (!g.contains(u) || !g.contains(v))
      throw Error(Errc::ParseError, "edge endpoint outside the vertex set: " + to_string(u) + " " + to_string(v));
    ++degree[g.index_of(u)];
    ++degree[g.index_of(v)];
  }
  EdgeCensus c = empty_census();
  for (auto d : degree) {
    ++c.vertex_count;
    c.degree_sum += d;
    if (d + 1 == g.s_size()) ++c.deficient_count;
    c.min_degree = std::min<std::uint64_t>(c.min_degree, d);
    c.max_degree = std::max<std::uint64_t>(c.max_degree, d);
  }
  if (c.vertex_count == 0) c.min_degree = 0;
  c.edge_count = list.edges.size();
  return c;
}

}  // namespace ksubdiv
