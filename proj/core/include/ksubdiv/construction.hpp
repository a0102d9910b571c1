#pragma once

// The graph G_p on S x F_p x F_p: x ~ y iff x != y and
//   x2 + y3 = x1 * y1^2,   x3 + y2 = x1^2 * y1   (mod p).
// Adjacency is evaluated on demand; nothing is stored.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ksubdiv/finite_field.hpp"

namespace ksubdiv {

/// Canonical residues of a vertex. Members of V have x1 in S; the apex check
/// also builds triples whose first coordinate lies outside S.
struct Vertex {
  std::uint32_t x1 = 0;
  std::uint32_t x2 = 0;
  std::uint32_t x3 = 0;

  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

std::string to_string(const Vertex& v);

class Graph {
 public:
  /// Validates p as a construction prime.
  explicit Graph(std::uint64_t p);

  Prime prime() const noexcept { return prime_; }
  std::uint32_t p() const noexcept { return p_; }
  const IndexSet& index_set() const noexcept { return index_set_; }
  std::uint32_t s_size() const noexcept { return static_cast<std::uint32_t>(index_set_.size()); }

  /// (p - 5) p^2 / 6.
  std::uint64_t vertex_count() const noexcept;
  bool contains(const Vertex& v) const noexcept;
  /// Position in lexicographic order on (x1, x2, x3).
  std::uint64_t index_of(const Vertex& v) const noexcept;
  Vertex vertex_at(std::uint64_t index) const noexcept;

  bool are_adjacent(const Vertex& u, const Vertex& v) const noexcept;
  /// The unique neighbor of u with first coordinate y1, or nullopt when that
  /// point is u itself.
  std::optional<Vertex> neighbor_from_first_coord(const Vertex& u, std::uint32_t y1) const noexcept;
  /// Sorted ascending; |S| or |S| - 1 entries.
  std::vector<Vertex> neighbors(const Vertex& u) const;
  /// x2 + x3 = x1^3, i.e. u would be its own neighbor.
  bool self_compatible(const Vertex& u) const noexcept;
  /// All vertices adjacent to both u and w (u != w), sorted.
  std::vector<Vertex> common_neighbors(const Vertex& u, const Vertex& w) const;

 private:
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept { return a >= b ? a - b : a + p_ - b; }

  Prime prime_;
  std::uint32_t p_;
  IndexSet index_set_;
};

struct EdgeCensus {
  std::uint64_t vertex_count = 0;
  std::uint64_t edge_count = 0;
  std::uint64_t min_degree = 0;
  std::uint64_t max_degree = 0;
  std::uint64_t deficient_count = 0;  // vertices of degree |S| - 1
  std::uint64_t degree_sum = 0;
};

/// (p - 5)(p - 11) p^2 / 72.
std::uint64_t edge_lower_bound(std::uint64_t p);
/// (p - 11) / 6.
std::uint64_t degree_lower_bound(std::uint64_t p);

/// Enumerates every neighbor list once; parallel over x1 slices.
EdgeCensus census(const Graph& g);

enum class ExportFormat { EdgeCsv, AdjacencyJson };

inline constexpr int kExportFormatVersion = 1;

/// Edges with u < v, vertices in lexicographic order.
///
/// edge-csv:       "# ksubdiv edge-csv version=1 p=<p>", then the header
///                 "u1,u2,u3,v1,v2,v3" and one row per edge.
/// adjacency-json: {"format":"ksubdiv-adjacency","version":1,"p":<p>,
///                  "adjacency":{"x1,x2,x3":["y1,y2,y3",...],...}}
void export_edges(const Graph& g, ExportFormat format, std::ostream& out);

struct EdgeList {
  std::uint64_t p = 0;
  std::vector<std::pair<Vertex, Vertex>> edges;
};

/// Reads the edge-csv format back. Throws ParseError.
EdgeList import_edge_csv(std::istream& in);
/// Census of an explicit edge list over the full vertex set of G_p.
EdgeCensus census_from_edges(const EdgeList& list);

}  // namespace ksubdiv
