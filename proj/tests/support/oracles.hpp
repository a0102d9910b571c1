#pragma once

// Brute-force references shared by the unit tests and the acceptance run.
// Nothing here calls into the graph code beyond the Vertex type itself.

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "ksubdiv/certify.hpp"

namespace oracle {

using ksubdiv::Triple;
using ksubdiv::Vertex;

// The two defining equations, straight on integers.
inline bool adjacent(std::uint64_t p, const Vertex& x, const Vertex& y) {
  if (x == y) return false;
  const std::uint64_t lhs1 = (x.x2 + y.x3) % p, rhs1 = (std::uint64_t{x.x1} * y.x1 % p) * y.x1 % p;
  const std::uint64_t lhs2 = (x.x3 + y.x2) % p, rhs2 = (std::uint64_t{x.x1} * x.x1 % p) * y.x1 % p;
  return lhs1 == rhs1 && lhs2 == rhs2;
}

inline std::vector<Vertex> vertices(std::uint64_t p) {
  std::vector<Vertex> out;
  for (std::uint32_t a = 1; a <= (p - 5) / 6; ++a)
    for (std::uint32_t b = 0; b < p; ++b)
      for (std::uint32_t c = 0; c < p; ++c) out.push_back({a, b, c});
  return out;
}

// Neighbour lists by scanning every vertex pair, O(n^2).
struct Graph {
  std::uint64_t p;
  std::vector<Vertex> vs;
  std::vector<std::vector<Vertex>> lists;

  explicit Graph(std::uint64_t prime) : p(prime), vs(vertices(prime)), lists(vs.size()) {
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (const auto& v : vs)
        if (adjacent(p, vs[i], v)) lists[i].push_back(v);
  }
  std::size_t id(const Vertex& v) const { return (static_cast<std::size_t>(v.x1 - 1) * p + v.x2) * p + v.x3; }
  const std::vector<Vertex>& adj(const Vertex& v) const { return lists[id(v)]; }
};

inline std::vector<Vertex> common(const Graph& g, const Vertex& u, const Vertex& w) {
  std::vector<Vertex> out;
  std::set_intersection(g.adj(u).begin(), g.adj(u).end(), g.adj(w).begin(), g.adj(w).end(),
                        std::back_inserter(out));
  return out;
}

using TripleCounts = std::map<Triple, std::uint64_t>;

// Every (x, y, z, w) with w ranging over all of V, attributed to the sorted
// anchor triple exactly once by requiring a < b < c in role order.
inline TripleCounts sequences(const Graph& g) {
  TripleCounts out;
  for (const auto& w : g.vs) {
    const auto& nw = g.adj(w);
    for (const auto& x : nw)
      for (const auto& y : nw)
        for (const auto& z : nw) {
          if (x == y || x == z || y == z) continue;
          for (const auto& a : g.adj(x))
            for (const auto& b : g.adj(y))
              for (const auto& c : g.adj(z)) {
                if (a == w || b == w || c == w) continue;
                if (!(a < b && b < c)) continue;
                ++out[Triple{a, b, c}];
              }
        }
  }
  return out;
}

struct Theta {
  Vertex d, a, b, c, x, y, z, w;
  friend auto operator<=>(const Theta&, const Theta&) = default;
};

// All paths d-a-x-w grouped by their far end, then three with a < b < c.
inline std::vector<Theta> thetas(const Graph& g) {
  std::vector<Theta> out;
  for (const auto& d : g.vs) {
    std::map<Vertex, std::vector<std::pair<Vertex, Vertex>>> by_end;
    for (const auto& a : g.adj(d))
      for (const auto& x : g.adj(a))
        for (const auto& w : g.adj(x)) by_end[w].emplace_back(a, x);
    for (const auto& [w, paths] : by_end)
      for (const auto& [a, x] : paths)
        for (const auto& [b, y] : paths)
          for (const auto& [c, z] : paths) {
            if (!(a < b && b < c)) continue;
            const Vertex all[] = {d, a, b, c, x, y, z, w};
            bool distinct = true;
            for (int i = 0; i < 8 && distinct; ++i)
              for (int j = i + 1; j < 8; ++j)
                if (all[i] == all[j]) distinct = false;
            if (distinct) out.push_back({d, a, b, c, x, y, z, w});
          }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Dense univariate polynomials over F_q, ascending coefficients.
using Dense = std::vector<std::uint64_t>;

inline void trim(Dense& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint64_t inverse(std::uint64_t a, std::uint64_t q) {
  // Fermat, to stay independent of the library's extended Euclid
  std::uint64_t r = 1, e = q - 2;
  unsigned __int128 b = a % q;
  while (e) {
    if (e & 1) r = static_cast<std::uint64_t>(r * b % q);
    b = b * b % q;
    e >>= 1;
  }
  return r;
}

inline Dense remainder(Dense a, const Dense& b, std::uint64_t q) {
  trim(a);
  const std::uint64_t inv = inverse(b.back(), q);
  while (a.size() >= b.size()) {
    const std::uint64_t f = static_cast<std::uint64_t>(static_cast<unsigned __int128>(a.back()) * inv % q);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i)
      a[shift + i] = (a[shift + i] + q - static_cast<std::uint64_t>(static_cast<unsigned __int128>(f) * b[i] % q)) % q;
    trim(a);
  }
  return a;
}

inline int gcd_degree(Dense a, Dense b, std::uint64_t q) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Dense r = remainder(a, b, q);
    a = std::move(b);
    b = std::move(r);
  }
  return static_cast<int>(a.size()) - 1;
}

inline Dense multiply(const Dense& a, const Dense& b, std::uint64_t q) {
  Dense r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + static_cast<std::uint64_t>(static_cast<unsigned __int128>(a[i]) * b[j] % q)) % q;
  return r;
}

}  // namespace oracle
