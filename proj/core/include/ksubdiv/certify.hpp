#pragma once

// Finite-instance certification on G_p: sequence counts per anchor triple,
// theta_{3,3} witnesses against the hexagon dichotomy, and the apex
// reconstruction from r1 = r2 = r3 = 0.

#include <array>
#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ksubdiv/construction.hpp"

namespace ksubdiv {

/// (x, y, z, w) with ax, xw, by, yw, cz, zw edges.
struct Sequence {
  Vertex x, y, z, w;
  friend auto operator<=>(const Sequence&, const Sequence&) = default;
};

struct SequenceCount {
  std::uint64_t count = 0;
  std::uint64_t distinct_w = 0;
  std::uint64_t anchor_collisions = 0;  // sequences with a midpoint in {a, b, c}
  std::vector<Sequence> witnesses;      // sorted
};

/// Sequences for the anchors a, b, c (pairwise distinct). x, y, z, w are
/// pairwise distinct and w is never one of the anchors. w ranges over the
/// second neighbourhood of a only; midpoints come from common_neighbors.
SequenceCount count_sequences(const Graph& g, const Vertex& a, const Vertex& b, const Vertex& c);

using Triple = std::array<Vertex, 3>;

struct SequenceCensus {
  std::uint64_t prime = 0;
  std::uint64_t per_triple_max = 0;
  Triple argmax_triple{};          // lexicographically first triple attaining the max
  std::uint64_t distinct_w_max = 0;
  std::uint64_t triples_checked = 0;  // unordered triples with nonzero count
  std::uint64_t sequences_total = 0;  // summed over unordered triples
  std::uint64_t anchor_collisions = 0;
  std::map<std::uint64_t, std::uint64_t> histogram;  // count -> triples
  std::uint64_t estimated_work = 0;
  std::uint64_t threshold = 29;
  bool pass = false;
  std::vector<std::pair<Triple, std::uint64_t>> per_triple;  // only when collected; sorted
};

inline constexpr std::uint64_t kDefaultBudget = 1'000'000'000ULL;

/// Upper estimate of sum over w of C(|anchors(w)|, 3) with |anchors(w)| <= |S|^2.
std::uint64_t estimate_sequence_work(const Graph& g);

/// Exhaustive over every unordered anchor triple with a nonzero count; passes
/// iff the per-triple maximum is at most t - 1. Throws ScaleRefused when the
/// work estimate exceeds `budget`.
SequenceCensus certify_sequence_bound(const Graph& g, std::uint64_t t = 30, std::uint64_t budget = kDefaultBudget,
                                      bool collect_triples = false);

struct ThetaWitness {
  Vertex d, a, b, c, x, y, z, w;
  bool satisfies_sum = false;     // w1 = a1 + b1 + c1
  bool satisfies_linear = false;  // a1y1 - a1z1 - b1x1 + b1z1 + c1x1 - c1y1 = 0

  bool dichotomy() const noexcept { return satisfies_sum || satisfies_linear; }
};

/// All nine edges present and the eight vertices distinct.
bool validate_theta(const Graph& g, const ThetaWitness& t);
/// Fills the two dichotomy flags from the coordinates.
void evaluate_dichotomy(const Graph& g, ThetaWitness& t);

/// Up to `limit` witnesses in enumeration order (d ascending, then a < b < c,
/// then w, then midpoints), each with its dichotomy evaluated.
std::vector<ThetaWitness> enumerate_theta33(const Graph& g, std::size_t limit);

enum class ApexDomain { IndexSet, NonzeroField };

struct ApexOptions {
  std::uint64_t trials = 500;
  std::uint64_t seed = 1;
  ApexDomain domain = ApexDomain::IndexSet;  // where d1 is drawn from
  bool mutate = true;                        // also run the b3 + 1 perturbation
};

struct ApexReport {
  std::uint64_t trials = 0;       // completed non-degenerate samples
  std::uint64_t skipped = 0;      // degenerate draws (repeated first coordinates, anchor = d)
  std::uint64_t passed = 0;
  std::uint64_t mutated = 0;
  std::uint64_t mutation_r1_nonzero = 0;
  std::uint64_t mutation_detected = 0;  // any of r1, r2, r3 nonzero
  bool applicable = true;               // false when |S| < 3
  bool pass = false;
  std::optional<std::string> failure;

  double detection_rate() const noexcept {
    return mutated == 0 ? 0.0 : static_cast<double>(mutation_detected) / static_cast<double>(mutated);
  }
  double r1_detection_rate() const noexcept {
    return mutated == 0 ? 0.0 : static_cast<double>(mutation_r1_nonzero) / static_cast<double>(mutated);
  }
};

inline constexpr double kRequiredDetectionRate = 0.95;

/// Samples d and distinct a1, b1, c1 in S, takes a, b, c as the neighbours of
/// d with those first coordinates, then checks r1 = r2 = r3 = 0 and that the
/// apex formulas give back d. Throws ReconstructionMismatch with the failing
/// sample.
ApexReport check_apex_reconstruction(const Graph& g, const ApexOptions& options = {});

struct Lemma1Report {
  std::uint64_t pairs_checked = 0;
  bool pass = true;
  std::optional<std::string> counterexample;
};

/// For every vertex and every pair of its distinct neighbours, the two
/// neighbours differ in all three coordinates.
Lemma1Report check_lemma1(const Graph& g);

struct CertifyOptions {
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = 1;
  std::size_t theta_limit = 10'000;
  std::uint64_t apex_trials = 500;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double elapsed_ms = 0.0;
  nlohmann::ordered_json details;
};

struct CertifyReport {
  std::uint64_t prime = 0;
  std::vector<CheckResult> checks;
  std::optional<SequenceCensus> sequence_census;
  bool pass = false;
};

/// Runs every check; a ScaleRefused from the sequence census is propagated,
/// any other failure is recorded in its check.
CertifyReport certify_all(const Graph& g, const CertifyOptions& options = {});

nlohmann::ordered_json to_json(const SequenceCensus& c);
/// Without timing fields when `timings` is false, for byte-stable output.
nlohmann::ordered_json to_json(const CertifyReport& r, bool timings = true);

}  // namespace ksubdiv
