#pragma once

// Registry of the resultant/factorization claims behind the sequence bound.
// Every claim is recomputed from the adjacency-derived systems with the
// multipoly engine and checked over the integers, up to an integer unit.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ksubdiv/multipoly.hpp"

namespace ksubdiv {

/// One symbol table for every system: a,b,c,d,w,x,y,z with indices 1..3.
const TablePtr& identity_table();

enum class BaseCase {
  S31A1B1,       // b1 -> a1
  S31A1B1C1,     // b1 -> a1, c1 -> a1
  S32A2B2,       // b2 -> a2
  S33Generic,    // the six equations as they stand
  Lemma2Hexagon, // the two hexagon sums plus g1, g2, g3
  Lemma5Sub,     // w1 -> a1 + b1 + c1
  Lemma6Sub,     // generic plus f7
};

/// Accepts "s31_a1b1", "s31_a1b1c1", "s32_a2b2", "s33_generic",
/// "lemma2_hexagon", "lemma5_sub", "lemma6_sub". Throws UnknownCase.
BaseCase parse_base_case(std::string_view name);
std::string_view to_string(BaseCase c);

struct NamedPolynomial {
  std::string name;
  MPolynomial poly;
};

struct BaseSystem {
  BaseCase which;
  std::vector<NamedPolynomial> polys;

  /// Throws UnknownVariable-style lookup failure as UnknownCase.
  const MPolynomial& at(std::string_view name) const;
};

/// With mutate_f1 the sign of the leading term of f1 is flipped; used to show
/// the catalog is sensitive to the input equations.
BaseSystem build_base_system(BaseCase which, bool mutate_f1 = false);

struct DerivationEntry {
  std::string name;
  int sign = 1;  // claimed = sign * recomputed
};

/// Rebuilds f1..f6 and the two hexagon sums from adjacency residuals and the
/// hexagon difference identity. Throws DerivationMismatch on the first failure.
std::vector<DerivationEntry> verify_elimination_derivation();

enum class CheckMode { Exact, Probabilistic };

std::string_view to_string(CheckMode m);
/// "exact" or "probabilistic"; throws ParseError.
CheckMode parse_check_mode(std::string_view s);

struct CatalogOptions {
  CheckMode mode = CheckMode::Exact;
  std::uint64_t seed = 1;
  int trials = 20;
  bool mutate_f1 = false;
};

struct IdentityReport {
  std::string id;
  std::string locator;
  bool pass = false;
  CheckMode mode = CheckMode::Exact;
  std::vector<std::pair<std::string, mpz_class>> units;
  std::vector<std::pair<std::string, int>> degrees;
  std::vector<std::pair<std::string, std::string>> notes;
  std::string failure;
  double elapsed_ms = 0.0;
};

/// "I-1" ... "I-25" in order.
const std::vector<std::string>& catalog_ids();

/// Shares intermediates between checks (g4 feeds several claims, etc.).
/// Not thread-safe; use one catalog per thread.
class IdentityCatalog {
 public:
  explicit IdentityCatalog(CatalogOptions options = {});
  ~IdentityCatalog();
  IdentityCatalog(const IdentityCatalog&) = delete;
  IdentityCatalog& operator=(const IdentityCatalog&) = delete;

  /// Throws UnknownCheck for an unregistered id; claim failures are reported.
  IdentityReport run(std::string_view id);
  std::vector<IdentityReport> run_all();

  const CatalogOptions& options() const noexcept { return options_; }

  struct Workspace;  // opaque

 private:
  CatalogOptions options_;
  std::unique_ptr<Workspace> ws_;
};

IdentityReport run_check(std::string_view id, const CatalogOptions& options = {});
std::vector<IdentityReport> run_catalog(const CatalogOptions& options = {});

struct CrossCheckReport {
  std::string id;
  int points = 0;
  int agreements = 0;
  bool pass = false;
};

/// Evaluates the left side of I-1, I-9 or I-17 through resultants over F_q
/// (q = 2^61 - 1) at random specializations and compares with the right
/// side. Throws UnknownCheck for other ids.
CrossCheckReport numeric_crosscheck(std::string_view id, int points, std::uint64_t seed);

/// The three relations that pin down the apex vertex, exactly as printed.
struct ApexRelations {
  MPolynomial r1, r2, r3;
};
const ApexRelations& apex_relations();

}  // namespace ksubdiv
