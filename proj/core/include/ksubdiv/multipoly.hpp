#pragma once

// Sparse multivariate polynomials over the integers.
//
// Terms are kept sorted in descending graded-lexicographic order (total
// degree first, then exponents compared in variable-table order), with no
// zero coefficients. Two polynomials over the same table are equal iff their
// term vectors are equal.
//
// Exponents are packed eight bits per variable; a table holds at most
// kMaxVariables names and any single exponent is capped at 255.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ksubdiv/finite_field.hpp"

namespace ksubdiv {

inline constexpr std::size_t kMaxVariables = 32;
inline constexpr unsigned kMaxExponent = 255;

class VariableTable {
 public:
  explicit VariableTable(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws UnknownVariable.
  std::size_t index(std::string_view name) const;

  friend bool operator==(const VariableTable& a, const VariableTable& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
};

using TablePtr = std::shared_ptr<const VariableTable>;

TablePtr make_table(std::vector<std::string> names);

class Monomial {
 public:
  Monomial() = default;

  unsigned exponent(std::size_t var) const noexcept {
    return static_cast<unsigned>((words_[var / 8] >> (56 - 8 * (var % 8))) & 0xFFu);
  }
  void set_exponent(std::size_t var, unsigned e);
  unsigned degree() const noexcept { return degree_; }
  bool is_one() const noexcept { return degree_ == 0; }

  /// Caller guarantees no per-variable overflow.
  Monomial operator*(const Monomial& o) const noexcept {
    Monomial r;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] + o.words_[i];
    r.degree_ = degree_ + o.degree_;
    return r;
  }
  bool divides(const Monomial& o, std::size_t nvars) const noexcept;
  Monomial quotient(const Monomial& o) const noexcept;  // *this / o, o must divide

  friend bool operator==(const Monomial& a, const Monomial& b) noexcept {
    return a.words_ == b.words_;
  }
  /// Descending graded-lex: true when a sorts before b.
  friend bool grlex_greater(const Monomial& a, const Monomial& b) noexcept {
    if (a.degree_ != b.degree_) return a.degree_ > b.degree_;
    return a.words_ > b.words_;
  }

  std::size_t hash() const noexcept;

 private:
  std::array<std::uint64_t, kMaxVariables / 8> words_{};
  unsigned degree_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

class MPolynomial {
 public:
  using Term = std::pair<Monomial, mpz_class>;

  explicit MPolynomial(TablePtr table) : table_(std::move(table)) {}

  static MPolynomial constant(TablePtr table, const mpz_class& value);
  static MPolynomial variable(TablePtr table, std::string_view name);
  /// Sums duplicate monomials and drops zeros.
  static MPolynomial from_terms(TablePtr table, std::vector<Term> terms);
  /// Accepts integers, table variables, + - * ^ and parentheses. The canonical
  /// output of to_string() parses back to the same polynomial.
  static MPolynomial parse(TablePtr table, std::string_view text);

  const TablePtr& table() const noexcept { return table_; }
  std::span<const Term> terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.front().first.is_one());
  }
  /// Value of a constant polynomial; nullopt otherwise.
  std::optional<mpz_class> constant_value() const;

  /// Max exponent of the variable; -1 for the zero polynomial.
  int degree_in(std::size_t var) const;
  int degree_in(std::string_view var) const { return degree_in(table_->index(var)); }
  int total_degree() const { return terms_.empty() ? -1 : static_cast<int>(terms_.front().first.degree()); }
  bool involves(std::size_t var) const { return degree_in(var) > 0; }

  /// Polynomial multiplying var^k; zero when k exceeds the degree.
  MPolynomial coefficient_of(std::size_t var, unsigned k) const;
  MPolynomial coefficient_of(std::string_view var, unsigned k) const {
    return coefficient_of(table_->index(var), k);
  }
  /// Element k is the coefficient of var^k; size is degree_in(var) + 1 (empty for zero).
  std::vector<MPolynomial> coefficients_in(std::size_t var) const;

  MPolynomial substitute(std::size_t var, const MPolynomial& value) const;
  MPolynomial substitute(std::string_view var, const MPolynomial& value) const {
    return substitute(table_->index(var), value);
  }

  MPolynomial operator-() const;
  MPolynomial& operator+=(const MPolynomial& o);
  MPolynomial& operator-=(const MPolynomial& o);
  MPolynomial& operator*=(const MPolynomial& o);
  MPolynomial& operator*=(const mpz_class& c);
  friend MPolynomial operator+(MPolynomial a, const MPolynomial& b) { return a += b; }
  friend MPolynomial operator-(MPolynomial a, const MPolynomial& b) { return a -= b; }
  friend MPolynomial operator*(const MPolynomial& a, const MPolynomial& b);
  friend MPolynomial operator*(MPolynomial a, const mpz_class& c) { return a *= c; }
  friend MPolynomial operator*(const mpz_class& c, MPolynomial a) { return a *= c; }
  MPolynomial pow(unsigned e) const;

  /// Multiplies by var^k.
  MPolynomial shifted(std::size_t var, unsigned k) const;

  friend bool operator==(const MPolynomial& a, const MPolynomial& b);

  std::string to_string() const;
  friend std::ostream& operator<<(std::ostream& os, const MPolynomial& f) { return os << f.to_string(); }

 private:
  void require_same_table(const MPolynomial& o) const;
  static std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, bool negate_b);

  TablePtr table_;
  std::vector<Term> terms_;
};

using PolyMatrix = std::vector<std::vector<MPolynomial>>;

/// Standard (m+n) x (m+n) Sylvester matrix in `var`: n rows of f's
/// coefficients (ascending, shifted right by one per row) followed by m rows
/// of g's, where m = deg f and n = deg g.
PolyMatrix sylvester_matrix(const MPolynomial& f, const MPolynomial& g, std::size_t var);

inline constexpr std::size_t kCofactorMaxDimension = 12;

/// Laplace expansion with minors memoized by row subset.
MPolynomial determinant_cofactor(const PolyMatrix& m);
/// Fraction-free elimination; every step is an exact polynomial division.
MPolynomial determinant_bareiss(PolyMatrix m);
/// Cofactor expansion up to kCofactorMaxDimension, Bareiss above. On
/// Sylvester matrices with large polynomial entries Bareiss' exact divisions
/// dominate, so the crossover sits well above the sizes that occur here.
MPolynomial determinant(const PolyMatrix& m);

/// Determinant of the Sylvester matrix. Throws ZeroPolynomial if either input
/// is zero and DegreeZeroBoth if neither involves `var`.
MPolynomial resultant(const MPolynomial& f, const MPolynomial& g, std::size_t var);
MPolynomial resultant(const MPolynomial& f, const MPolynomial& g, std::string_view var);

/// q with f = q * g, else nullopt.
std::optional<MPolynomial> try_divide(const MPolynomial& f, const MPolynomial& g);
/// Throws NotDivisible (or DivisionByZero for g = 0).
MPolynomial exact_divide(const MPolynomial& f, const MPolynomial& g);

using Assignment = std::map<std::string, FieldElement, std::less<>>;

/// Value of f mod q. Throws MissingAssignment for any variable of f left
/// unassigned and ModulusMismatch for values from another field.
FieldElement evaluate(const MPolynomial& f, const Assignment& assignment, Prime q);
/// Point indexed by table position; all residues already reduced mod q.
std::uint64_t evaluate_mod(const MPolynomial& f, std::span<const std::uint64_t> point, std::uint64_t q);

/// Schwartz-Zippel comparison at `trials` uniform points of F_q^n.
bool identity_equal(const MPolynomial& f, const MPolynomial& g, int trials, Prime q,
                    std::uint64_t seed);

// Arithmetic in F_q[vars], with polynomials stored as integer polynomials
// whose coefficients lie in [0, q). Used by numeric cross-checks that must not
// share the exact symbolic pipeline.
namespace modq {

MPolynomial reduce(const MPolynomial& f, std::uint64_t q);
/// Substitutes every variable that has a value, then reduces mod q.
MPolynomial specialize(const MPolynomial& f, std::span<const std::optional<std::uint64_t>> values,
                       std::uint64_t q);
MPolynomial multiply(const MPolynomial& a, const MPolynomial& b, std::uint64_t q);
MPolynomial resultant(const MPolynomial& f, const MPolynomial& g, std::size_t var, std::uint64_t q);
/// Exact division in F_q[vars]; throws NotDivisible.
MPolynomial divide(const MPolynomial& f, const MPolynomial& g, std::uint64_t q);

}  // namespace modq

}  // namespace ksubdiv
