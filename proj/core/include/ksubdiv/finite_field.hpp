#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ksubdiv {

// Modular helpers for moduli below 2^63. Inputs must already be reduced.
inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  std::uint64_t s = a + b;
  return s >= m ? s - m : s;
}
inline std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return a >= b ? a - b : a + m - b;
}
inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
// Extended Euclid; throws DivisionByZero when a == 0 (mod m).
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m);
std::uint64_t reduce_signed(std::int64_t v, std::uint64_t m);

// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/// A validated prime modulus.
class Prime {
 public:
  /// Throws NotPrime unless `value` is prime.
  static Prime checked(std::uint64_t value);

  std::uint64_t value() const noexcept { return value_; }
  friend bool operator==(const Prime&, const Prime&) = default;

 private:
  explicit Prime(std::uint64_t v) : value_(v) {}
  std::uint64_t value_;
};

/// Accepts p iff p is prime, p = 5 (mod 6) and p > 11. Checks run in that
/// order, so the error names the first failed condition.
Prime validate_construction_prime(std::uint64_t p);

/// Element of F_p held as its canonical residue in [0, p).
class FieldElement {
 public:
  FieldElement(std::uint64_t value, Prime p) : residue_(value % p.value()), modulus_(p.value()) {}
  static FieldElement from_signed(std::int64_t value, Prime p);

  std::uint64_t residue() const noexcept { return residue_; }
  std::uint64_t modulus() const noexcept { return modulus_; }
  bool is_zero() const noexcept { return residue_ == 0; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement inverse() const;
  FieldElement pow(std::uint64_t exp) const;

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  FieldElement(std::uint64_t r, std::uint64_t m, int) : residue_(r), modulus_(m) {}
  void require_same(const FieldElement& o) const;

  std::uint64_t residue_;
  std::uint64_t modulus_;
};

/// S = {1, ..., (p-5)/6} as canonical residues.
struct IndexSet {
  Prime prime;
  std::vector<FieldElement> elements;

  std::size_t size() const noexcept { return elements.size(); }
  std::uint64_t max_value() const noexcept { return elements.size(); }
  bool contains(std::uint64_t residue) const noexcept {
    return residue >= 1 && residue <= elements.size();
  }
};

IndexSet build_index_set(Prime p);

struct Lemma3Report {
  bool pass = true;
  std::uint64_t pair_checks = 0;       // ordered pairs (x, y) in S^2
  std::uint64_t condition_checks = 0;  // three conditions per pair
  std::uint64_t quadruple_checks = 0;  // ordered quadruples in S^4
  std::optional<std::string> counterexample;
};

inline constexpr std::size_t kLemma3MaxIndexSet = 64;

/// Exhaustive check that x+y, x+5y, x^2+xy+y^2 and x+y+z+t never vanish on S.
/// Refuses with IndexSetTooLarge when |S| > kLemma3MaxIndexSet.
Lemma3Report check_lemma3(Prime p);

/// Same verdict without the size cap: quadruple sums are split as two pair
/// sums over a residue table, O(|S|^2 + p). quadruple_checks reports the
/// |S|^4 quadruples covered.
Lemma3Report check_lemma3_paired(Prime p);

}  // namespace ksubdiv
