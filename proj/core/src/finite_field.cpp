#include "ksubdiv/finite_field.hpp"

#include <array>
#include <sstream>

#include "ksubdiv/error.hpp"

namespace ksubdiv {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  a %= m;
  if (a == 0) throw Error(Errc::DivisionByZero, "inverse of 0 mod " + std::to_string(m));
  __int128 old_r = a, r = m;
  __int128 old_s = 1, s = 0;
  while (r != 0) {
    __int128 q = old_r / r;
    __int128 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw Error(Errc::DivisionByZero, "non-invertible residue");
  __int128 res = old_s % static_cast<__int128>(m);
  if (res < 0) res += m;
  return static_cast<std::uint64_t>(res);
}

std::uint64_t reduce_signed(std::int64_t v, std::uint64_t m) {
  __int128 r = static_cast<__int128>(v) % static_cast<__int128>(m);
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  constexpr std::array<std::uint64_t, 12> bases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t b : bases) {
    if (n % b == 0) return n == b;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t b : bases) {
    std::uint64_t x = pow_mod(b, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Prime Prime::checked(std::uint64_t value) {
  if (!is_prime(value)) throw Error(Errc::NotPrime, std::to_string(value) + " is not prime");
  return Prime(value);
}

Prime validate_construction_prime(std::uint64_t p) {
  Prime prime = Prime::checked(p);
  if (p % 6 != 5) {
    throw Error(Errc::WrongResidueClass,
                std::to_string(p) + " = " + std::to_string(p % 6) + " (mod 6), need 5");
  }
  if (p <= 11) throw Error(Errc::TooSmall, std::to_string(p) + " <= 11");
  return prime;
}

FieldElement FieldElement::from_signed(std::int64_t value, Prime p) {
  return FieldElement(reduce_signed(value, p.value()), p.value(), 0);
}

void FieldElement::require_same(const FieldElement& o) const {
  if (modulus_ != o.modulus_) {
    throw Error(Errc::ModulusMismatch,
                std::to_string(modulus_) + " vs " + std::to_string(o.modulus_));
  }
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  require_same(o);
  return {add_mod(residue_, o.residue_, modulus_), modulus_, 0};
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  require_same(o);
  return {sub_mod(residue_, o.residue_, modulus_), modulus_, 0};
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  require_same(o);
  return {mul_mod(residue_, o.residue_, modulus_), modulus_, 0};
}

FieldElement FieldElement::operator-() const {
  return {residue_ == 0 ? 0 : modulus_ - residue_, modulus_, 0};
}

FieldElement FieldElement::inverse() const { return {inv_mod(residue_, modulus_), modulus_, 0}; }

FieldElement FieldElement::pow(std::uint64_t exp) const {
  return {pow_mod(residue_, exp, modulus_), modulus_, 0};
}

IndexSet build_index_set(Prime p) {
  IndexSet s{p, {}};
  const std::uint64_t top = (p.value() - 5) / 6;
  s.elements.reserve(top);
  for (std::uint64_t x = 1; x <= top; ++x) s.elements.emplace_back(x, p);
  return s;
}

namespace {

void lemma3_pairs(const IndexSet& s, Lemma3Report& report) {
  const std::uint64_t m = s.prime.value();
  auto fail = [&](const std::string& what) {
    if (report.pass) {
      report.pass = false;
      report.counterexample = what;
    }
  };
  for (const auto& fx : s.elements) {
    for (const auto& fy : s.elements) {
      const std::uint64_t x = fx.residue(), y = fy.residue();
      ++report.pair_checks;
      report.condition_checks += 3;
      const std::string at = "(x,y)=(" + std::to_string(x) + "," + std::to_string(y) + ")";
      if (add_mod(x, y, m) == 0) fail("x+y=0 at " + at);
      if (add_mod(x, mul_mod(5, y, m), m) == 0) fail("x+5y=0 at " + at);
      const std::uint64_t q = add_mod(add_mod(mul_mod(x, x, m), mul_mod(x, y, m), m), mul_mod(y, y, m), m);
      if (q == 0) fail("x^2+xy+y^2=0 at " + at);
    }
  }
}

}  // namespace

Lemma3Report check_lemma3(Prime p) {
  const IndexSet s = build_index_set(p);
  if (s.size() > kLemma3MaxIndexSet) {
    throw Error(Errc::IndexSetTooLarge, "|S| = " + std::to_string(s.size()) + " exceeds " +
                                            std::to_string(kLemma3MaxIndexSet));
  }
  const std::uint64_t m = p.value();
  Lemma3Report report;
  lemma3_pairs(s, report);
  for (const auto& fx : s.elements) {
    for (const auto& fy : s.elements) {
      const std::uint64_t xy = add_mod(fx.residue(), fy.residue(), m);
      for (const auto& fz : s.elements) {
        const std::uint64_t xyz = add_mod(xy, fz.residue(), m);
        for (const auto& ft : s.elements) {
          ++report.quadruple_checks;
          if (add_mod(xyz, ft.residue(), m) == 0 && report.pass) {
            report.pass = false;
            report.counterexample = "x+y+z+t=0 at (" + std::to_string(fx.residue()) + "," +
                                    std::to_string(fy.residue()) + "," + std::to_string(fz.residue()) + "," +
                                    std::to_string(ft.residue()) + ")";
          }
        }
      }
    }
  }
  return report;
}

Lemma3Report check_lemma3_paired(Prime p) {
  const IndexSet s = build_index_set(p);
  const std::uint64_t m = p.value();
  Lemma3Report report;
  lemma3_pairs(s, report);
  // x+y+z+t = (x+y) + (z+t): record one witness pair per residue of x+y, then
  // every quadruple vanishes iff some pair-sum residue r has -r present too.
  std::vector<std::optional<std::pair<std::uint64_t, std::uint64_t>>> witness(m);
  for (const auto& fx : s.elements)
    for (const auto& fy : s.elements) {
      auto& slot = witness[add_mod(fx.residue(), fy.residue(), m)];
      if (!slot) slot = std::pair{fx.residue(), fy.residue()};
    }
  for (std::uint64_t r = 0; r < m && report.pass; ++r) {
    const auto& other = witness[(m - r) % m];
    if (witness[r] && other) {
      report.pass = false;
      report.counterexample = "x+y+z+t=0 at (" + std::to_string(witness[r]->first) + "," +
                              std::to_string(witness[r]->second) + "," + std::to_string(other->first) + "," +
                              std::to_string(other->second) + ")";
    }
  }
  const std::uint64_t k = s.size();
  report.quadruple_checks = k * k * k * k;
  return report;
}

}  // namespace ksubdiv
