#include "ksubdiv/multipoly.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>
#include <unordered_map>

#include "ksubdiv/error.hpp"

namespace ksubdiv {

// ---------------------------------------------------------------------------
// VariableTable

VariableTable::VariableTable(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxVariables) {
    throw Error(Errc::Overflow, "variable table holds at most " + std::to_string(kMaxVariables) + " names");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const auto& n = names_[i];
    if (n.empty() || !(std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_')) {
      throw Error(Errc::ParseError, "invalid variable name '" + n + "'");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (names_[j] == n) throw Error(Errc::TableMismatch, "duplicate variable '" + n + "'");
    }
  }
}

std::optional<std::size_t> VariableTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t VariableTable::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(Errc::UnknownVariable, std::string(name));
}

TablePtr make_table(std::vector<std::string> names) {
  return std::make_shared<const VariableTable>(std::move(names));
}

// ---------------------------------------------------------------------------
// Monomial

void Monomial::set_exponent(std::size_t var, unsigned e) {
  if (e > kMaxExponent) throw Error(Errc::Overflow, "exponent " + std::to_string(e) + " exceeds 255");
  const unsigned old = exponent(var);
  const unsigned shift = 56 - 8 * (var % 8);
  auto& w = words_[var / 8];
  w = (w & ~(std::uint64_t{0xFF} << shift)) | (std::uint64_t{e} << shift);
  degree_ = degree_ - old + e;
}

bool Monomial::divides(const Monomial& o, std::size_t nvars) const noexcept {
  if (degree_ > o.degree_) return false;
  for (std::size_t v = 0; v < nvars; ++v) {
    if (exponent(v) > o.exponent(v)) return false;
  }
  return true;
}

Monomial Monomial::quotient(const Monomial& o) const noexcept {
  Monomial r;
  for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] - o.words_[i];
  r.degree_ = degree_ - o.degree_;
  return r;
}

std::size_t Monomial::hash() const noexcept {
  std::uint64_t h = 0x9E3779B97F4A7C15ull;
  for (std::uint64_t w : words_) {
    h ^= w + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    h *= 0xBF58476D1CE4E5B9ull;
  }
  return static_cast<std::size_t>(h ^ (h >> 31));
}

// ---------------------------------------------------------------------------
// MPolynomial basics

namespace {

bool term_order(const MPolynomial::Term& a, const MPolynomial::Term& b) {
  return grlex_greater(a.first, b.first);
}

std::vector<unsigned> max_exponents(std::span<const MPolynomial::Term> terms, std::size_t nvars) {
  std::vector<unsigned> out(nvars, 0);
  for (const auto& [m, c] : terms) {
    for (std::size_t v = 0; v < nvars; ++v) out[v] = std::max(out[v], m.exponent(v));
  }
  return out;
}

}  // namespace

MPolynomial MPolynomial::constant(TablePtr table, const mpz_class& value) {
  MPolynomial p(std::move(table));
  if (value != 0) p.terms_.emplace_back(Monomial{}, value);
  return p;
}

MPolynomial MPolynomial::variable(TablePtr table, std::string_view name) {
  MPolynomial p(table);
  Monomial m;
  m.set_exponent(table->index(name), 1);
  p.terms_.emplace_back(m, mpz_class(1));
  return p;
}

MPolynomial MPolynomial::from_terms(TablePtr table, std::vector<Term> terms) {
  MPolynomial p(std::move(table));
  std::sort(terms.begin(), terms.end(), term_order);
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first) {
      p.terms_.back().second += t.second;
    } else {
      if (!p.terms_.empty() && p.terms_.back().second == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().second == 0) p.terms_.pop_back();
  return p;
}

std::optional<mpz_class> MPolynomial::constant_value() const {
  if (terms_.empty()) return mpz_class(0);
  if (terms_.size() == 1 && terms_.front().first.is_one()) return terms_.front().second;
  return std::nullopt;
}

int MPolynomial::degree_in(std::size_t var) const {
  if (var >= table_->size()) throw Error(Errc::UnknownVariable, "index " + std::to_string(var));
  if (terms_.empty()) return -1;
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.first.exponent(var));
  return static_cast<int>(d);
}

MPolynomial MPolynomial::coefficient_of(std::size_t var, unsigned k) const {
  if (var >= table_->size()) throw Error(Errc::UnknownVariable, "index " + std::to_string(var));
  std::vector<Term> out;
  for (const auto& [m, c] : terms_) {
    if (m.exponent(var) == k) {
      Monomial r = m;
      r.set_exponent(var, 0);
      out.emplace_back(r, c);
    }
  }
  return from_terms(table_, std::move(out));
}

std::vector<MPolynomial> MPolynomial::coefficients_in(std::size_t var) const {
  const int d = degree_in(var);
  std::vector<std::vector<Term>> buckets(static_cast<std::size_t>(d + 1));
  for (const auto& [m, c] : terms_) {
    Monomial r = m;
    const unsigned e = m.exponent(var);
    r.set_exponent(var, 0);
    buckets[e].emplace_back(r, c);
  }
  std::vector<MPolynomial> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(from_terms(table_, std::move(b)));
  return out;
}

MPolynomial MPolynomial::substitute(std::size_t var, const MPolynomial& value) const {
  require_same_table(value);
  const auto coeffs = coefficients_in(var);
  MPolynomial result(table_);
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    result = result * value + coeffs[k];
  }
  return result;
}

void MPolynomial::require_same_table(const MPolynomial& o) const {
  if (table_ != o.table_ && !(*table_ == *o.table_)) {
    throw Error(Errc::TableMismatch, "polynomials use different variable tables");
  }
}

std::vector<MPolynomial::Term> MPolynomial::merge(const std::vector<Term>& a,
                                                  const std::vector<Term>& b, bool negate_b) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && grlex_greater(a[i].first, b[j].first))) {
      out.push_back(a[i++]);
    } else if (i == a.size() || grlex_greater(b[j].first, a[i].first)) {
      out.push_back(b[j++]);
      if (negate_b) out.back().second = -out.back().second;
    } else {
      mpz_class c = negate_b ? mpz_class(a[i].second - b[j].second) : mpz_class(a[i].second + b[j].second);
      if (c != 0) out.emplace_back(a[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return out;
}

MPolynomial MPolynomial::operator-() const {
  MPolynomial r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

MPolynomial& MPolynomial::operator+=(const MPolynomial& o) {
  require_same_table(o);
  if (o.terms_.empty()) return *this;
  terms_ = merge(terms_, o.terms_, false);
  return *this;
}

MPolynomial& MPolynomial::operator-=(const MPolynomial& o) {
  require_same_table(o);
  if (o.terms_.empty()) return *this;
  terms_ = merge(terms_, o.terms_, true);
  return *this;
}

MPolynomial& MPolynomial::operator*=(const MPolynomial& o) {
  *this = *this * o;
  return *this;
}

MPolynomial& MPolynomial::operator*=(const mpz_class& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= c;
  return *this;
}

MPolynomial operator*(const MPolynomial& a, const MPolynomial& b) {
  a.require_same_table(b);
  MPolynomial r(a.table_);
  if (a.terms_.empty() || b.terms_.empty()) return r;

  const std::size_t nv = a.table_->size();
  const auto ea = max_exponents(a.terms_, nv);
  const auto eb = max_exponents(b.terms_, nv);
  for (std::size_t v = 0; v < nv; ++v) {
    if (ea[v] + eb[v] > kMaxExponent) {
      throw Error(Errc::Overflow, "exponent of " + a.table_->name(v) + " would exceed 255");
    }
  }

  const MPolynomial& small = a.terms_.size() <= b.terms_.size() ? a : b;
  const MPolynomial& large = a.terms_.size() <= b.terms_.size() ? b : a;

  // A monomial order is preserved by multiplying with a single term.
  if (small.terms_.size() == 1) {
    const auto& [m, c] = small.terms_.front();
    r.terms_.reserve(large.terms_.size());
    for (const auto& [lm, lc] : large.terms_) r.terms_.emplace_back(lm * m, lc * c);
    return r;
  }

  std::unordered_map<Monomial, mpz_class, MonomialHash> acc;
  acc.reserve(std::min<std::size_t>(a.terms_.size() * b.terms_.size(), 1u << 22));
  for (const auto& [lm, lc] : large.terms_) {
    for (const auto& [sm, sc] : small.terms_) {
      auto& slot = acc[lm * sm];
      mpz_addmul(slot.get_mpz_t(), lc.get_mpz_t(), sc.get_mpz_t());
    }
  }
  r.terms_.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) r.terms_.emplace_back(m, std::move(c));
  }
  std::sort(r.terms_.begin(), r.terms_.end(), term_order);
  return r;
}

MPolynomial MPolynomial::pow(unsigned e) const {
  MPolynomial result = constant(table_, 1);
  MPolynomial base = *this;
  while (e > 0) {
    if (e & 1u) result *= base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

MPolynomial MPolynomial::shifted(std::size_t var, unsigned k) const {
  if (k == 0) return *this;
  Monomial m;
  m.set_exponent(var, k);
  MPolynomial mono(table_);
  mono.terms_.emplace_back(m, mpz_class(1));
  return *this * mono;
}

bool operator==(const MPolynomial& a, const MPolynomial& b) {
  if (a.table_ != b.table_ && !(*a.table_ == *b.table_)) return false;
  return a.terms_ == b.terms_;
}

std::string MPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool neg = c < 0;
    const mpz_class mag = abs(c);
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    if (m.is_one() || mag != 1) {
      os << mag.get_str();
      wrote = true;
    }
    for (std::size_t v = 0; v < table_->size(); ++v) {
      const unsigned e = m.exponent(v);
      if (e == 0) continue;
      if (wrote) os << "*";
      os << table_->name(v);
      if (e > 1) os << "^" << e;
      wrote = true;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(TablePtr table, std::string_view text) : table_(std::move(table)), text_(text) {}

  MPolynomial run() {
    MPolynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(Errc::ParseError, why + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  MPolynomial expr() {
    MPolynomial acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  MPolynomial term() {
    MPolynomial acc = factor();
    while (accept('*')) acc *= factor();
    return acc;
  }

  MPolynomial factor() {
    if (accept('-')) return -factor();
    MPolynomial base = primary();
    if (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      const unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
      if (e > kMaxExponent) fail("exponent too large");
      base = base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  MPolynomial primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      MPolynomial inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return MPolynomial::constant(table_, mpz_class(std::string(text_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      return MPolynomial::variable(table_, text_.substr(start, pos_ - start));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  TablePtr table_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

MPolynomial MPolynomial::parse(TablePtr table, std::string_view text) {
  return Parser(std::move(table), text).run();
}

// ---------------------------------------------------------------------------
// Determinants and resultants

PolyMatrix sylvester_matrix(const MPolynomial& f, const MPolynomial& g, std::size_t var) {
  const auto fc = f.coefficients_in(var);
  const auto gc = g.coefficients_in(var);
  const std::size_t m = fc.size() - 1;
  const std::size_t n = gc.size() - 1;
  const std::size_t dim = m + n;
  const MPolynomial zero(f.table());
  PolyMatrix rows(dim, std::vector<MPolynomial>(dim, zero));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k <= m; ++k) rows[i][i + k] = fc[k];
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k <= n; ++k) rows[n + i][i + k] = gc[k];
  }
  return rows;
}

namespace {

// Laplace expansion along successive columns. The minor left after
// consuming column `col` depends only on which rows were used, so minors are
// memoized on the consumed-row bitmask.
template <class Mul, class Reduce>
class CofactorExpansion {
 public:
  CofactorExpansion(const PolyMatrix& m, Mul mul, Reduce reduce)
      : m_(m), mul_(std::move(mul)), reduce_(std::move(reduce)) {}

  MPolynomial run() { return minor(0, 0); }

 private:
  MPolynomial minor(std::size_t col, std::uint32_t used) {
    const std::size_t n = m_.size();
    const TablePtr& table = m_.front().front().table();
    if (col == n) return MPolynomial::constant(table, 1);
    if (auto it = memo_.find(used); it != memo_.end()) return it->second;
    MPolynomial acc(table);
    std::size_t position = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (used & (1u << r)) continue;
      const MPolynomial& entry = m_[r][col];
      if (!entry.is_zero()) {
        MPolynomial sub = minor(col + 1, used | (1u << r));
        if (!sub.is_zero()) {
          MPolynomial prod = mul_(entry, sub);
          if (position % 2 == 0) {
            acc += prod;
          } else {
            acc -= prod;
          }
          acc = reduce_(acc);
        }
      }
      ++position;
    }
    memo_.emplace(used, acc);
    return acc;
  }

  const PolyMatrix& m_;
  Mul mul_;
  Reduce reduce_;
  std::unordered_map<std::uint32_t, MPolynomial> memo_;
};

template <class Mul, class Reduce>
MPolynomial cofactor_impl(const PolyMatrix& m, Mul mul, Reduce reduce) {
  return CofactorExpansion<Mul, Reduce>(m, std::move(mul), std::move(reduce)).run();
}

void require_square(const PolyMatrix& m) {
  for (const auto& row : m) {
    if (row.size() != m.size()) throw Error(Errc::TableMismatch, "matrix is not square");
  }
}

}  // namespace

MPolynomial determinant_cofactor(const PolyMatrix& m) {
  if (m.empty()) throw Error(Errc::ZeroPolynomial, "empty matrix");
  require_square(m);
  if (m.size() > 31) throw Error(Errc::Overflow, "cofactor expansion limited to 31x31");
  return cofactor_impl(
      m, [](const MPolynomial& a, const MPolynomial& b) { return a * b; },
      [](MPolynomial p) { return p; });
}

MPolynomial determinant_bareiss(PolyMatrix m) {
  if (m.empty()) throw Error(Errc::ZeroPolynomial, "empty matrix");
  require_square(m);
  const std::size_t n = m.size();
  const TablePtr table = m.front().front().table();
  bool negate = false;
  MPolynomial previous = MPolynomial::constant(table, 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t swap_with = k + 1;
      while (swap_with < n && m[swap_with][k].is_zero()) ++swap_with;
      if (swap_with == n) return MPolynomial(table);
      std::swap(m[k], m[swap_with]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        MPolynomial num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        m[i][j] = exact_divide(num, previous);
      }
      m[i][k] = MPolynomial(table);
    }
    previous = m[k][k];
  }
  return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

MPolynomial determinant(const PolyMatrix& m) {
  return m.size() <= kCofactorMaxDimension ? determinant_cofactor(m) : determinant_bareiss(m);
}

MPolynomial resultant(const MPolynomial& f, const MPolynomial& g, std::size_t var) {
  if (f.is_zero() || g.is_zero()) throw Error(Errc::ZeroPolynomial, "resultant of the zero polynomial");
  if (f.degree_in(var) == 0 && g.degree_in(var) == 0) {
    throw Error(Errc::DegreeZeroBoth, "neither argument involves " + f.table()->name(var));
  }
  return determinant(sylvester_matrix(f, g, var));
}

MPolynomial resultant(const MPolynomial& f, const MPolynomial& g, std::string_view var) {
  return resultant(f, g, f.table()->index(var));
}

// ---------------------------------------------------------------------------
// Exact division

namespace {

MPolynomial reduce_mod_q(const MPolynomial& f, std::uint64_t q) {
  std::vector<MPolynomial::Term> out;
  out.reserve(f.term_count());
  for (const auto& [m, c] : f.terms()) {
    const unsigned long r = mpz_fdiv_ui(c.get_mpz_t(), q);
    if (r != 0) out.emplace_back(m, mpz_class(r));
  }
  // Reduction keeps order and drops only zeros.
  MPolynomial p(f.table());
  p = MPolynomial::from_terms(f.table(), std::move(out));
  return p;
}

// Univariate division in the first variable that g involves, with the
// leading-coefficient quotients computed recursively. Over Z every step must
// be exact; over F_q the constant case multiplies by an inverse.
std::optional<MPolynomial> divide_impl(const MPolynomial& f, const MPolynomial& g,
                                       std::optional<std::uint64_t> q) {
  const TablePtr& table = f.table();
  if (f.is_zero()) return MPolynomial(table);

  if (auto c = g.constant_value()) {
    std::vector<MPolynomial::Term> out;
    out.reserve(f.term_count());
    if (q) {
      const std::uint64_t inv = inv_mod(mpz_fdiv_ui(c->get_mpz_t(), *q), *q);
      const mpz_class minv(std::to_string(inv));
      for (const auto& [m, coef] : f.terms()) {
        mpz_class v = coef * minv;
        const unsigned long r = mpz_fdiv_ui(v.get_mpz_t(), *q);
        if (r != 0) out.emplace_back(m, mpz_class(r));
      }
    } else {
      for (const auto& [m, coef] : f.terms()) {
        if (!mpz_divisible_p(coef.get_mpz_t(), c->get_mpz_t())) return std::nullopt;
        mpz_class quot;
        mpz_divexact(quot.get_mpz_t(), coef.get_mpz_t(), c->get_mpz_t());
        out.emplace_back(m, std::move(quot));
      }
    }
    return MPolynomial::from_terms(table, std::move(out));
  }

  std::size_t var = 0;
  while (g.degree_in(var) <= 0) ++var;

  const auto gc = g.coefficients_in(var);
  const std::size_t n = gc.size() - 1;
  auto r = f.coefficients_in(var);
  if (r.size() <= n) return std::nullopt;

  const std::size_t qdeg = r.size() - 1 - n;
  std::vector<MPolynomial> quotient(qdeg + 1, MPolynomial(table));
  for (std::size_t k = r.size(); k-- > n;) {
    if (r[k].is_zero()) continue;
    auto qk = divide_impl(r[k], gc[n], q);
    if (!qk) return std::nullopt;
    for (std::size_t j = 0; j < n; ++j) {
      if (gc[j].is_zero()) continue;
      r[k - n + j] -= *qk * gc[j];
      if (q) r[k - n + j] = reduce_mod_q(r[k - n + j], *q);
    }
    r[k] = MPolynomial(table);
    quotient[k - n] = std::move(*qk);
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!r[k].is_zero()) return std::nullopt;
  }
  MPolynomial result(table);
  for (std::size_t k = 0; k <= qdeg; ++k) {
    if (!quotient[k].is_zero()) result += quotient[k].shifted(var, static_cast<unsigned>(k));
  }
  return result;
}

}  // namespace

std::optional<MPolynomial> try_divide(const MPolynomial& f, const MPolynomial& g) {
  if (g.is_zero()) throw Error(Errc::DivisionByZero, "division by the zero polynomial");
  if (!(*f.table() == *g.table())) throw Error(Errc::TableMismatch, "division across tables");
  return divide_impl(f, g, std::nullopt);
}

MPolynomial exact_divide(const MPolynomial& f, const MPolynomial& g) {
  auto q = try_divide(f, g);
  if (!q) {
    std::string shown = f.term_count() > 12 ? "(" + std::to_string(f.term_count()) + " terms)" : f.to_string();
    throw Error(Errc::NotDivisible, shown + " by " + g.to_string());
  }
  return std::move(*q);
}

// ---------------------------------------------------------------------------
// Evaluation

std::uint64_t evaluate_mod(const MPolynomial& f, std::span<const std::uint64_t> point, std::uint64_t q) {
  const std::size_t nv = f.table()->size();
  if (point.size() < nv) throw Error(Errc::MissingAssignment, "point shorter than the table");
  const auto maxe = max_exponents(f.terms(), nv);
  std::vector<std::vector<std::uint64_t>> powers(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    powers[v].resize(maxe[v] + 1);
    powers[v][0] = 1 % q;
    for (unsigned e = 1; e <= maxe[v]; ++e) powers[v][e] = mul_mod(powers[v][e - 1], point[v] % q, q);
  }
  std::uint64_t acc = 0;
  for (const auto& [m, c] : f.terms()) {
    std::uint64_t t = mpz_fdiv_ui(c.get_mpz_t(), q);
    for (std::size_t v = 0; v < nv && t != 0; ++v) {
      const unsigned e = m.exponent(v);
      if (e) t = mul_mod(t, powers[v][e], q);
    }
    acc = add_mod(acc, t, q);
  }
  return acc;
}

FieldElement evaluate(const MPolynomial& f, const Assignment& assignment, Prime q) {
  const auto& table = *f.table();
  std::vector<std::uint64_t> point(table.size(), 0);
  for (std::size_t v = 0; v < table.size(); ++v) {
    auto it = assignment.find(table.name(v));
    if (it == assignment.end()) {
      if (f.involves(v)) throw Error(Errc::MissingAssignment, "no value for " + table.name(v));
      continue;
    }
    if (it->second.modulus() != q.value()) {
      throw Error(Errc::ModulusMismatch, "value for " + table.name(v) + " lives mod " +
                                             std::to_string(it->second.modulus()));
    }
    point[v] = it->second.residue();
  }
  return FieldElement(evaluate_mod(f, point, q.value()), q);
}

bool identity_equal(const MPolynomial& f, const MPolynomial& g, int trials, Prime q,
                    std::uint64_t seed) {
  const MPolynomial diff = f - g;
  if (diff.is_zero()) return true;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> dist(0, q.value() - 1);
  std::vector<std::uint64_t> point(f.table()->size());
  for (int t = 0; t < trials; ++t) {
    for (auto& x : point) x = dist(rng);
    if (evaluate_mod(diff, point, q.value()) != 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Arithmetic in F_q[vars]

namespace modq {

MPolynomial reduce(const MPolynomial& f, std::uint64_t q) { return reduce_mod_q(f, q); }

MPolynomial specialize(const MPolynomial& f, std::span<const std::optional<std::uint64_t>> values,
                       std::uint64_t q) {
  const std::size_t nv = f.table()->size();
  std::vector<MPolynomial::Term> out;
  out.reserve(f.term_count());
  for (const auto& [m, c] : f.terms()) {
    std::uint64_t t = mpz_fdiv_ui(c.get_mpz_t(), q);
    Monomial rest = m;
    for (std::size_t v = 0; v < nv && v < values.size(); ++v) {
      if (!values[v]) continue;
      const unsigned e = m.exponent(v);
      if (e == 0) continue;
      t = mul_mod(t, pow_mod(*values[v] % q, e, q), q);
      rest.set_exponent(v, 0);
    }
    if (t != 0) out.emplace_back(rest, mpz_class(std::to_string(t)));
  }
  return reduce_mod_q(MPolynomial::from_terms(f.table(), std::move(out)), q);
}

MPolynomial multiply(const MPolynomial& a, const MPolynomial& b, std::uint64_t q) {
  return reduce_mod_q(a * b, q);
}

MPolynomial resultant(const MPolynomial& f, const MPolynomial& g, std::size_t var, std::uint64_t q) {
  const MPolynomial fr = reduce_mod_q(f, q);
  const MPolynomial gr = reduce_mod_q(g, q);
  if (fr.is_zero() || gr.is_zero()) throw Error(Errc::ZeroPolynomial, "resultant of the zero polynomial");
  if (fr.degree_in(var) == 0 && gr.degree_in(var) == 0) {
    throw Error(Errc::DegreeZeroBoth, "neither argument involves " + f.table()->name(var));
  }
  const PolyMatrix m = sylvester_matrix(fr, gr, var);
  return cofactor_impl(
      m, [q](const MPolynomial& a, const MPolynomial& b) { return reduce_mod_q(a * b, q); },
      [q](const MPolynomial& p) { return reduce_mod_q(p, q); });
}

MPolynomial divide(const MPolynomial& f, const MPolynomial& g, std::uint64_t q) {
  const MPolynomial gr = reduce_mod_q(g, q);
  if (gr.is_zero()) throw Error(Errc::DivisionByZero, "division by zero mod q");
  auto res = divide_impl(reduce_mod_q(f, q), gr, q);
  if (!res) throw Error(Errc::NotDivisible, "mod-q division left a remainder");
  return std::move(*res);
}

}  // namespace modq

}  // namespace ksubdiv
