#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lcc/prime.hpp"

namespace lcc {

/// Variable index (x1, x2, ... ; indices start at 1).
using VarIndex = std::uint32_t;

/// Power product x_{i1}^{e1} ... x_{ik}^{ek}. Factors are kept sorted by
/// variable index with no zero exponents, so the empty monomial is 1.
class Monomial {
 public:
  using Factor = std::pair<VarIndex, std::uint32_t>;

  Monomial() = default;

  explicit Monomial(std::vector<Factor> factors) {
    std::sort(factors.begin(), factors.end());
    for (const auto& [var, exp] : factors) {
      if (var == 0) throw std::invalid_argument("variable indices start at 1");
      if (exp == 0) continue;
      if (!factors_.empty() && factors_.back().first == var) {
        factors_.back().second += exp;
      } else {
        factors_.emplace_back(var, exp);
      }
    }
  }

  static Monomial variable(VarIndex i, std::uint32_t exponent = 1) {
    return Monomial({{i, exponent}});
  }

  /// x1 * x2 * ... * xd; the constant monomial for d = 0.
  static Monomial product_of_first(std::uint32_t d) {
    std::vector<Factor> f;
    for (VarIndex i = 1; i <= d; ++i) f.emplace_back(i, 1);
    return Monomial(std::move(f));
  }

  std::span<const Factor> factors() const noexcept { return factors_; }

  std::uint32_t exponent(VarIndex var) const noexcept {
    for (const auto& [v, e] : factors_) {
      if (v == var) return e;
    }
    return 0;
  }

  std::uint64_t total_degree() const noexcept {
    std::uint64_t d = 0;
    for (const auto& f : factors_) d += f.second;
    return d;
  }

  VarIndex max_index() const noexcept { return factors_.empty() ? 0 : factors_.back().first; }
  bool is_one() const noexcept { return factors_.empty(); }

  Monomial operator*(const Monomial& o) const {
    std::vector<Factor> f(factors_);
    f.insert(f.end(), o.factors_.begin(), o.factors_.end());
    return Monomial(std::move(f));
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;

  /// Graded lexicographic order: total degree first, then the exponent of
  /// x1, then x2, and so on (x1 is the most significant variable).
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.total_degree() <=> b.total_degree(); c != 0) return c;
    std::size_t i = 0, j = 0;
    while (i < a.factors_.size() || j < b.factors_.size()) {
      const VarIndex va = i < a.factors_.size() ? a.factors_[i].first : UINT32_MAX;
      const VarIndex vb = j < b.factors_.size() ? b.factors_[j].first : UINT32_MAX;
      if (va == vb) {
        if (auto c = a.factors_[i].second <=> b.factors_[j].second; c != 0) return c;
        ++i;
        ++j;
      } else {
        // The monomial that has the smaller variable carries a positive
        // exponent where the other has zero.
        return va < vb ? std::strong_ordering::greater : std::strong_ordering::less;
      }
    }
    return std::strong_ordering::equal;
  }

 private:
  std::vector<Factor> factors_;
};

/// Polynomial over Z_p in canonical form: a map from monomial to nonzero
/// coefficient, iterated in descending graded-lex order.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Residue, std::greater<>>;

  explicit Polynomial(PrimeModulus p) : p_(p) {}

  Polynomial(PrimeModulus p, std::initializer_list<std::pair<Monomial, Residue>> terms) : p_(p) {
    for (const auto& [m, c] : terms) accumulate(m, c);
  }

  static Polynomial constant(PrimeModulus p, Residue c) {
    Polynomial r(p);
    r.accumulate(Monomial{}, c);
    return r;
  }
  static Polynomial variable(PrimeModulus p, VarIndex i) {
    Polynomial r(p);
    r.accumulate(Monomial::variable(i), 1);
    return r;
  }
  static Polynomial monomial(PrimeModulus p, Monomial m, Residue c = 1) {
    Polynomial r(p);
    r.accumulate(std::move(m), c);
    return r;
  }

  const PrimeModulus& modulus() const noexcept { return p_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t term_count() const noexcept { return terms_.size(); }

  Residue coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
  }

  /// Largest variable index occurring; 0 for constants.
  VarIndex max_index() const noexcept {
    VarIndex r = 0;
    for (const auto& [m, c] : terms_) r = std::max(r, m.max_index());
    return r;
  }

  std::set<VarIndex> occurring_variables() const {
    std::set<VarIndex> vars;
    for (const auto& [m, c] : terms_) {
      for (const auto& f : m.factors()) vars.insert(f.first);
    }
    return vars;
  }

  std::uint64_t max_total_degree() const {
    if (terms_.empty()) throw std::domain_error("the zero polynomial has no degree");
    std::uint64_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
    return d;
  }

  /// Every exponent is at most p-1.
  bool is_reduced() const noexcept {
    for (const auto& [m, c] : terms_) {
      for (const auto& f : m.factors()) {
        if (f.second > p_.value() - 1) return false;
      }
    }
    return true;
  }

  /// Adds c * m into this polynomial, keeping the canonical form.
  Polynomial& accumulate(const Monomial& m, Residue c) {
    c %= p_.value();
    if (c == 0) return *this;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second = p_.add(it->second, c);
      if (it->second == 0) terms_.erase(it);
    }
    return *this;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.p_ == b.p_ && a.terms_ == b.terms_;
  }

 private:
  PrimeModulus p_;
  TermMap terms_;
};

inline Polynomial add(const Polynomial& f, const Polynomial& g) {
  require_same_modulus(f.modulus(), g.modulus());
  Polynomial r = f;
  for (const auto& [m, c] : g.terms()) r.accumulate(m, c);
  return r;
}

inline Polynomial scale(Residue c, const Polynomial& f) {
  const auto& p = f.modulus();
  Polynomial r(p);
  c %= p.value();
  if (c == 0) return r;
  for (const auto& [m, a] : f.terms()) r.accumulate(m, p.mul(a, c));
  return r;
}

inline Polynomial subtract(const Polynomial& f, const Polynomial& g) {
  return add(f, scale(g.modulus().neg(1), g));
}

inline Polynomial multiply(const Polynomial& f, const Polynomial& g) {
  require_same_modulus(f.modulus(), g.modulus());
  const auto& p = f.modulus();
  Polynomial r(p);
  for (const auto& [m1, c1] : f.terms()) {
    for (const auto& [m2, c2] : g.terms()) r.accumulate(m1 * m2, p.mul(c1, c2));
  }
  return r;
}

inline Polynomial power(const Polynomial& f, std::uint64_t e) {
  Polynomial acc = Polynomial::constant(f.modulus(), 1);
  Polynomial base = f;
  while (e > 0) {
    if (e & 1U) acc = multiply(acc, base);
    e >>= 1U;
    if (e > 0) base = multiply(base, base);
  }
  return acc;
}

inline Polynomial operator+(const Polynomial& f, const Polynomial& g) { return add(f, g); }
inline Polynomial operator-(const Polynomial& f, const Polynomial& g) { return subtract(f, g); }
inline Polynomial operator*(const Polynomial& f, const Polynomial& g) { return multiply(f, g); }

/// g ∘_b (f_1, ..., f_m): simultaneously replaces x_{b_k} by substitutes[k].
/// Variables not listed in positions stay as they are.
inline Polynomial compose_at(const Polynomial& g, std::span<const VarIndex> positions,
                             std::span<const Polynomial> substitutes) {
  if (positions.size() != substitutes.size()) {
    throw std::invalid_argument("compose_at: " + std::to_string(positions.size()) + " positions but " +
                                std::to_string(substitutes.size()) + " substitutes");
  }
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (positions[k] == 0) throw std::invalid_argument("compose_at: positions start at 1");
    if (k > 0 && positions[k] <= positions[k - 1]) {
      throw std::invalid_argument("compose_at: positions must be strictly increasing");
    }
    require_same_modulus(g.modulus(), substitutes[k].modulus());
  }
  const auto& p = g.modulus();
  Polynomial result(p);
  // powers[k][e] = substitutes[k]^e, filled on demand
  std::vector<std::map<std::uint32_t, Polynomial>> powers(positions.size());
  for (const auto& [m, c] : g.terms()) {
    Polynomial term = Polynomial::constant(p, c);
    std::vector<Monomial::Factor> kept;
    for (const auto& [var, exp] : m.factors()) {
      auto it = std::lower_bound(positions.begin(), positions.end(), var);
      if (it != positions.end() && *it == var) {
        const auto k = static_cast<std::size_t>(it - positions.begin());
        auto pw = powers[k].find(exp);
        if (pw == powers[k].end()) pw = powers[k].emplace(exp, power(substitutes[k], exp)).first;
        term = multiply(term, pw->second);
        if (term.is_zero()) break;
      } else {
        kept.emplace_back(var, exp);
      }
    }
    if (term.is_zero()) continue;
    const Monomial rest(std::move(kept));
    for (const auto& [tm, tc] : term.terms()) result.accumulate(tm * rest, tc);
  }
  return result;
}

inline Polynomial compose_at(const Polynomial& g, std::initializer_list<VarIndex> positions,
                             std::initializer_list<Polynomial> substitutes) {
  return compose_at(g, std::span<const VarIndex>(positions.begin(), positions.size()),
                    std::span<const Polynomial>(substitutes.begin(), substitutes.size()));
}

/// g ∘_b f: every listed variable is replaced by the same f.
inline Polynomial compose_at_uniform(const Polynomial& g, std::span<const VarIndex> positions,
                                     const Polynomial& f) {
  std::vector<Polynomial> subs(positions.size(), f);
  return compose_at(g, positions, subs);
}

inline Polynomial compose_at_uniform(const Polynomial& g, std::initializer_list<VarIndex> positions,
                                     const Polynomial& f) {
  return compose_at_uniform(g, std::span<const VarIndex>(positions.begin(), positions.size()), f);
}

/// Remainder modulo <x_i^p - x_i>: every exponent e >= 1 becomes
/// ((e-1) mod (p-1)) + 1.
inline Polynomial p_representative(const Polynomial& f) {
  const auto& p = f.modulus();
  const std::uint32_t period = p.value() - 1;
  Polynomial r(p);
  for (const auto& [m, c] : f.terms()) {
    std::vector<Monomial::Factor> reduced;
    for (const auto& [var, exp] : m.factors()) reduced.emplace_back(var, (exp - 1) % period + 1);
    r.accumulate(Monomial(std::move(reduced)), c);
  }
  return r;
}

/// Set of total degrees of the stored monomials; empty for the zero polynomial.
inline std::set<std::uint64_t> total_degree_set(const Polynomial& f) {
  std::set<std::uint64_t> s;
  for (const auto& [m, c] : f.terms()) s.insert(m.total_degree());
  return s;
}

/// Value of f at a point; point[i-1] is the value of x_i.
inline Residue evaluate_at(const Polynomial& f, std::span<const Residue> point) {
  const auto& p = f.modulus();
  Residue acc = 0;
  for (const auto& [m, c] : f.terms()) {
    Residue t = c;
    for (const auto& [var, exp] : m.factors()) {
      if (var > point.size()) throw std::out_of_range("evaluate_at: point too short for x" + std::to_string(var));
      t = p.mul(t, p.pow(point[var - 1], exp));
    }
    acc = p.add(acc, t);
  }
  return acc;
}

/// Sum of a_i x_i. Stored as a polynomial whose total-degree set is {1} or empty.
class LinearForm {
 public:
  explicit LinearForm(PrimeModulus p) : p_(p) {}
  LinearForm(PrimeModulus p, std::map<VarIndex, Residue> coefficients) : p_(p) {
    for (const auto& [v, c] : coefficients) set(v, c);
  }

  /// Coefficient vector (a_1, ..., a_n).
  static LinearForm from_dense(PrimeModulus p, std::span<const Residue> coeffs) {
    LinearForm l(p);
    for (std::size_t i = 0; i < coeffs.size(); ++i) l.set(static_cast<VarIndex>(i + 1), coeffs[i]);
    return l;
  }

  static LinearForm from_polynomial(const Polynomial& f) {
    LinearForm l(f.modulus());
    for (const auto& [m, c] : f.terms()) {
      if (m.total_degree() != 1) throw std::invalid_argument("polynomial is not a linear form");
      l.set(m.factors()[0].first, c);
    }
    return l;
  }

  void set(VarIndex v, Residue c) {
    if (v == 0) throw std::invalid_argument("variable indices start at 1");
    c %= p_.value();
    if (c == 0) {
      coeffs_.erase(v);
    } else {
      coeffs_[v] = c;
    }
  }

  const PrimeModulus& modulus() const noexcept { return p_; }
  const std::map<VarIndex, Residue>& coefficients() const noexcept { return coeffs_; }
  Residue coefficient(VarIndex v) const {
    auto it = coeffs_.find(v);
    return it == coeffs_.end() ? 0 : it->second;
  }
  VarIndex max_index() const noexcept { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

  Polynomial to_polynomial() const {
    Polynomial f(p_);
    for (const auto& [v, c] : coeffs_) f.accumulate(Monomial::variable(v), c);
    return f;
  }

  Residue evaluate(std::span<const Residue> point) const {
    Residue acc = 0;
    for (const auto& [v, c] : coeffs_) {
      if (v > point.size()) throw std::out_of_range("LinearForm::evaluate: point too short");
      acc = p_.add(acc, p_.mul(c, point[v - 1]));
    }
    return acc;
  }

  friend bool operator==(const LinearForm& a, const LinearForm& b) {
    return a.p_ == b.p_ && a.coeffs_ == b.coeffs_;
  }

 private:
  PrimeModulus p_;
  std::map<VarIndex, Residue> coeffs_;
};

// --- text form ---------------------------------------------------------

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view text, PrimeModulus p) : text_(text), p_(p) {}

  Polynomial parse() {
    Polynomial result(p_);
    skip_ws();
    if (at_end()) throw ParseError("empty polynomial", pos_);
    while (true) {
      auto [mono, coeff] = parse_term();
      result.accumulate(mono, coeff);
      skip_ws();
      if (at_end()) break;
      expect('+');
    }
    return result;
  }

 private:
  std::pair<Monomial, Residue> parse_term() {
    Residue coeff = 1;
    std::vector<Monomial::Factor> factors;
    while (true) {
      skip_ws();
      if (at_end()) throw ParseError("expected a factor", pos_);
      if (text_[pos_] == 'x') {
        ++pos_;
        skip_ws();
        const std::size_t at = pos_;
        const std::uint64_t index = parse_number();
        if (index == 0 || index > UINT32_MAX) throw ParseError("variable index must be in 1..2^32-1", at);
        std::uint64_t exp = 1;
        skip_ws();
        if (!at_end() && text_[pos_] == '^') {
          ++pos_;
          skip_ws();
          const std::size_t eat = pos_;
          exp = parse_number();
          if (exp > UINT32_MAX) throw ParseError("exponent too large", eat);
        }
        factors.emplace_back(static_cast<VarIndex>(index), static_cast<std::uint32_t>(exp));
      } else {
        const std::size_t at = pos_;
        const std::uint64_t c = parse_number();
        if (c >= p_.value()) {
          throw ParseError("coefficient " + std::to_string(c) + " is not below p = " + std::to_string(p_.value()), at);
        }
        coeff = p_.mul(coeff, static_cast<Residue>(c));
      }
      skip_ws();
      if (at_end() || text_[pos_] != '*') break;
      ++pos_;
    }
    return {Monomial(std::move(factors)), coeff};
  }

  std::uint64_t parse_number() {
    if (at_end() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      throw ParseError("expected a decimal number", pos_);
    }
    std::uint64_t v = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      if (v > (UINT64_MAX - 9) / 10) throw ParseError("number too large", pos_);
      v = v * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      ++pos_;
    }
    return v;
  }

  void expect(char c) {
    if (at_end() || text_[pos_] != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }

  std::string_view text_;
  PrimeModulus p_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses "2*x1^2*x3 + x2 + 1"-style text. Coefficients must be below p.
inline Polynomial parse(std::string_view text, PrimeModulus p) {
  return detail::PolyParser(text, p).parse();
}

inline std::string format(const Monomial& m) {
  std::string s;
  for (const auto& [var, exp] : m.factors()) {
    if (!s.empty()) s += '*';
    s += 'x' + std::to_string(var);
    if (exp != 1) s += '^' + std::to_string(exp);
  }
  return s;
}

/// Canonical text: descending graded-lex order, coefficient 1 and exponent 1 omitted.
inline std::string format(const Polynomial& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (const auto& [m, c] : f.terms()) {
    if (!s.empty()) s += " + ";
    if (m.is_one()) {
      s += std::to_string(c);
    } else if (c == 1) {
      s += format(m);
    } else {
      s += std::to_string(c) + '*' + format(m);
    }
  }
  return s;
}

inline std::string format(const LinearForm& l) { return format(l.to_polynomial()); }

}  // namespace lcc
