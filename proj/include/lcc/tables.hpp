#pragma once

#include <cctype>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lcc/poly.hpp"
#include "lcc/prime.hpp"

namespace lcc {

/// Largest table we are willing to materialize (entries).
inline constexpr std::uint64_t kMaxTableEntries = std::uint64_t{1} << 28;

inline std::size_t table_size(const PrimeModulus& p, std::uint32_t arity) {
  return static_cast<std::size_t>(checked_power(p.value(), arity, kMaxTableEntries));
}

/// Index of (x1, ..., xn) with x1 as the most significant base-p digit.
inline std::size_t encode_point(const PrimeModulus& p, std::span<const Residue> point) {
  std::size_t idx = 0;
  for (Residue x : point) idx = idx * p.value() + x;
  return idx;
}

inline void decode_point(const PrimeModulus& p, std::size_t index, std::span<Residue> point) {
  for (std::size_t i = point.size(); i-- > 0;) {
    point[i] = static_cast<Residue>(index % p.value());
    index /= p.value();
  }
}

/// Steps a point to the next one in index order; false after the last point.
inline bool next_point(const PrimeModulus& p, std::span<Residue> point) {
  for (std::size_t i = point.size(); i-- > 0;) {
    if (++point[i] < p.value()) return true;
    point[i] = 0;
  }
  return false;
}

/// Full value table of a function Z_p^n -> Z_p.
class FunctionTable {
 public:
  FunctionTable(PrimeModulus p, std::uint32_t arity, std::vector<Residue> values)
      : p_(p), arity_(arity), values_(std::move(values)) {
    if (arity_ == 0) throw std::invalid_argument("table arity must be at least 1");
    if (values_.size() != table_size(p_, arity_)) {
      throw std::invalid_argument("table of arity " + std::to_string(arity_) + " needs " +
                                  std::to_string(table_size(p_, arity_)) + " values, got " +
                                  std::to_string(values_.size()));
    }
    for (Residue v : values_) {
      if (v >= p_.value()) throw std::invalid_argument("table value out of range");
    }
  }

  static FunctionTable zero(PrimeModulus p, std::uint32_t arity) {
    return FunctionTable(p, arity, std::vector<Residue>(table_size(p, arity), 0));
  }

  const PrimeModulus& modulus() const noexcept { return p_; }
  std::uint32_t arity() const noexcept { return arity_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const Residue> values() const noexcept { return values_; }
  Residue operator[](std::size_t i) const { return values_[i]; }
  Residue at(std::span<const Residue> point) const { return values_[encode_point(p_, point)]; }

  bool is_zero() const noexcept {
    for (Residue v : values_) {
      if (v != 0) return false;
    }
    return true;
  }

  friend bool operator==(const FunctionTable& a, const FunctionTable& b) {
    return a.p_ == b.p_ && a.arity_ == b.arity_ && a.values_ == b.values_;
  }
  friend bool operator<(const FunctionTable& a, const FunctionTable& b) {
    if (a.arity_ != b.arity_) return a.arity_ < b.arity_;
    return a.values_ < b.values_;
  }

 private:
  PrimeModulus p_;
  std::uint32_t arity_;
  std::vector<Residue> values_;
};

/// The function induced by f on Z_p^n. Requires n >= max(1, maxInd(f)).
inline FunctionTable evaluate(const Polynomial& f, std::uint32_t arity) {
  if (arity == 0 || arity < f.max_index()) {
    throw std::invalid_argument("evaluate: arity " + std::to_string(arity) + " is below max(1, maxInd) = " +
                                std::to_string(std::max<VarIndex>(1, f.max_index())));
  }
  const auto& p = f.modulus();
  const std::size_t n = table_size(p, arity);
  std::vector<Residue> values(n);
  std::vector<Residue> point(arity, 0);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = evaluate_at(f, point);
    next_point(p, point);
  }
  return FunctionTable(p, arity, std::move(values));
}

/// pi_j^n.
inline FunctionTable projection(PrimeModulus p, std::uint32_t arity, std::uint32_t j) {
  if (j == 0 || j > arity) {
    throw std::out_of_range("projection index " + std::to_string(j) + " not in 1.." + std::to_string(arity));
  }
  return evaluate(Polynomial::variable(p, j), arity);
}

namespace detail {

/// Coefficients (degree 0..p-1) of 1 - (x - a)^(p-1), the indicator of a.
inline std::vector<std::vector<Residue>> indicator_coefficients(const PrimeModulus& p) {
  const std::uint32_t q = p.value();
  std::vector<Residue> binom(q, 0);  // C(p-1, k) mod p
  binom[0] = 1;
  for (std::uint32_t row = 1; row <= q - 1; ++row) {
    for (std::uint32_t k = row; k >= 1; --k) binom[k] = p.add(binom[k], binom[k - 1]);
  }
  std::vector<std::vector<Residue>> ind(q, std::vector<Residue>(q, 0));
  for (Residue a = 0; a < q; ++a) {
    const Residue minus_a = p.neg(a);
    for (std::uint32_t k = 0; k <= q - 1; ++k) {
      const Residue term = p.mul(binom[k], p.pow(minus_a, q - 1 - k));
      ind[a][k] = p.sub(k == 0 ? 1 : 0, term);
    }
  }
  return ind;
}

}  // namespace detail

/// The unique reduced polynomial inducing T, from the indicator expansion
/// sum_a T(a) prod_i (1 - (x_i - a_i)^(p-1)). The product structure lets the
/// expansion run one coordinate at a time.
inline Polynomial interpolate(const FunctionTable& t) {
  const auto& p = t.modulus();
  const std::uint32_t q = p.value();
  const std::uint32_t n = t.arity();
  const auto ind = detail::indicator_coefficients(p);

  // coeff is indexed like the table, but digit i holds the exponent of x_{i+1}.
  std::vector<Residue> coeff(t.values().begin(), t.values().end());
  std::vector<Residue> fiber(q), out(q);
  std::size_t stride = coeff.size();
  for (std::uint32_t axis = 0; axis < n; ++axis) {
    stride /= q;
    const std::size_t block = stride * q;
    for (std::size_t base = 0; base < coeff.size(); base += block) {
      for (std::size_t off = 0; off < stride; ++off) {
        for (std::uint32_t a = 0; a < q; ++a) fiber[a] = coeff[base + off + a * stride];
        std::fill(out.begin(), out.end(), 0);
        for (std::uint32_t a = 0; a < q; ++a) {
          if (fiber[a] == 0) continue;
          for (std::uint32_t e = 0; e < q; ++e) out[e] = p.add(out[e], p.mul(fiber[a], ind[a][e]));
        }
        for (std::uint32_t e = 0; e < q; ++e) coeff[base + off + e * stride] = out[e];
      }
    }
  }

  Polynomial result(p);
  std::vector<Residue> exps(n, 0);
  for (std::size_t i = 0; i < coeff.size(); ++i) {
    if (coeff[i] != 0) {
      std::vector<Monomial::Factor> f;
      for (std::uint32_t j = 0; j < n; ++j) f.emplace_back(j + 1, exps[j]);
      result.accumulate(Monomial(std::move(f)), coeff[i]);
    }
    next_point(p, exps);
  }
  return result;
}

/// Pointwise sum of c_i * T_i.
inline FunctionTable linear_combination(std::span<const Residue> coeffs, std::span<const FunctionTable> tables) {
  if (coeffs.size() != tables.size()) throw std::invalid_argument("linear_combination: length mismatch");
  if (tables.empty()) throw std::invalid_argument("linear_combination: no tables");
  const auto& p = tables[0].modulus();
  const auto arity = tables[0].arity();
  std::vector<Residue> acc(tables[0].size(), 0);
  for (std::size_t i = 0; i < tables.size(); ++i) {
    require_same_modulus(p, tables[i].modulus());
    if (tables[i].arity() != arity) throw std::invalid_argument("linear_combination: arity mismatch");
    const Residue c = coeffs[i] % p.value();
    if (c == 0) continue;
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] = p.add(acc[k], p.mul(c, tables[i][k]));
  }
  return FunctionTable(p, arity, std::move(acc));
}

/// f(g_1, ..., g_k) for k-ary f and m-ary g_i.
inline FunctionTable compose_tables(const FunctionTable& f, std::span<const FunctionTable> gs) {
  if (gs.size() != f.arity()) {
    throw std::invalid_argument("compose_tables: " + std::to_string(f.arity()) + "-ary table given " +
                                std::to_string(gs.size()) + " arguments");
  }
  const auto& p = f.modulus();
  const auto m = gs[0].arity();
  for (const auto& g : gs) {
    require_same_modulus(p, g.modulus());
    if (g.arity() != m) throw std::invalid_argument("compose_tables: argument arity mismatch");
  }
  std::vector<Residue> out(gs[0].size());
  for (std::size_t x = 0; x < out.size(); ++x) {
    std::size_t idx = 0;
    for (const auto& g : gs) idx = idx * p.value() + g[x];
    out[x] = f[idx];
  }
  return FunctionTable(p, m, std::move(out));
}

// --- serialization: "p n" then p^n values in index order ------------------

inline std::string serialize(const FunctionTable& t) {
  std::string s = std::to_string(t.modulus().value()) + ' ' + std::to_string(t.arity()) + '\n';
  const bool digits = t.modulus().value() <= 10;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!digits && i > 0) s += ' ';
    s += std::to_string(t[i]);
  }
  s += '\n';
  return s;
}

inline FunctionTable deserialize_table(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::uint64_t p = 0, n = 0;
  if (!(in >> p >> n)) throw std::invalid_argument("table: expected header \"p n\"");
  PrimeModulus mod(static_cast<std::uint32_t>(p));
  std::vector<Residue> values;
  std::string tok;
  while (in >> tok) {
    if (mod.value() <= 10) {
      for (char c : tok) {
        if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("table: bad digit");
        values.push_back(static_cast<Residue>(c - '0'));
      }
    } else {
      values.push_back(static_cast<Residue>(std::stoul(tok)));
    }
  }
  return FunctionTable(mod, static_cast<std::uint32_t>(n), std::move(values));
}

}  // namespace lcc
