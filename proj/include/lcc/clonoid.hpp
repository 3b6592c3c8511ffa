#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "lcc/pminor.hpp"
#include "lcc/poly.hpp"
#include "lcc/tables.hpp"

namespace lcc {

/// A linearly closed clonoid on Z_p, held as the p-minor subset M with
/// C = C(M): the zero functions plus every function induced by a reduced
/// polynomial whose total degrees all lie in M. Function sets are never
/// materialized.
class Clonoid {
 public:
  explicit Clonoid(PMinorSubset mask) : mask_(std::move(mask)) {}

  /// C(∅): only the zero functions.
  static Clonoid zero(PrimeModulus p) { return Clonoid(PMinorSubset(p)); }

  const PMinorSubset& mask() const noexcept { return mask_; }
  const PrimeModulus& modulus() const noexcept { return mask_.modulus(); }

  friend bool operator==(const Clonoid&, const Clonoid&) = default;
  friend bool operator<(const Clonoid& a, const Clonoid& b) { return a.mask_ < b.mask_; }

 private:
  PMinorSubset mask_;
};

/// The linearly closed clonoid generated by the functions the generators induce.
inline Clonoid generate(std::span<const Polynomial> generators, PrimeModulus p) {
  std::set<std::uint64_t> degrees;
  for (const auto& g : generators) {
    require_same_modulus(p, g.modulus());
    const auto d = total_degree_set(p_representative(g));
    degrees.insert(d.begin(), d.end());
  }
  return Clonoid(close(degrees, p));
}

inline bool member_poly(const Clonoid& c, const Polynomial& f) {
  require_same_modulus(c.modulus(), f.modulus());
  for (auto d : total_degree_set(p_representative(f))) {
    if (!c.mask().contains(d)) return false;
  }
  return true;
}

inline bool member_table(const Clonoid& c, const FunctionTable& t) {
  require_same_modulus(c.modulus(), t.modulus());
  return member_poly(c, interpolate(t));
}

/// Join D1 + D2, realized as the union of masks.
inline Clonoid sum(const Clonoid& a, const Clonoid& b) { return Clonoid(union_of(a.mask(), b.mask())); }

inline Clonoid intersect(const Clonoid& a, const Clonoid& b) { return Clonoid(intersect(a.mask(), b.mask())); }

inline bool is_finitely_generated(const Clonoid& c) { return c.mask().is_finite(); }

/// C(M) is closed under composition iff M ⊆ {0,1}, M = N_0, or
/// M = {1 + tm} for a divisor m of p-1.
inline bool is_iterative_algebra(const Clonoid& c) {
  const auto& m = c.mask();
  const auto& p = m.modulus();
  bool within_01 = true;
  for (std::uint32_t r = 1; r <= m.period(); ++r) {
    const auto& b = m.bound(r);
    if (b.is_empty()) continue;
    if (!(r == 1 && b.is_finite() && b.sup() == 1)) within_01 = false;
  }
  if (within_01) return true;
  if (m == full_n0(p)) return true;
  for (auto d : divisors(m.period())) {
    if (m == arithmetic_progression(p, d)) return true;
  }
  return false;
}

/// A linearly closed iterative algebra is a clone iff it holds the projections, i.e. 1 ∈ M.
inline bool is_clone_with_plus(const Clonoid& c) { return is_iterative_algebra(c) && c.mask().contains(1); }

namespace detail {
inline std::vector<Clonoid> sorted_unique(std::vector<Clonoid> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}
}  // namespace detail

inline std::vector<Clonoid> enumerate_iterative_algebras(PrimeModulus p) {
  std::vector<Clonoid> out;
  for (bool zero : {false, true}) {
    out.emplace_back(PMinorSubset(p).with_zero(zero));
    out.emplace_back(close({1}, p).with_zero(zero));
  }
  out.emplace_back(full_n0(p));
  for (auto m : divisors(p.value() - 1)) out.emplace_back(arithmetic_progression(p, m));
  return detail::sorted_unique(std::move(out));
}

inline std::vector<Clonoid> enumerate_clones(PrimeModulus p) {
  std::vector<Clonoid> out;
  out.emplace_back(close({1}, p));
  out.emplace_back(close({0, 1}, p));
  out.emplace_back(full_n0(p));
  for (auto m : divisors(p.value() - 1)) out.emplace_back(arithmetic_progression(p, m));
  return detail::sorted_unique(std::move(out));
}

/// Exponent vectors (length n, entries <= p-1) of reduced monomials in
/// x1..xn whose total degree lies in the mask, in table index order.
inline std::vector<Monomial> reduced_monomials(const PMinorSubset& mask, std::uint32_t arity) {
  const auto& p = mask.modulus();
  std::vector<Monomial> out;
  std::vector<Residue> exps(arity, 0);
  const std::size_t count = table_size(p, arity);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t deg = 0;
    std::vector<Monomial::Factor> f;
    for (std::uint32_t j = 0; j < arity; ++j) {
      deg += exps[j];
      f.emplace_back(j + 1, exps[j]);
    }
    if (mask.contains(deg)) out.emplace_back(std::move(f));
    next_point(p, exps);
  }
  return out;
}

}  // namespace lcc
