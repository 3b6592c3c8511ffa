#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcc/clonoid.hpp"
#include "lcc/oracle.hpp"
#include "lcc/pminor.hpp"
#include "lcc/tables.hpp"

namespace lcc {

/// pi_a : x -> a*x, an automorphism of (Z_p, +).
class Automorphism {
 public:
  Automorphism(PrimeModulus p, Residue a) : p_(p), a_(a % p.value()) {
    if (a_ == 0) throw std::invalid_argument("automorphism factor must be nonzero");
  }
  const PrimeModulus& modulus() const noexcept { return p_; }
  Residue factor() const noexcept { return a_; }
  Residue operator()(Residue x) const noexcept { return p_.mul(a_, x); }

 private:
  PrimeModulus p_;
  Residue a_;
};

/// Cyclic subgroup of Aut(Z_p, +) generated by pi_a.
struct AutomorphismSubgroup {
  PrimeModulus modulus;
  Residue generator;
  std::vector<Residue> elements;  // sorted

  std::size_t order() const noexcept { return elements.size(); }
  bool contains(Residue a) const { return std::binary_search(elements.begin(), elements.end(), a); }
};

inline AutomorphismSubgroup generated_subgroup(PrimeModulus p, Residue a) {
  Automorphism pi(p, a);
  std::vector<Residue> elems;
  Residue x = 1;
  do {
    elems.push_back(x);
    x = p.mul(x, pi.factor());
  } while (x != 1);
  std::sort(elems.begin(), elems.end());
  return {p, pi.factor(), std::move(elems)};
}

/// f(a x_1, ..., a x_n) = a f(x_1, ..., x_n) at every point.
inline bool preserves_automorphism(const FunctionTable& t, const Automorphism& pi) {
  require_same_modulus(t.modulus(), pi.modulus());
  const auto& p = t.modulus();
  std::vector<Residue> x(t.arity(), 0), ax(t.arity());
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) ax[j] = pi(x[j]);
    if (t.at(ax) != pi(t[i])) return false;
    next_point(p, x);
  }
  return true;
}

/// Preserves the unary relation {(0)}.
inline bool preserves_zero(const FunctionTable& t) { return t[0] == 0; }

inline bool preserves_subgroup(const FunctionTable& t, const AutomorphismSubgroup& r) {
  if (!preserves_zero(t)) return false;
  // Preserving the generator implies preserving its powers; checking all is cheap.
  for (Residue a : r.elements) {
    if (!preserves_automorphism(t, Automorphism(r.modulus, a))) return false;
  }
  return true;
}

/// One subgroup per divisor of p-1, generated by the smallest element of that order.
inline std::vector<AutomorphismSubgroup> subgroups(PrimeModulus p) {
  std::vector<AutomorphismSubgroup> out;
  for (auto s : divisors(p.value() - 1)) {
    for (Residue a = 1; a < p.value(); ++a) {
      if (multiplicative_order(p, a) == s) {
        out.push_back(generated_subgroup(p, a));
        break;
      }
    }
  }
  return out;
}

/// All arity-n tables preserving every pi in R and {(0)}, by exhaustive
/// filtering of the p^(p^n) candidates.
inline std::vector<FunctionTable> pol_fragment(const AutomorphismSubgroup& r, std::uint32_t arity,
                                               std::uint64_t budget = kDefaultBudget) {
  const auto& p = r.modulus;
  const std::size_t width = table_size(p, arity);
  std::uint64_t count = 0;
  try {
    count = checked_power(p.value(), width, budget);
  } catch (const std::length_error&) {
    throw BudgetExceeded("pol_fragment: p^(p^n) candidate tables exceed budget " + std::to_string(budget));
  }
  std::vector<FunctionTable> out;
  std::vector<Residue> values(width, 0);
  for (std::uint64_t i = 0; i < count; ++i) {
    FunctionTable t(p, arity, values);
    if (preserves_subgroup(t, r)) out.push_back(std::move(t));
    next_point(p, values);
  }
  return out;
}

/// Basis of the same space without enumeration: the conditions are linear,
/// a*x = x only at x = 0, so each nonzero orbit of R on Z_p^n contributes one
/// free value and the rest of the orbit follows from T(a x) = a T(x).
inline Fragment pol_subspace(const AutomorphismSubgroup& r, std::uint32_t arity) {
  const auto& p = r.modulus;
  const std::size_t width = table_size(p, arity);
  Fragment frag(p, arity);
  std::vector<bool> seen(width, false);
  seen[0] = true;
  std::vector<Residue> x(arity), ax(arity);
  for (std::size_t i = 1; i < width; ++i) {
    if (seen[i]) continue;
    std::vector<Residue> v(width, 0);
    decode_point(p, i, x);
    for (Residue a : r.elements) {
      for (std::size_t j = 0; j < arity; ++j) ax[j] = p.mul(a, x[j]);
      const auto idx = encode_point(p, ax);
      seen[idx] = true;
      v[idx] = a;
    }
    frag.insert(v);
  }
  return frag;
}

struct SubgroupMatch {
  AutomorphismSubgroup subgroup;
  std::optional<std::uint32_t> divisor;  // m with Pol-fragment = fragment of C({1 + t m})
  std::size_t pol_size = 0;
  bool contains_plus = false;
};

struct CorrespondenceReport {
  std::uint32_t p = 0;
  std::uint32_t arity = 0;
  bool exhaustive = false;
  std::vector<SubgroupMatch> matches;
  std::size_t mismatches = 0;
  bool bijective = false;
};

/// Matches each subgroup R of Aut(Z_p) to the progression masks {1 + t m},
/// m | p-1, by comparing the arity-n part of Pol(R ∪ {{(0)}}) with the
/// arity-n part of C({1 + t m}). No direction of the correspondence is
/// assumed: every divisor is tried.
inline CorrespondenceReport verify_subgroup_correspondence(PrimeModulus p, std::uint32_t arity,
                                                           std::uint64_t budget = kDefaultBudget) {
  CorrespondenceReport rep;
  rep.p = p.value();
  rep.arity = arity;
  const std::size_t width = table_size(p, arity);
  std::uint64_t all = 0;
  try {
    all = checked_power(p.value(), width, budget);
  } catch (const std::length_error&) {
    all = 0;
  }
  rep.exhaustive = all != 0;

  const auto divs = divisors(p.value() - 1);
  const auto subs = subgroups(p);

  // Plus (or the identity for unary tables) must sit in every matched pair.
  const auto plus = arity >= 2 ? evaluate(parse("x1 + x2", p), arity) : projection(p, 1, 1);

  if (rep.exhaustive) {
    std::vector<std::set<FunctionTable>> mask_sets(divs.size());
    std::vector<std::set<FunctionTable>> pol_sets(subs.size());
    std::vector<Residue> values(width, 0);
    for (std::uint64_t i = 0; i < all; ++i) {
      FunctionTable t(p, arity, values);
      for (std::size_t k = 0; k < divs.size(); ++k) {
        if (member_table(Clonoid(arithmetic_progression(p, divs[k])), t)) mask_sets[k].insert(t);
      }
      for (std::size_t k = 0; k < subs.size(); ++k) {
        if (preserves_subgroup(t, subs[k])) pol_sets[k].insert(t);
      }
      next_point(p, values);
    }
    for (std::size_t s = 0; s < subs.size(); ++s) {
      SubgroupMatch m{subs[s], std::nullopt, pol_sets[s].size(), pol_sets[s].count(plus) > 0};
      for (std::size_t k = 0; k < divs.size(); ++k) {
        if (pol_sets[s] == mask_sets[k]) {
          if (m.divisor) ++rep.mismatches;  // ambiguous at this arity
          m.divisor = divs[k];
        }
      }
      if (!m.divisor || !m.contains_plus) ++rep.mismatches;
      rep.matches.push_back(std::move(m));
    }
  } else {
    // Subspace comparison: equal dimension plus mutual containment of bases.
    std::vector<Fragment> mask_frags;
    for (auto d : divs) {
      Fragment f(p, arity);
      for (const auto& mono : reduced_monomials(arithmetic_progression(p, d), arity)) {
        f.insert(evaluate(Polynomial::monomial(p, mono), arity));
      }
      mask_frags.push_back(std::move(f));
    }
    for (const auto& sg : subs) {
      const Fragment pol = pol_subspace(sg, arity);
      for (const auto& b : pol.basis()) {
        if (!preserves_subgroup(b, sg)) ++rep.mismatches;
      }
      SubgroupMatch m{sg, std::nullopt, 0, pol.contains(plus)};
      for (std::size_t k = 0; k < divs.size(); ++k) {
        const auto& mf = mask_frags[k];
        if (mf.dimension() != pol.dimension()) continue;
        bool same = true;
        for (const auto& b : pol.basis()) same = same && mf.contains(b);
        if (same) {
          if (m.divisor) ++rep.mismatches;
          m.divisor = divs[k];
        }
      }
      if (!m.divisor || !m.contains_plus) ++rep.mismatches;
      rep.matches.push_back(std::move(m));
    }
  }

  std::set<std::uint32_t> used;
  for (const auto& m : rep.matches) {
    if (m.divisor) used.insert(*m.divisor);
  }
  rep.bijective = rep.mismatches == 0 && used.size() == subs.size() && subs.size() == divs.size();
  return rep;
}

}  // namespace lcc
