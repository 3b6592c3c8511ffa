#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lcc/clonoid.hpp"
#include "lcc/oracle.hpp"
#include "lcc/pminor.hpp"
#include "lcc/poly.hpp"
#include "lcc/tables.hpp"

namespace lcc {

/// Element (u, v) of Z_p x Z_p.
using Pair = std::pair<Residue, Residue>;

/// Table of a function (Z_p^2)^n -> Z_p^2. A pair (x, y) is the base-p^2
/// digit x*p + y, and argument 1 is the most significant digit.
class PairFunctionTable {
 public:
  PairFunctionTable(PrimeModulus p, std::uint32_t arity, std::vector<Pair> values)
      : p_(p), arity_(arity), values_(std::move(values)) {
    if (arity_ == 0) throw std::invalid_argument("pair table arity must be at least 1");
    if (values_.size() != size_for(p_, arity_)) throw std::invalid_argument("pair table has the wrong length");
    for (const auto& [u, v] : values_) {
      if (u >= p_.value() || v >= p_.value()) throw std::invalid_argument("pair table value out of range");
    }
  }

  static std::size_t size_for(const PrimeModulus& p, std::uint32_t arity) {
    return static_cast<std::size_t>(checked_power(p.value(), 2 * std::uint64_t{arity}, kMaxTableEntries));
  }

  const PrimeModulus& modulus() const noexcept { return p_; }
  std::uint32_t arity() const noexcept { return arity_; }
  std::size_t size() const noexcept { return values_.size(); }
  const Pair& operator[](std::size_t i) const { return values_[i]; }
  std::span<const Pair> values() const noexcept { return values_; }

  std::size_t encode(std::span<const Residue> xs, std::span<const Residue> ys) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) idx = (idx * p_.value() + xs[i]) * p_.value() + ys[i];
    return idx;
  }

  friend bool operator==(const PairFunctionTable& a, const PairFunctionTable& b) {
    return a.p_ == b.p_ && a.arity_ == b.arity_ && a.values_ == b.values_;
  }

 private:
  PrimeModulus p_;
  std::uint32_t arity_;
  std::vector<Pair> values_;
};

/// Splits a pair-domain index into the x and y coordinate vectors.
inline void decode_pair_point(const PrimeModulus& p, std::size_t index, std::span<Residue> xs, std::span<Residue> ys) {
  for (std::size_t i = xs.size(); i-- > 0;) {
    ys[i] = static_cast<Residue>(index % p.value());
    index /= p.value();
    xs[i] = static_cast<Residue>(index % p.value());
    index /= p.value();
  }
}

/// ((x1,y1),...,(xn,yn)) -> (l1(x) + f(y), l2(y)).
struct EmbeddedFunction {
  std::uint32_t arity;
  LinearForm l1;
  LinearForm l2;
  Polynomial f;
};

inline PairFunctionTable embed(const EmbeddedFunction& e) {
  const auto& p = e.f.modulus();
  require_same_modulus(p, e.l1.modulus());
  require_same_modulus(p, e.l2.modulus());
  if (e.arity == 0 || e.l1.max_index() > e.arity || e.l2.max_index() > e.arity || e.f.max_index() > e.arity) {
    throw std::invalid_argument("embed: components exceed arity " + std::to_string(e.arity));
  }
  const auto ftable = evaluate(e.f, e.arity);
  const std::size_t n = PairFunctionTable::size_for(p, e.arity);
  std::vector<Pair> out(n);
  std::vector<Residue> xs(e.arity), ys(e.arity);
  for (std::size_t i = 0; i < n; ++i) {
    decode_pair_point(p, i, xs, ys);
    out[i] = {p.add(e.l1.evaluate(xs), ftable.at(ys)), e.l2.evaluate(ys)};
  }
  return PairFunctionTable(p, e.arity, std::move(out));
}

/// Pair projection Pi_j^n.
inline PairFunctionTable pair_projection(PrimeModulus p, std::uint32_t arity, std::uint32_t j) {
  LinearForm l(p);
  l.set(j, 1);
  return embed({arity, l, l, Polynomial(p)});
}

/// Componentwise addition ⊕ of arity 2.
inline PairFunctionTable pair_plus(PrimeModulus p) {
  LinearForm l(p, {{1, 1}, {2, 1}});
  return embed({2, l, l, Polynomial(p)});
}

/// g(f_1, ..., f_n) pointwise.
inline PairFunctionTable compose_pair(const PairFunctionTable& g, std::span<const PairFunctionTable> fs) {
  if (fs.size() != g.arity()) throw std::invalid_argument("compose_pair: argument count mismatch");
  const auto& p = g.modulus();
  const auto m = fs[0].arity();
  for (const auto& f : fs) {
    require_same_modulus(p, f.modulus());
    if (f.arity() != m) throw std::invalid_argument("compose_pair: argument arity mismatch");
  }
  std::vector<Pair> out(fs[0].size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t idx = 0;
    for (const auto& f : fs) idx = (idx * p.value() + f[i].first) * p.value() + f[i].second;
    out[i] = g[idx];
  }
  return PairFunctionTable(p, m, std::move(out));
}

/// l(k_1, ..., k_n) for linear l and linear k_i.
inline LinearForm compose_linear(const LinearForm& l, std::span<const LinearForm> ks) {
  const auto& p = l.modulus();
  LinearForm out(p);
  for (const auto& [var, c] : l.coefficients()) {
    if (var > ks.size()) throw std::invalid_argument("compose_linear: too few arguments");
    for (const auto& [v2, c2] : ks[var - 1].coefficients()) out.set(v2, p.add(out.coefficient(v2), p.mul(c, c2)));
  }
  return out;
}

/// Symbolic form of g(f_1, ..., f_n) inside phi(C): with
/// g = (k1(x) + g'(y), k2(y)) and f_i = (l_i(x) + h_i(y), l'_i(y)) the result is
/// (k1(l)(x) + [k1(h) + g'(l')](y), k2(l')(y)).
inline EmbeddedFunction compose_embedded(const EmbeddedFunction& g, std::span<const EmbeddedFunction> fs) {
  if (fs.size() != g.arity) throw std::invalid_argument("compose_embedded: argument count mismatch");
  const auto m = fs[0].arity;
  std::vector<LinearForm> ls, lps;
  std::vector<Polynomial> lp_polys;
  std::vector<VarIndex> positions;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].arity != m) throw std::invalid_argument("compose_embedded: argument arity mismatch");
    ls.push_back(fs[i].l1);
    lps.push_back(fs[i].l2);
    lp_polys.push_back(fs[i].l2.to_polynomial());
    positions.push_back(static_cast<VarIndex>(i + 1));
  }
  Polynomial fpart = compose_at(g.f, positions, lp_polys);
  for (const auto& [var, c] : g.l1.coefficients()) fpart = add(fpart, scale(c, fs[var - 1].f));
  return {m, compose_linear(g.l1, ls), compose_linear(g.l2, lps), fpart};
}

/// (l1, l2, f) recovered from a pair table, if it has the shape of phi(·):
/// f = U(0, y), l1(x) = U(x, 0) - f(0), l2 = V(0, y), and the table must
/// agree with (l1(x) + f(y), l2(y)) everywhere with l1, l2 linear.
inline std::optional<EmbeddedFunction> decompose(const PairFunctionTable& t) {
  const auto& p = t.modulus();
  const auto n = t.arity();
  const std::size_t width = table_size(p, n);
  std::vector<Residue> zeros(n, 0), pt(n, 0);
  std::vector<Residue> fvals(width), l1vals(width), l2vals(width);
  for (std::size_t i = 0; i < width; ++i) {
    fvals[i] = t[t.encode(zeros, pt)].first;
    l2vals[i] = t[t.encode(zeros, pt)].second;
    l1vals[i] = t[t.encode(pt, zeros)].first;
    next_point(p, pt);
  }
  const Residue f0 = fvals[0];
  for (auto& v : l1vals) v = p.sub(v, f0);

  const Polynomial l1poly = interpolate(FunctionTable(p, n, l1vals));
  const Polynomial l2poly = interpolate(FunctionTable(p, n, l2vals));
  for (const auto* lp : {&l1poly, &l2poly}) {
    for (const auto& [m, c] : lp->terms()) {
      if (m.total_degree() != 1) return std::nullopt;
    }
  }
  EmbeddedFunction e{n, LinearForm::from_polynomial(l1poly), LinearForm::from_polynomial(l2poly),
                     interpolate(FunctionTable(p, n, fvals))};
  std::vector<Residue> xs(n), ys(n);
  for (std::size_t i = 0; i < t.size(); ++i) {
    decode_pair_point(p, i, xs, ys);
    const Pair want{p.add(l1vals[encode_point(p, xs)], fvals[encode_point(p, ys)]), l2vals[encode_point(p, ys)]};
    if (t[i] != want) return std::nullopt;
  }
  return e;
}

/// Membership of a pair table in phi(C), delegated to member_poly on the f-part.
inline bool member_phi(const Clonoid& c, const PairFunctionTable& t) {
  const auto e = decompose(t);
  return e && member_poly(c, e->f);
}

/// Random member of C of the given arity: a random combination of the
/// reduced monomials whose total degree lies in the mask.
template <class Rng>
Polynomial random_member(const Clonoid& c, std::uint32_t arity, Rng& rng) {
  const auto& p = c.modulus();
  std::uniform_int_distribution<Residue> coeff(0, p.value() - 1);
  Polynomial f(p);
  for (const auto& m : reduced_monomials(c.mask(), arity)) f.accumulate(m, coeff(rng));
  return f;
}

template <class Rng>
LinearForm random_linear_form(PrimeModulus p, std::uint32_t arity, Rng& rng) {
  std::uniform_int_distribution<Residue> coeff(0, p.value() - 1);
  LinearForm l(p);
  for (VarIndex i = 1; i <= arity; ++i) l.set(i, coeff(rng));
  return l;
}

template <class Rng>
EmbeddedFunction random_embedded(const Clonoid& c, std::uint32_t arity, Rng& rng) {
  const auto& p = c.modulus();
  return {arity, random_linear_form(p, arity, rng), random_linear_form(p, arity, rng), random_member(c, arity, rng)};
}

struct ClosureReport {
  std::uint64_t samples = 0;
  std::uint64_t projection_checks = 0;
  std::uint64_t failures = 0;
  bool plus_member = false;
  std::string first_failure;

  bool passed() const noexcept { return failures == 0 && plus_member; }
};

/// Checks on samples that phi(C) is a clone containing ⊕: projections and ⊕
/// are members, and a composition of sampled members equals the embedding
/// of the symbolic composition, whose f-part lies in C.
inline ClosureReport closure_check(const Clonoid& c, std::uint64_t samples, std::uint32_t arity_bound,
                                   std::uint64_t seed = 1) {
  if (arity_bound == 0) throw std::invalid_argument("closure_check: arity bound must be positive");
  const auto& p = c.modulus();
  ClosureReport rep;
  auto fail = [&](const std::string& why) {
    if (rep.failures++ == 0) rep.first_failure = why;
  };
  for (std::uint32_t n = 1; n <= arity_bound; ++n) {
    for (std::uint32_t j = 1; j <= n; ++j) {
      ++rep.projection_checks;
      if (!member_phi(c, pair_projection(p, n, j))) fail("projection " + std::to_string(j) + "/" + std::to_string(n));
    }
  }
  rep.plus_member = arity_bound >= 2 ? member_phi(c, pair_plus(p)) : true;
  if (!rep.plus_member) fail("plus");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> arity(1, arity_bound);
  for (std::uint64_t s = 0; s < samples; ++s) {
    ++rep.samples;
    const auto n = arity(rng), m = arity(rng);
    const auto g = random_embedded(c, n, rng);
    std::vector<EmbeddedFunction> fs;
    std::vector<PairFunctionTable> ftables;
    for (std::uint32_t i = 0; i < n; ++i) {
      fs.push_back(random_embedded(c, m, rng));
      ftables.push_back(embed(fs.back()));
    }
    const auto composed = compose_pair(embed(g), ftables);
    const auto symbolic = compose_embedded(g, fs);
    if (!(composed == embed(symbolic))) {
      fail("sample " + std::to_string(s) + ": table composition differs from symbolic composition");
    } else if (!member_poly(c, symbolic.f)) {
      fail("sample " + std::to_string(s) + ": composed f-part " + format(symbolic.f) + " not in C");
    } else if (!member_phi(c, composed)) {
      fail("sample " + std::to_string(s) + ": composed table not recognized as a member");
    }
  }
  return rep;
}

/// Reduced monomial of total degree d in as few variables as possible:
/// x1^(p-1) ... x_q^(p-1) x_{q+1}^r.
inline Polynomial compact_monomial(PrimeModulus p, std::uint64_t d) {
  const std::uint64_t period = p.value() - 1;
  std::vector<Monomial::Factor> f;
  VarIndex v = 1;
  for (; d >= period; d -= period) f.emplace_back(v++, static_cast<std::uint32_t>(period));
  if (d > 0) f.emplace_back(v, static_cast<std::uint32_t>(d));
  return Polynomial::monomial(p, Monomial(std::move(f)));
}

struct ChainLink {
  Polynomial separator;
  std::uint64_t degree = 0;
  bool in_upper = false;        // member_poly(C_{i+1}, separator)
  bool in_lower = true;         // member_poly(C_i, separator)
  bool table_checked = false;   // pair-table membership evaluated
  bool table_in_upper = false;  // image passes phi(C_{i+1})
  bool table_in_lower = true;   // image passes phi(C_i)
  bool strict = false;          // M_i ⊊ M_{i+1}

  bool verified() const noexcept {
    return strict && in_upper && !in_lower && (!table_checked || (table_in_upper && !table_in_lower));
  }
};

struct ChainReport {
  std::uint32_t p = 0;
  std::uint32_t m1 = 1, m2 = 2;
  std::vector<Clonoid> chain;
  std::vector<bool> finitely_generated;
  std::vector<ChainLink> links;

  bool passed() const {
    for (bool fg : finitely_generated) {
      if (fg) return false;
    }
    for (const auto& l : links) {
      if (!l.verified()) return false;
    }
    return links.size() + 1 == chain.size();
  }
};

/// The masks M(0) ⊊ M(1) ⊊ ... ⊊ M(depth) of chain_mask(·, m1, m2); each
/// C(M(i)) is not finitely generated, and phi carries the chain to clones
/// on Z_p x Z_p. Each link carries a separating member of degree
/// m2 + (i+1)(p-1); its embedded image is checked as a pair table when the
/// table has at most `table_budget` entries.
inline ChainReport ascending_chain(PrimeModulus p, std::uint32_t depth, std::uint32_t m1 = 1, std::uint32_t m2 = 2,
                                   std::uint64_t table_budget = kDefaultBudget) {
  if (p.value() == 2) throw std::invalid_argument("ascending_chain needs p > 2");
  ChainReport rep;
  rep.p = p.value();
  rep.m1 = m1;
  rep.m2 = m2;
  for (std::uint32_t i = 0; i <= depth; ++i) {
    rep.chain.emplace_back(chain_mask(p, i, m1, m2));
    rep.finitely_generated.push_back(is_finitely_generated(rep.chain.back()));
  }
  for (std::uint32_t i = 0; i < depth; ++i) {
    const auto& lower = rep.chain[i];
    const auto& upper = rep.chain[i + 1];
    ChainLink link{Polynomial(p)};
    link.degree = m2 + std::uint64_t{i + 1} * (p.value() - 1);
    link.separator = compact_monomial(p, link.degree);
    link.strict = is_subset(lower.mask(), upper.mask()) && !(lower.mask() == upper.mask());
    link.in_upper = member_poly(upper, link.separator);
    link.in_lower = member_poly(lower, link.separator);
    const auto n = std::max<VarIndex>(1, link.separator.max_index());
    std::uint64_t entries = 0;
    try {
      entries = checked_power(p.value(), 2 * std::uint64_t{n}, table_budget);
    } catch (const std::length_error&) {
      entries = 0;
    }
    if (entries != 0) {
      const auto image = embed({n, LinearForm(p), LinearForm(p), link.separator});
      link.table_checked = true;
      link.table_in_upper = member_phi(upper, image);
      link.table_in_lower = member_phi(lower, image);
    }
    rep.links.push_back(std::move(link));
  }
  return rep;
}

// --- serialization: "p n" then p^(2n) pairs "u,v" --------------------------

inline std::string serialize(const PairFunctionTable& t) {
  std::string s = std::to_string(t.modulus().value()) + ' ' + std::to_string(t.arity()) + '\n';
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0) s += ' ';
    s += std::to_string(t[i].first) + ',' + std::to_string(t[i].second);
  }
  s += '\n';
  return s;
}

inline PairFunctionTable deserialize_pair_table(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::uint64_t p = 0, n = 0;
  if (!(in >> p >> n)) throw std::invalid_argument("pair table: expected header \"p n\"");
  PrimeModulus mod(static_cast<std::uint32_t>(p));
  std::vector<Pair> values;
  std::string tok;
  while (in >> tok) {
    const auto comma = tok.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("pair table: expected \"u,v\", got " + tok);
    values.emplace_back(static_cast<Residue>(std::stoul(tok.substr(0, comma))),
                        static_cast<Residue>(std::stoul(tok.substr(comma + 1))));
  }
  return PairFunctionTable(mod, static_cast<std::uint32_t>(n), std::move(values));
}

}  // namespace lcc
