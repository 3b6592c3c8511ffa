#pragma once

// Hand-rolled generators and brute-force reference computations shared by
// the test binaries. Nothing here calls the library code it is checking.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "lcc/lcc.hpp"

namespace lcc::testing {

using Rng = std::mt19937_64;

inline std::uint64_t naive_pow(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  for (std::uint64_t i = 0; i < e; ++i) r = r * a % p;
  return r;
}

/// Value of f at a point, term by term with repeated multiplication.
inline Residue naive_eval(const Polynomial& f, const std::vector<Residue>& x) {
  const std::uint64_t p = f.modulus().value();
  std::uint64_t acc = 0;
  for (const auto& [m, c] : f.terms()) {
    std::uint64_t t = c;
    for (const auto& [var, e] : m.factors()) t = t * naive_pow(var <= x.size() ? x[var - 1] : 0, e, p) % p;
    acc = (acc + t) % p;
  }
  return static_cast<Residue>(acc);
}

/// All points of Z_p^n, first coordinate most significant.
inline std::vector<std::vector<Residue>> all_points(std::uint32_t p, std::uint32_t n) {
  std::vector<std::vector<Residue>> out{{}};
  for (std::uint32_t i = 0; i < n; ++i) {
    std::vector<std::vector<Residue>> next;
    for (const auto& pt : out) {
      for (Residue a = 0; a < p; ++a) {
        auto q = pt;
        q.push_back(a);
        next.push_back(std::move(q));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline std::vector<Residue> naive_table(const Polynomial& f, std::uint32_t n) {
  std::vector<Residue> v;
  for (const auto& pt : all_points(f.modulus().value(), n)) v.push_back(naive_eval(f, pt));
  return v;
}

/// Random polynomial in x1..x_vars; exponents up to max_exp (may exceed p-1).
inline Polynomial random_poly(Rng& rng, PrimeModulus p, std::uint32_t vars, std::uint32_t max_exp,
                              std::uint32_t max_terms) {
  std::uniform_int_distribution<std::uint32_t> nterms(0, max_terms), exp(0, max_exp), coef(1, p.value() - 1);
  Polynomial f(p);
  const auto k = nterms(rng);
  for (std::uint32_t t = 0; t < k; ++t) {
    std::vector<Monomial::Factor> fac;
    for (VarIndex v = 1; v <= vars; ++v) fac.emplace_back(v, exp(rng));
    f.accumulate(Monomial(std::move(fac)), coef(rng));
  }
  return f;
}

/// Random reduced polynomial with total degree at most max_deg.
inline Polynomial random_reduced(Rng& rng, PrimeModulus p, std::uint32_t vars, std::uint32_t max_deg,
                                 std::uint32_t max_terms) {
  std::uniform_int_distribution<std::uint32_t> nterms(1, max_terms), exp(0, p.value() - 1), coef(1, p.value() - 1);
  Polynomial f(p);
  const auto k = nterms(rng);
  for (std::uint32_t t = 0; t < k; ++t) {
    std::vector<Monomial::Factor> fac;
    std::uint32_t deg = 0;
    for (VarIndex v = 1; v <= vars; ++v) {
      auto e = exp(rng);
      if (deg + e > max_deg) e = max_deg - deg;
      deg += e;
      fac.emplace_back(v, e);
    }
    f.accumulate(Monomial(std::move(fac)), coef(rng));
  }
  return f;
}

/// Downward closure of a finite set under n -> n-(p-1) for n > p-1.
inline std::set<std::uint64_t> naive_close(std::set<std::uint64_t> s, std::uint64_t p) {
  std::vector<std::uint64_t> work(s.begin(), s.end());
  while (!work.empty()) {
    const auto n = work.back();
    work.pop_back();
    if (n > p - 1 && s.insert(n - (p - 1)).second) work.push_back(n - (p - 1));
  }
  return s;
}

inline bool is_p_minor(const std::set<std::uint64_t>& s, std::uint64_t p) { return naive_close(s, p) == s; }

/// Random finite mask with every element <= limit.
inline PMinorSubset random_mask(Rng& rng, PrimeModulus p, std::uint64_t limit) {
  const std::uint32_t period = p.value() - 1;
  std::vector<ClassBound> sups(period);
  for (std::uint32_t r = 1; r <= period; ++r) {
    std::vector<ClassBound> opts{ClassBound::empty()};
    for (std::uint64_t s = r; s <= limit; s += period) opts.push_back(ClassBound::finite(s));
    sups[r - 1] = opts[std::uniform_int_distribution<std::size_t>(0, opts.size() - 1)(rng)];
  }
  return PMinorSubset(p, std::uniform_int_distribution<int>(0, 1)(rng) == 1, std::move(sups));
}

/// Random mask that may have infinite classes.
inline PMinorSubset random_any_mask(Rng& rng, PrimeModulus p, std::uint64_t limit) {
  auto m = random_mask(rng, p, limit);
  for (std::uint32_t r = 1; r <= m.period(); ++r) {
    if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) m = m.with_bound(r, ClassBound::infinite());
  }
  return m;
}

/// Generators whose generated clonoid has the given finite-or-not mask, as
/// far as arity `arity` can see: x1*...*xs style monomials for each class
/// supremum (or the largest visible element), plus 1 when 0 is in the mask.
inline std::vector<Polynomial> generators_for(const PMinorSubset& m, std::uint32_t arity) {
  const auto& p = m.modulus();
  const std::uint64_t visible = std::uint64_t{arity} * (p.value() - 1);
  std::vector<Polynomial> gens;
  if (m.contains_zero()) gens.push_back(Polynomial::constant(p, 1));
  for (std::uint32_t r = 1; r <= m.period(); ++r) {
    const auto& b = m.bound(r);
    if (b.is_empty()) continue;
    std::uint64_t s = b.is_finite() ? b.sup() : r;
    if (b.is_infinite()) {
      while (s + m.period() <= visible) s += m.period();
    }
    if (s > visible) {
      s = r;
      while (s + m.period() <= visible) s += m.period();
    }
    // reduced monomial of degree s in as few variables as possible
    std::vector<Monomial::Factor> fac;
    VarIndex v = 1;
    std::uint64_t d = s;
    for (; d >= m.period() && d > 0; d -= m.period()) fac.emplace_back(v++, m.period());
    if (d > 0) fac.emplace_back(v, static_cast<std::uint32_t>(d));
    gens.push_back(Polynomial::monomial(p, Monomial(std::move(fac))));
  }
  return gens;
}

/// Gaussian elimination over Z_p: rank of a list of vectors.
inline std::size_t naive_rank(std::vector<std::vector<Residue>> rows, std::uint64_t p) {
  std::size_t rank = 0;
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    const auto inv = naive_pow(rows[rank][c], p - 2, p);
    for (auto& x : rows[rank]) x = static_cast<Residue>(x * inv % p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      const auto f = rows[r][c];
      for (std::size_t k = 0; k < cols; ++k) rows[r][k] = static_cast<Residue>((rows[r][k] + (p - f) * rows[rank][k]) % p);
    }
    ++rank;
  }
  return rank;
}

inline bool naive_in_span(std::vector<std::vector<Residue>> rows, const std::vector<Residue>& v, std::uint64_t p) {
  const auto r = naive_rank(rows, p);
  rows.push_back(v);
  return naive_rank(std::move(rows), p) == r;
}

}  // namespace lcc::testing
