#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcc/clonoid.hpp"
#include "lcc/poly.hpp"
#include "lcc/tables.hpp"

namespace lcc {

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

/// Default composition budget; CLONOID_BUDGET overrides it.
inline std::uint64_t default_budget() {
  if (const char* env = std::getenv("CLONOID_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("CLONOID_BUDGET is not a number: ") + env);
    }
  }
  return kDefaultBudget;
}

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A subspace of the arity-n functions Z_p^n -> Z_p, kept as rows in echelon
/// form: each row has a pivot entry 1 and zeros at every earlier row's pivot.
class Fragment {
 public:
  Fragment(PrimeModulus p, std::uint32_t arity) : p_(p), arity_(arity), width_(table_size(p, arity)) {}

  const PrimeModulus& modulus() const noexcept { return p_; }
  std::uint32_t arity() const noexcept { return arity_; }
  std::size_t dimension() const noexcept { return rows_.size(); }
  bool is_full() const noexcept { return rows_.size() == width_; }

  /// Adds a vector to the spanning set; true if the dimension grew.
  bool insert(std::span<const Residue> values) {
    check_width(values.size());
    std::vector<Residue> v(values.begin(), values.end());
    reduce(v);
    std::size_t pivot = 0;
    while (pivot < width_ && v[pivot] == 0) ++pivot;
    if (pivot == width_) return false;
    const Residue inv = p_.inv(v[pivot]);
    for (auto& x : v) x = p_.mul(x, inv);
    rows_.push_back(std::move(v));
    pivots_.push_back(pivot);
    return true;
  }
  bool insert(const FunctionTable& t) {
    check_table(t);
    return insert(t.values());
  }

  bool contains(std::span<const Residue> values) const {
    check_width(values.size());
    std::vector<Residue> v(values.begin(), values.end());
    reduce(v);
    for (Residue x : v) {
      if (x != 0) return false;
    }
    return true;
  }
  bool contains(const FunctionTable& t) const {
    check_table(t);
    return contains(t.values());
  }

  std::vector<FunctionTable> basis() const {
    std::vector<FunctionTable> out;
    for (const auto& r : rows_) out.emplace_back(p_, arity_, r);
    return out;
  }

  /// Every table in the span, by enumerating coefficient vectors.
  std::vector<FunctionTable> elements(std::uint64_t limit = kDefaultBudget) const {
    const auto count = checked_power(p_.value(), rows_.size(), limit);
    std::vector<FunctionTable> out;
    out.reserve(count);
    std::vector<Residue> coeffs(rows_.size(), 0);
    const auto rows = basis();
    for (std::uint64_t i = 0; i < count; ++i) {
      if (rows.empty()) {
        out.push_back(FunctionTable::zero(p_, arity_));
      } else {
        out.push_back(linear_combination(coeffs, rows));
      }
      next_point(p_, coeffs);
    }
    return out;
  }

 private:
  void reduce(std::vector<Residue>& v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Residue c = v[pivots_[r]];
      if (c == 0) continue;
      const Residue neg = p_.neg(c);
      const auto& row = rows_[r];
      for (std::size_t k = pivots_[r]; k < width_; ++k) {
        if (row[k] != 0) v[k] = p_.add(v[k], p_.mul(neg, row[k]));
      }
    }
  }
  void check_width(std::size_t n) const {
    if (n != width_) throw std::invalid_argument("fragment: vector length mismatch");
  }
  void check_table(const FunctionTable& t) const {
    require_same_modulus(p_, t.modulus());
    if (t.arity() != arity_) {
      throw std::invalid_argument("fragment has arity " + std::to_string(arity_) + ", table has " +
                                  std::to_string(t.arity()));
    }
  }

  PrimeModulus p_;
  std::uint32_t arity_;
  std::size_t width_;
  std::vector<std::vector<Residue>> rows_;
  std::vector<std::size_t> pivots_;
};

namespace detail {

/// Enumerates g(l_1, ..., l_k) over all k-tuples of n-ary linear forms for
/// one generator g of arity k = max(1, maxInd g). Tuples are visited in a
/// fixed scrambled order so that early exits see varied compositions first.
class CompositionEnumerator {
 public:
  CompositionEnumerator(const Polynomial& g, std::uint32_t arity)
      : p_(g.modulus()),
        arity_(arity),
        k_(std::max<VarIndex>(1, g.max_index())),
        gtable_(evaluate(g, k_)),
        points_(table_size(p_, arity)),
        forms_(points_) {
    // forms_[f][x]: value of linear form number f (coefficients = digits of f) at point x.
    lf_values_.assign(forms_ * points_, 0);
    std::vector<Residue> coeffs(arity, 0), point(arity, 0);
    for (std::size_t f = 0; f < forms_; ++f) {
      decode_point(p_, f, coeffs);
      std::fill(point.begin(), point.end(), 0);
      for (std::size_t x = 0; x < points_; ++x) {
        Residue acc = 0;
        for (std::uint32_t i = 0; i < arity; ++i) acc = p_.add(acc, p_.mul(coeffs[i], point[i]));
        lf_values_[f * points_ + x] = acc;
        next_point(p_, point);
      }
    }
    total_ = checked_power(forms_, k_, UINT64_MAX / 4);
    stride_ = 0x9E3779B97F4A7C15ULL % total_;
    while (stride_ == 0 || std::gcd(stride_, total_) != 1) ++stride_;
  }

  std::uint64_t count() const noexcept { return total_; }

  /// Table of composition number i (0 <= i < count()).
  void table(std::uint64_t i, std::vector<Residue>& out) const {
    std::uint64_t t = static_cast<std::uint64_t>((static_cast<unsigned __int128>(i) * stride_) % total_);
    std::vector<std::size_t> form(k_);
    for (std::uint32_t j = k_; j-- > 0;) {
      form[j] = static_cast<std::size_t>(t % forms_);
      t /= forms_;
    }
    out.resize(points_);
    for (std::size_t x = 0; x < points_; ++x) {
      std::size_t idx = 0;
      for (std::uint32_t j = 0; j < k_; ++j) idx = idx * p_.value() + lf_values_[form[j] * points_ + x];
      out[x] = gtable_[idx];
    }
  }

 private:
  PrimeModulus p_;
  std::uint32_t arity_;
  std::uint32_t k_;
  FunctionTable gtable_;
  std::size_t points_;
  std::size_t forms_;
  std::vector<Residue> lf_values_;
  std::uint64_t total_ = 1;
  std::uint64_t stride_ = 1;
};

inline std::uint64_t composition_count(std::span<const Polynomial> generators, std::uint32_t arity) {
  std::uint64_t total = 0;
  for (const auto& g : generators) {
    const std::uint64_t forms = table_size(g.modulus(), arity);
    total += checked_power(forms, std::max<VarIndex>(1, g.max_index()), UINT64_MAX / 4);
  }
  return total;
}

inline void check_budget(std::span<const Polynomial> generators, std::uint32_t arity, std::uint64_t budget) {
  const auto need = composition_count(generators, arity);
  if (need > budget) {
    throw BudgetExceeded("oracle needs " + std::to_string(need) + " compositions, budget is " +
                         std::to_string(budget));
  }
}

}  // namespace detail

/// Arity-n part of the linearly closed clonoid generated by the
/// generators: the span of all g(l_1, ..., l_k) with l_j n-ary linear forms.
/// That set is already closed under both compositions (sums of sums; linear
/// forms composed into linear forms), so one pass plus elimination suffices.
inline Fragment fragment(std::span<const Polynomial> generators, std::uint32_t arity, PrimeModulus p,
                         std::uint64_t budget = kDefaultBudget) {
  if (arity == 0) throw std::invalid_argument("fragment arity must be at least 1");
  for (const auto& g : generators) require_same_modulus(p, g.modulus());
  detail::check_budget(generators, arity, budget);
  Fragment frag(p, arity);
  std::vector<Residue> buf;
  for (const auto& g : generators) {
    detail::CompositionEnumerator en(g, arity);
    for (std::uint64_t i = 0; i < en.count() && !frag.is_full(); ++i) {
      en.table(i, buf);
      frag.insert(buf);
    }
  }
  return frag;
}

inline bool fragment_contains(const Fragment& f, const FunctionTable& t) { return f.contains(t); }

/// Whether every target lies in the arity-n span of the generators. Builds
/// the span incrementally and stops as soon as all targets are inside; a
/// negative answer always comes from the complete span.
inline bool span_contains_all(std::span<const Polynomial> generators, std::span<const FunctionTable> targets,
                              std::uint32_t arity, PrimeModulus p, std::uint64_t budget = kDefaultBudget) {
  for (const auto& t : targets) {
    if (t.arity() != arity) throw std::invalid_argument("span_contains_all: target arity mismatch");
  }
  detail::check_budget(generators, arity, budget);
  Fragment frag(p, arity);
  std::size_t next = 0;
  auto advance = [&] {
    while (next < targets.size() && frag.contains(targets[next])) ++next;
    return next == targets.size();
  };
  if (advance()) return true;
  std::vector<Residue> buf;
  for (const auto& g : generators) {
    detail::CompositionEnumerator en(g, arity);
    for (std::uint64_t i = 0; i < en.count(); ++i) {
      en.table(i, buf);
      if (frag.insert(buf) && advance()) return true;
    }
  }
  return advance();
}

struct CrossValidationReport {
  std::uint32_t arity = 0;
  std::size_t dimension = 0;
  bool exhaustive = false;
  std::uint64_t tables_checked = 0;
  std::uint64_t disagreements = 0;
  std::optional<FunctionTable> counterexample;
  bool counterexample_in_span = false;

  bool agree() const noexcept { return disagreements == 0; }
};

/// Largest number of arity-n tables (p^(p^n)) enumerated exhaustively.
inline constexpr std::uint64_t kExhaustiveTableLimit = 1'000'000;

/// Checks span membership against mask membership for every arity-n table
/// when that is feasible, otherwise for the basis, near-basis perturbations
/// and `trials` random tables.
inline CrossValidationReport cross_validate(std::span<const Polynomial> generators, std::uint32_t arity,
                                            PrimeModulus p, std::uint64_t trials = 1000, std::uint64_t seed = 1,
                                            std::uint64_t budget = kDefaultBudget) {
  CrossValidationReport rep;
  rep.arity = arity;
  const Fragment frag = fragment(generators, arity, p, budget);
  const Clonoid c = generate(generators, p);
  rep.dimension = frag.dimension();

  auto check = [&](const FunctionTable& t) {
    ++rep.tables_checked;
    const bool in_span = frag.contains(t);
    if (in_span != member_table(c, t)) {
      if (rep.disagreements++ == 0) {
        rep.counterexample = t;
        rep.counterexample_in_span = in_span;
      }
    }
  };

  const std::size_t width = table_size(p, arity);
  std::uint64_t all = 0;
  try {
    all = checked_power(p.value(), width, kExhaustiveTableLimit);
  } catch (const std::length_error&) {
    all = 0;
  }
  if (all != 0) {
    rep.exhaustive = true;
    std::vector<Residue> values(width, 0);
    for (std::uint64_t i = 0; i < all; ++i) {
      check(FunctionTable(p, arity, values));
      next_point(p, values);
    }
    return rep;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Residue> digit(0, p.value() - 1);
  std::uniform_int_distribution<std::size_t> position(0, width - 1);
  check(FunctionTable::zero(p, arity));
  for (const auto& b : frag.basis()) {
    check(b);
    std::vector<Residue> v(b.values().begin(), b.values().end());
    const auto k = position(rng);
    v[k] = p.add(v[k], 1);
    check(FunctionTable(p, arity, std::move(v)));
  }
  for (std::uint64_t i = 0; i < trials; ++i) {
    std::vector<Residue> v(width);
    for (auto& x : v) x = digit(rng);
    check(FunctionTable(p, arity, std::move(v)));
  }
  return rep;
}

}  // namespace lcc
