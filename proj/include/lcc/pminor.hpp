#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcc/prime.hpp"

namespace lcc {

/// Supremum of a p-minor subset inside one residue class mod p-1.
/// Ordered Empty < Finite(s) < Infinite.
class ClassBound {
 public:
  enum class Kind : std::uint8_t { Empty = 0, Finite = 1, Infinite = 2 };

  constexpr ClassBound() = default;
  static constexpr ClassBound empty() { return {}; }
  static constexpr ClassBound infinite() { return ClassBound(Kind::Infinite, 0); }
  static constexpr ClassBound finite(std::uint64_t s) { return ClassBound(Kind::Finite, s); }

  constexpr Kind kind() const noexcept { return kind_; }
  constexpr bool is_empty() const noexcept { return kind_ == Kind::Empty; }
  constexpr bool is_finite() const noexcept { return kind_ == Kind::Finite; }
  constexpr bool is_infinite() const noexcept { return kind_ == Kind::Infinite; }
  constexpr std::uint64_t sup() const noexcept { return sup_; }

  /// n lies in the class and below the bound (class membership is the caller's job).
  constexpr bool admits(std::uint64_t n) const noexcept {
    return kind_ == Kind::Infinite || (kind_ == Kind::Finite && n <= sup_);
  }

  friend constexpr bool operator==(const ClassBound&, const ClassBound&) = default;
  friend constexpr std::strong_ordering operator<=>(const ClassBound& a, const ClassBound& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    return a.sup_ <=> b.sup_;
  }

 private:
  constexpr ClassBound(Kind k, std::uint64_t s) : kind_(k), sup_(s) {}
  Kind kind_ = Kind::Empty;
  std::uint64_t sup_ = 0;
};

/// Finite encoding of a p-minor subset M of N_0: whether 0 is in M, plus for
/// each residue class r in {1, ..., p-1} (mod p-1) the supremum of M in that
/// class. Each class is downward closed in steps of p-1 by construction, so
/// every encodable value is p-minor and equality is structural.
class PMinorSubset {
 public:
  explicit PMinorSubset(PrimeModulus p) : p_(p), sups_(p.value() - 1) {}

  PMinorSubset(PrimeModulus p, bool contains_zero, std::vector<ClassBound> sups)
      : p_(p), zero_(contains_zero), sups_(std::move(sups)) {
    if (sups_.size() != p.value() - 1) {
      throw std::invalid_argument("p-minor subset for p = " + std::to_string(p.value()) + " needs " +
                                  std::to_string(p.value() - 1) + " class bounds");
    }
    for (std::uint32_t r = 1; r <= period(); ++r) {
      const auto& b = sups_[r - 1];
      if (b.is_finite() && (b.sup() == 0 || class_of(b.sup()) != r)) {
        throw std::invalid_argument("finite supremum " + std::to_string(b.sup()) + " is not in residue class " +
                                    std::to_string(r));
      }
    }
  }

  const PrimeModulus& modulus() const noexcept { return p_; }
  bool contains_zero() const noexcept { return zero_; }
  std::uint32_t period() const noexcept { return p_.value() - 1; }

  /// Residue class representative in {1, ..., p-1} of n >= 1.
  std::uint32_t class_of(std::uint64_t n) const noexcept {
    return static_cast<std::uint32_t>((n - 1) % period() + 1);
  }

  const ClassBound& bound(std::uint32_t r) const { return sups_.at(r - 1); }
  const std::vector<ClassBound>& bounds() const noexcept { return sups_; }

  PMinorSubset with_zero(bool z) const {
    PMinorSubset m = *this;
    m.zero_ = z;
    return m;
  }
  PMinorSubset with_bound(std::uint32_t r, ClassBound b) const {
    auto sups = sups_;
    sups.at(r - 1) = b;
    return PMinorSubset(p_, zero_, std::move(sups));
  }

  bool contains(std::uint64_t n) const noexcept {
    if (n == 0) return zero_;
    return sups_[class_of(n) - 1].admits(n);
  }

  bool is_empty() const noexcept {
    return !zero_ && std::all_of(sups_.begin(), sups_.end(), [](const ClassBound& b) { return b.is_empty(); });
  }

  bool is_finite() const noexcept {
    return std::none_of(sups_.begin(), sups_.end(), [](const ClassBound& b) { return b.is_infinite(); });
  }

  /// Largest element; requires a finite, nonempty set.
  std::uint64_t max_element() const {
    if (!is_finite()) throw std::domain_error("infinite p-minor subset has no maximum");
    if (is_empty()) throw std::domain_error("empty set has no maximum");
    std::uint64_t m = 0;
    for (const auto& b : sups_) {
      if (b.is_finite()) m = std::max(m, b.sup());
    }
    return m;
  }

  std::vector<std::uint64_t> elements_up_to(std::uint64_t bound) const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 0; n <= bound; ++n) {
      if (contains(n)) out.push_back(n);
    }
    return out;
  }

  friend bool operator==(const PMinorSubset& a, const PMinorSubset& b) {
    return a.p_ == b.p_ && a.zero_ == b.zero_ && a.sups_ == b.sups_;
  }
  /// Structural total order (for sorting and map keys), not set inclusion.
  friend bool operator<(const PMinorSubset& a, const PMinorSubset& b) {
    if (a.p_.value() != b.p_.value()) return a.p_.value() < b.p_.value();
    if (a.zero_ != b.zero_) return !a.zero_;
    return a.sups_ < b.sups_;
  }

 private:
  PrimeModulus p_;
  bool zero_ = false;
  std::vector<ClassBound> sups_;
};

/// Smallest p-minor subset containing the generators.
inline PMinorSubset close(const std::set<std::uint64_t>& generators, PrimeModulus p) {
  PMinorSubset m(p);
  std::vector<ClassBound> sups(p.value() - 1);
  bool zero = false;
  for (std::uint64_t g : generators) {
    if (g == 0) {
      zero = true;
      continue;
    }
    auto& b = sups[m.class_of(g) - 1];
    if (b.is_empty() || g > b.sup()) b = ClassBound::finite(g);
  }
  return PMinorSubset(p, zero, std::move(sups));
}

inline PMinorSubset union_of(const PMinorSubset& a, const PMinorSubset& b) {
  require_same_modulus(a.modulus(), b.modulus());
  std::vector<ClassBound> sups(a.bounds().size());
  for (std::size_t i = 0; i < sups.size(); ++i) sups[i] = std::max(a.bounds()[i], b.bounds()[i]);
  return PMinorSubset(a.modulus(), a.contains_zero() || b.contains_zero(), std::move(sups));
}

inline PMinorSubset intersect(const PMinorSubset& a, const PMinorSubset& b) {
  require_same_modulus(a.modulus(), b.modulus());
  std::vector<ClassBound> sups(a.bounds().size());
  for (std::size_t i = 0; i < sups.size(); ++i) sups[i] = std::min(a.bounds()[i], b.bounds()[i]);
  return PMinorSubset(a.modulus(), a.contains_zero() && b.contains_zero(), std::move(sups));
}

inline bool is_subset(const PMinorSubset& a, const PMinorSubset& b) {
  require_same_modulus(a.modulus(), b.modulus());
  if (a.contains_zero() && !b.contains_zero()) return false;
  for (std::size_t i = 0; i < a.bounds().size(); ++i) {
    if (a.bounds()[i] > b.bounds()[i]) return false;
  }
  return true;
}

inline bool equals(const PMinorSubset& a, const PMinorSubset& b) {
  require_same_modulus(a.modulus(), b.modulus());
  return a == b;
}

inline PMinorSubset full_n(PrimeModulus p) {
  return PMinorSubset(p, false, std::vector<ClassBound>(p.value() - 1, ClassBound::infinite()));
}

inline PMinorSubset full_n0(PrimeModulus p) { return full_n(p).with_zero(true); }

/// {1 + t*m | t in N_0} for a divisor m of p-1.
inline PMinorSubset arithmetic_progression(PrimeModulus p, std::uint32_t m) {
  const std::uint32_t period = p.value() - 1;
  if (m == 0 || period % m != 0) {
    throw std::invalid_argument(std::to_string(m) + " does not divide p-1 = " + std::to_string(period));
  }
  std::vector<ClassBound> sups(period);
  for (std::uint32_t r = 1; r <= period; ++r) {
    if ((r - 1) % m == 0) sups[r - 1] = ClassBound::infinite();
  }
  return PMinorSubset(p, false, std::move(sups));
}

/// {m1 + t(p-1) | t >= 0} ∪ {m2 + t(p-1) | t <= n}; the infinite chain used
/// for non-finitely-generated clonoids.
inline PMinorSubset chain_mask(PrimeModulus p, std::uint64_t n, std::uint32_t m1, std::uint32_t m2) {
  if (p.value() == 2) throw std::invalid_argument("chain_mask needs p > 2");
  const std::uint32_t period = p.value() - 1;
  if (m1 == m2) throw std::invalid_argument("chain_mask needs m1 != m2");
  if (m1 < 1 || m1 > period || m2 < 1 || m2 > period) {
    throw std::invalid_argument("chain_mask residues must lie in 1..p-1");
  }
  std::vector<ClassBound> sups(period);
  sups[m1 - 1] = ClassBound::infinite();
  sups[m2 - 1] = ClassBound::finite(m2 + n * period);
  return PMinorSubset(p, false, std::move(sups));
}

/// "{1,2,3}"-style text; infinite sets list a prefix and end with "...".
inline std::string to_string(const PMinorSubset& m) {
  std::uint64_t limit = 0;
  for (const auto& b : m.bounds()) {
    if (b.is_finite()) limit = std::max(limit, b.sup());
  }
  const bool finite = m.is_finite();
  if (!finite) limit += 2 * std::uint64_t{m.period()};
  std::string s = "{";
  bool first = true;
  for (auto n : m.elements_up_to(limit)) {
    if (!first) s += ',';
    s += std::to_string(n);
    first = false;
  }
  if (!finite) s += first ? "..." : ",...";
  s += '}';
  return s;
}

}  // namespace lcc
