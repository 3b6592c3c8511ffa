#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcc {

/// Canonical residue in {0, ..., p-1}.
using Residue = std::uint32_t;

/// A prime p, checked by trial division at construction. Carries the
/// arithmetic of Z_p.
class PrimeModulus {
 public:
  explicit PrimeModulus(std::uint32_t p) : p_(p) {
    if (!is_prime(p)) {
      throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
    }
  }

  static constexpr bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2) {
      if (n % d == 0) return false;
    }
    return true;
  }

  std::uint32_t value() const noexcept { return p_; }

  Residue reduce(std::int64_t a) const noexcept {
    const auto p = static_cast<std::int64_t>(p_);
    auto r = a % p;
    return static_cast<Residue>(r < 0 ? r + p : r);
  }
  Residue add(Residue a, Residue b) const noexcept {
    const std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Residue>(s >= p_ ? s - p_ : s);
  }
  Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + (p_ - b); }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const noexcept {
    return static_cast<Residue>((std::uint64_t{a} * b) % p_);
  }
  Residue pow(Residue a, std::uint64_t e) const noexcept {
    std::uint64_t base = a % p_, acc = 1 % p_;
    while (e > 0) {
      if (e & 1U) acc = acc * base % p_;
      base = base * base % p_;
      e >>= 1U;
    }
    return static_cast<Residue>(acc);
  }
  /// Multiplicative inverse; a must be nonzero.
  Residue inv(Residue a) const {
    if (a % p_ == 0) throw std::domain_error("zero has no inverse mod " + std::to_string(p_));
    return pow(a, p_ - 2);
  }

  friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

 private:
  std::uint32_t p_;
};

inline void require_same_modulus(const PrimeModulus& a, const PrimeModulus& b) {
  if (!(a == b)) {
    throw std::invalid_argument("modulus mismatch: " + std::to_string(a.value()) + " vs " +
                                std::to_string(b.value()));
  }
}

/// Positive divisors of n in increasing order.
inline std::vector<std::uint32_t> divisors(std::uint32_t n) {
  std::vector<std::uint32_t> low, high;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      low.push_back(static_cast<std::uint32_t>(d));
      if (d * d != n) high.push_back(static_cast<std::uint32_t>(n / d));
    }
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

/// Multiplicative order of a in Z_p^*.
inline std::uint32_t multiplicative_order(const PrimeModulus& p, Residue a) {
  if (a % p.value() == 0) throw std::domain_error("zero has no multiplicative order");
  std::uint32_t k = 1;
  Residue x = a % p.value();
  while (x != 1) {
    x = p.mul(x, a);
    ++k;
  }
  return k;
}

/// p^e with an overflow guard; used for table sizes.
inline std::uint64_t checked_power(std::uint64_t base, std::uint64_t e,
                                   std::uint64_t limit = std::uint64_t{1} << 40) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (base != 0 && r > limit / base) {
      throw std::length_error(std::to_string(base) + "^" + std::to_string(e) + " exceeds size limit");
    }
    r *= base;
  }
  return r;
}

}  // namespace lcc
