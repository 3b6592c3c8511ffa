#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lcc/poly.hpp"

namespace lcc {

struct WitnessTrace;

namespace step {

/// cur ∘_b 0.
struct SubstituteZero {
  std::vector<VarIndex> positions;
};
/// cur - cur ∘_(l) 0: keeps exactly the monomials that contain x_l.
struct SubtractShifted {
  VarIndex position;
};
/// cur ∘_(l) (x_l + x_fresh).
struct SubstituteSum {
  VarIndex position;
  VarIndex fresh;
};
/// c * cur.
struct Scale {
  Residue factor;
};
/// Injective renaming x_from -> x_to of the listed variables.
struct Relabel {
  std::vector<std::pair<VarIndex, VarIndex>> mapping;
};
/// Removes every monomial of total degree > degree. Each nested trace starts
/// at the current polynomial and ends at x1...x_e for one degree e > degree
/// that occurs; the removed monomials are rebuilt from those products by
/// identifying variables.
struct DropHigherDegrees {
  std::uint64_t degree;
  std::vector<std::shared_ptr<const WitnessTrace>> subtraces;
};

}  // namespace step

using WitnessStep = std::variant<step::SubstituteZero, step::SubtractShifted, step::SubstituteSum, step::Scale,
                                 step::Relabel, step::DropHigherDegrees>;

/// A replayable derivation inside genPLC{start}: every step is a right
/// composition with linear forms, a linear combination, or a nested
/// derivation from the same current polynomial.
struct WitnessTrace {
  Polynomial start;
  std::vector<WitnessStep> steps;
  Polynomial claimed_result;

  /// Number of steps including nested ones.
  std::size_t length() const {
    std::size_t n = 0;
    for (const auto& s : steps) {
      ++n;
      if (const auto* d = std::get_if<step::DropHigherDegrees>(&s)) {
        for (const auto& t : d->subtraces) n += t->length();
      }
    }
    return n;
  }
};

inline std::string step_kind(const WitnessStep& s) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, step::SubstituteZero>) return "substitute-zero";
        if constexpr (std::is_same_v<T, step::SubtractShifted>) return "subtract-shifted";
        if constexpr (std::is_same_v<T, step::SubstituteSum>) return "substitute-sum";
        if constexpr (std::is_same_v<T, step::Scale>) return "scale";
        if constexpr (std::is_same_v<T, step::Relabel>) return "relabel";
        if constexpr (std::is_same_v<T, step::DropHigherDegrees>) return "drop-higher-degrees";
      },
      s);
}

class ReplayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

/// x1^{a1}...: the monomial m written as x1...x_e with variables identified.
/// Returns the substitution sending x1..x_e to the variables of m, each
/// variable repeated by its exponent.
inline std::vector<Polynomial> spread_substitutes(const PrimeModulus& p, const Monomial& m) {
  std::vector<Polynomial> subs;
  for (const auto& [var, exp] : m.factors()) {
    for (std::uint32_t k = 0; k < exp; ++k) subs.push_back(Polynomial::variable(p, var));
  }
  return subs;
}

inline std::vector<VarIndex> first_positions(std::size_t n) {
  std::vector<VarIndex> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[i] = static_cast<VarIndex>(i + 1);
  return pos;
}

inline void replay_into(const WitnessTrace& trace, const Polynomial& start, std::vector<Polynomial>* seen,
                        Polynomial& out);

inline Polynomial apply_step(const Polynomial& cur, const WitnessStep& s, std::vector<Polynomial>* seen) {
  const auto& p = cur.modulus();
  const Polynomial zero(p);
  return std::visit(
      [&](const auto& v) -> Polynomial {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, step::SubstituteZero>) {
          return compose_at_uniform(cur, v.positions, zero);
        } else if constexpr (std::is_same_v<T, step::SubtractShifted>) {
          const VarIndex pos[] = {v.position};
          return subtract(cur, compose_at_uniform(cur, pos, zero));
        } else if constexpr (std::is_same_v<T, step::SubstituteSum>) {
          if (v.fresh == v.position) throw ReplayError("substitute-sum: fresh variable equals position");
          const VarIndex pos[] = {v.position};
          const Polynomial sub[] = {Polynomial::variable(p, v.position) + Polynomial::variable(p, v.fresh)};
          return compose_at(cur, pos, sub);
        } else if constexpr (std::is_same_v<T, step::Scale>) {
          return scale(v.factor, cur);
        } else if constexpr (std::is_same_v<T, step::Relabel>) {
          auto mapping = v.mapping;
          std::sort(mapping.begin(), mapping.end());
          std::set<VarIndex> targets;
          std::vector<VarIndex> pos;
          std::vector<Polynomial> subs;
          for (const auto& [from, to] : mapping) {
            if (!pos.empty() && pos.back() == from) throw ReplayError("relabel: variable mapped twice");
            if (!targets.insert(to).second) throw ReplayError("relabel: mapping is not injective");
            pos.push_back(from);
            subs.push_back(Polynomial::variable(p, to));
          }
          for (VarIndex var : cur.occurring_variables()) {
            if (!std::binary_search(pos.begin(), pos.end(), var) && targets.count(var)) {
              throw ReplayError("relabel: target x" + std::to_string(var) + " collides with an unmapped variable");
            }
          }
          return compose_at(cur, pos, subs);
        } else if constexpr (std::is_same_v<T, step::DropHigherDegrees>) {
          std::map<std::uint64_t, bool> proven;
          for (const auto& sub : v.subtraces) {
            if (!(sub->start == cur)) throw ReplayError("drop-higher-degrees: nested trace starts elsewhere");
            Polynomial end(p);
            replay_into(*sub, cur, seen, end);
            if (end.term_count() != 1 || end.terms().begin()->second != 1) {
              throw ReplayError("drop-higher-degrees: nested trace does not end at a monomial");
            }
            const Monomial& m = end.terms().begin()->first;
            const auto e = m.total_degree();
            if (!(m == Monomial::product_of_first(static_cast<std::uint32_t>(e)))) {
              throw ReplayError("drop-higher-degrees: nested trace does not end at x1...xe");
            }
            proven[e] = true;
          }
          Polynomial next = cur;
          for (const auto& [m, c] : cur.terms()) {
            const auto e = m.total_degree();
            if (e <= v.degree) continue;
            if (!proven.count(e)) {
              throw ReplayError("drop-higher-degrees: no nested trace for degree " + std::to_string(e));
            }
            const auto subs = spread_substitutes(p, m);
            const auto pos = first_positions(subs.size());
            const auto rebuilt = compose_at(Polynomial::monomial(p, Monomial::product_of_first(
                                                                        static_cast<std::uint32_t>(e))),
                                            pos, subs);
            next = subtract(next, scale(c, rebuilt));
          }
          return next;
        }
      },
      s);
}

inline void replay_into(const WitnessTrace& trace, const Polynomial& start, std::vector<Polynomial>* seen,
                        Polynomial& out) {
  Polynomial cur = start;
  if (seen) seen->push_back(cur);
  for (const auto& s : trace.steps) {
    cur = apply_step(cur, s, seen);
    if (seen) seen->push_back(cur);
  }
  out = cur;
}

}  // namespace detail

/// Replays the trace from its start. Every intermediate polynomial (nested
/// traces included) is appended to `intermediates` when given.
inline Polynomial replay(const WitnessTrace& trace, std::vector<Polynomial>* intermediates = nullptr) {
  Polynomial out(trace.start.modulus());
  detail::replay_into(trace, trace.start, intermediates, out);
  return out;
}

/// The replay reproduces the claimed result, and the claim is 1 or x1...xd.
inline bool is_sound(const WitnessTrace& trace) {
  try {
    const Polynomial got = replay(trace);
    if (!(got == trace.claimed_result)) return false;
    if (got.term_count() != 1 || got.terms().begin()->second != 1) return false;
    const Monomial& m = got.terms().begin()->first;
    return m == Monomial::product_of_first(static_cast<std::uint32_t>(m.total_degree()));
  } catch (const std::exception&) {
    return false;
  }
}

namespace detail {

inline VarIndex smallest_unused(const Polynomial& f) {
  const auto vars = f.occurring_variables();
  VarIndex i = 1;
  while (vars.count(i)) ++i;
  return i;
}

/// Derivation of x1...xd (or 1 when d = 0) from a reduced f whose maximum
/// total degree is d.
inline WitnessTrace top_degree_trace(const Polynomial& f) {
  const auto& p = f.modulus();
  WitnessTrace trace{f, {}, Polynomial(p)};
  const auto d = f.max_total_degree();
  Polynomial cur = f;
  auto push = [&](WitnessStep s) {
    cur = apply_step(cur, s, nullptr);
    trace.steps.push_back(std::move(s));
  };

  if (d == 0) {
    const Residue a = cur.terms().begin()->second;
    if (a != 1) push(step::Scale{p.inv(a)});
    trace.claimed_result = cur;
    return trace;
  }

  // Pivot: the graded-lex-greatest monomial, which has total degree d.
  Monomial pivot = cur.terms().begin()->first;
  Residue pivot_coeff = cur.terms().begin()->second;

  // Spread exponents > 1 over fresh variables until the pivot is square-free.
  while (pivot.factors().size() < d) {
    VarIndex l = 0;
    std::uint32_t beta = 0;
    for (const auto& [var, exp] : pivot.factors()) {
      if (exp > 1) {
        l = var;
        beta = exp;
        break;
      }
    }
    const VarIndex fresh = smallest_unused(cur);
    push(step::SubstituteSum{l, fresh});
    std::vector<Monomial::Factor> f(pivot.factors().begin(), pivot.factors().end());
    for (auto& fac : f) {
      if (fac.first == l) fac.second -= 1;
    }
    f.emplace_back(fresh, 1);
    pivot = Monomial(std::move(f));
    pivot_coeff = p.mul(pivot_coeff, beta % p.value());
    if (cur.coefficient(pivot) != pivot_coeff) {
      throw std::logic_error("witness: pivot coefficient mismatch after substitute-sum");
    }
  }

  if (pivot_coeff != 1) push(step::Scale{p.inv(pivot_coeff)});

  // Pivot variables -> x1..xd, every other occurring variable -> x_{d+1}, ...
  std::vector<std::pair<VarIndex, VarIndex>> mapping;
  VarIndex next_target = 1;
  for (const auto& fac : pivot.factors()) mapping.emplace_back(fac.first, next_target++);
  for (VarIndex var : cur.occurring_variables()) {
    if (pivot.exponent(var) == 0) mapping.emplace_back(var, next_target++);
  }
  const bool identity = std::all_of(mapping.begin(), mapping.end(), [](const auto& m) { return m.first == m.second; });
  if (!identity) push(step::Relabel{mapping});

  std::vector<VarIndex> outside;
  for (VarIndex var : cur.occurring_variables()) {
    if (var > d) outside.push_back(var);
  }
  if (!outside.empty()) push(step::SubstituteZero{outside});

  // Remaining monomials each miss some x_l, l <= d; cur - cur ∘_(l) 0 removes them.
  const Monomial target = Monomial::product_of_first(static_cast<std::uint32_t>(d));
  while (cur.term_count() > 1) {
    VarIndex l = 0;
    for (VarIndex cand = 1; cand <= d && l == 0; ++cand) {
      for (const auto& [m, c] : cur.terms()) {
        if (!(m == target) && m.exponent(cand) == 0) {
          l = cand;
          break;
        }
      }
    }
    if (l == 0) throw std::logic_error("witness: no variable separates the remaining monomials");
    push(step::SubtractShifted{l});
  }
  trace.claimed_result = cur;
  return trace;
}

}  // namespace detail

/// Derivation of x1...x_target (1 for target 0) from a reduced f with
/// target ∈ setTotDeg(f). Higher degrees are peeled off one at a time with
/// drop-higher-degrees steps.
inline WitnessTrace extract_degree_witness(const Polynomial& f, std::uint64_t target) {
  if (f.is_zero()) throw std::invalid_argument("witness: f must be nonzero");
  if (!f.is_reduced()) throw std::invalid_argument("witness: f must be reduced (exponents <= p-1)");
  const auto degrees = total_degree_set(f);
  if (!degrees.count(target)) {
    throw std::invalid_argument("witness: degree " + std::to_string(target) + " does not occur in f");
  }
  const auto& p = f.modulus();
  WitnessTrace trace{f, {}, Polynomial(p)};
  Polynomial cur = f;
  for (auto it = degrees.rbegin(); it != degrees.rend() && *it > target; ++it) {
    auto next = std::next(it);
    auto sub = std::make_shared<const WitnessTrace>(detail::top_degree_trace(cur));
    step::DropHigherDegrees drop{*next, {sub}};
    cur = detail::apply_step(cur, drop, nullptr);
    trace.steps.emplace_back(std::move(drop));
  }
  auto tail = detail::top_degree_trace(cur);
  for (auto& s : tail.steps) trace.steps.push_back(std::move(s));
  trace.claimed_result = tail.claimed_result;
  return trace;
}

/// Derivation of x1...xd with d = max(setTotDeg(f)); ends at 1 when d = 0.
inline WitnessTrace extract_monomial_witness(const Polynomial& f) {
  if (f.is_zero()) throw std::invalid_argument("witness: f must be nonzero");
  return extract_degree_witness(f, f.max_total_degree());
}

}  // namespace lcc
