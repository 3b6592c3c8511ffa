// Acceptance suite. `acceptance` runs every criterion, `acceptance <n>` runs
// criterion n. One PASS/FAIL line per criterion; exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "support.hpp"

namespace {

using namespace lcc;
using Clock = std::chrono::steady_clock;

// Wall-clock limits in seconds; 0 means untimed.
constexpr double kCensusSeconds = 1.0;
constexpr double kOracleSeconds = 60.0;
constexpr double kWitnessSeconds = 30.0;
constexpr double kChainSeconds = 60.0;

constexpr int kOracleGeneratorSets = 12;  // per prime, at least 10 required
constexpr int kLatticePairs = 50;
constexpr std::uint64_t kClosureSamples = 1000;
constexpr std::uint32_t kChainDepth = 5;
constexpr std::uint64_t kNonFgChainLimit = 10;

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

json run_cli(const std::vector<std::string>& args, int* code = nullptr) {
  std::istringstream in;
  std::ostringstream out, err;
  const int rc = cli::run(args, in, out, err);
  if (code) *code = rc;
  return json::parse(out.str());
}

// --- 1. census ---------------------------------------------------------------

Outcome census_counts() {
  Outcome o;
  const std::vector<std::pair<std::uint32_t, std::pair<int, int>>> want{
      {2, {4, 7}}, {3, {5, 7}}, {5, {6, 8}}, {7, {7, 9}}, {11, {7, 9}}};
  std::ostringstream got;
  for (const auto& [p, counts] : want) {
    const auto j = run_cli({"census", "--p", std::to_string(p), "--json"});
    const int clones = j.at("clones").get<int>(), algebras = j.at("iterative_algebras").get<int>();
    got << " p=" << p << ":" << clones << "/" << algebras;
    if (clones != counts.first) o.fail("p=" + std::to_string(p) + " clones " + std::to_string(clones));
    if (algebras != counts.second) {
      o.fail("p=" + std::to_string(p) + " iterative algebras " + std::to_string(algebras) + ", expected " +
             std::to_string(counts.second));
    }
    if (p == 2) {
      const auto masks = j.at("clone_masks").get<std::vector<std::string>>();
      const std::set<std::string> listed(masks.begin(), masks.end());
      if (listed != std::set<std::string>{"{1}", "{0,1}", "{1,2,...}", "{0,1,2,...}"}) o.fail("p=2 clone list");
    }
  }
  if (o.ok) o.detail = "clones/iterative algebras" + got.str();
  return o;
}

// --- 2. mask membership versus span membership -------------------------------

Outcome oracle_equivalence() {
  Outcome o;
  testing::Rng rng(2024);
  std::uint64_t tables = 0;
  int sets = 0;
  for (std::uint32_t p : {2u, 3u}) {
    const PrimeModulus m(p);
    const std::uint32_t max_deg = std::min<std::uint32_t>(4, 2 * (p - 1));
    for (int i = 0; i < kOracleGeneratorSets; ++i) {
      std::vector<Polynomial> gens;
      const int k = 1 + i % 2;
      while (static_cast<int>(gens.size()) < k) {
        auto g = testing::random_reduced(rng, m, 2, max_deg, 3);
        if (!g.is_zero()) gens.push_back(std::move(g));
      }
      const auto r = cross_validate(gens, 2, m);
      ++sets;
      tables += r.tables_checked;
      if (!r.exhaustive || r.tables_checked != (p == 2 ? 16u : 19683u)) o.fail("not exhaustive at p=" + std::to_string(p));
      if (!r.agree()) {
        std::string g;
        for (const auto& x : gens) g += format(x) + "; ";
        o.fail(std::to_string(r.disagreements) + " disagreements for " + g);
      }
    }
  }
  if (o.ok) o.detail = std::to_string(sets) + " generator sets, " + std::to_string(tables) + " tables, 0 disagreements";
  return o;
}

// --- 3. mask lattice versus fragment lattice ---------------------------------

Fragment span_of(const PMinorSubset& m) {
  return fragment(testing::generators_for(m, 2), 2, m.modulus());
}

bool included(const Fragment& a, const Fragment& b) {
  for (const auto& v : a.basis()) {
    if (!b.contains(v)) return false;
  }
  return true;
}

bool same(const Fragment& a, const Fragment& b) { return included(a, b) && included(b, a); }

Fragment join(const Fragment& a, const Fragment& b) {
  Fragment out = a;
  for (const auto& v : b.basis()) out.insert(v);
  return out;
}

Fragment meet(const Fragment& a, const Fragment& b) {
  Fragment out(a.modulus(), a.arity());
  for (const auto& v : a.elements()) {
    if (b.contains(v)) out.insert(v);
  }
  return out;
}

Outcome lattice_isomorphism() {
  Outcome o;
  const PrimeModulus p(3);
  testing::Rng rng(3033);
  int subset_true = 0;
  for (int i = 0; i < kLatticePairs; ++i) {
    // arity 2 sees total degrees up to 2(p-1), so masks stay within that range
    const auto a = testing::random_mask(rng, p, 2 * (p.value() - 1));
    const auto b = testing::random_mask(rng, p, 2 * (p.value() - 1));
    const auto fa = span_of(a), fb = span_of(b);
    const bool sub = is_subset(a, b);
    subset_true += sub;
    const std::string tag = to_string(a) + " vs " + to_string(b);
    if (sub != included(fa, fb)) o.fail("inclusion differs: " + tag);
    if (!same(span_of(union_of(a, b)), join(fa, fb))) o.fail("union differs: " + tag);
    if (!same(span_of(intersect(a, b)), meet(fa, fb))) o.fail("intersection differs: " + tag);
  }
  if (o.ok) o.detail = std::to_string(kLatticePairs) + " pairs (" + std::to_string(subset_true) + " included), 0 failures";
  return o;
}

// --- 4. witness soundness -----------------------------------------------------

std::vector<Polynomial> all_reduced(const PrimeModulus& p) {
  std::vector<Monomial> monos;
  for (std::uint32_t e1 = 0; e1 < p.value(); ++e1) {
    for (std::uint32_t e2 = 0; e2 < p.value(); ++e2) {
      if (e1 + e2 > 4) continue;
      std::vector<Monomial::Factor> f;
      if (e1) f.emplace_back(1, e1);
      if (e2) f.emplace_back(2, e2);
      monos.emplace_back(std::move(f));
    }
  }
  std::vector<Polynomial> out;
  for (const auto& cs : testing::all_points(p.value(), static_cast<std::uint32_t>(monos.size()))) {
    Polynomial f(p);
    for (std::size_t i = 0; i < monos.size(); ++i) f.accumulate(monos[i], cs[i]);
    if (!f.is_zero()) out.push_back(std::move(f));
  }
  return out;
}

Outcome witness_soundness() {
  Outcome o;
  std::uint64_t polys = 0, checked = 0;
  for (std::uint32_t q : {2u, 3u}) {
    const PrimeModulus p(q);
    for (const auto& f : all_reduced(p)) {
      ++polys;
      const auto t = extract_monomial_witness(f);
      std::vector<Polynomial> seen;
      Polynomial end(p);
      try {
        end = replay(t, &seen);
      } catch (const ReplayError& e) {
        o.fail(format(f) + ": " + e.what());
        continue;
      }
      const auto d = static_cast<std::uint32_t>(f.max_total_degree());
      if (end != Polynomial::monomial(p, Monomial::product_of_first(d)) || !is_sound(t)) {
        o.fail(format(f) + " replays to " + format(end));
        continue;
      }
      std::map<std::uint32_t, std::vector<FunctionTable>> by_arity;
      for (const auto& g : seen) {
        const auto n = std::max<VarIndex>(1, g.max_index());
        by_arity[n].push_back(evaluate(g, n));
      }
      const std::vector gens{f};
      for (const auto& [n, targets] : by_arity) {
        checked += targets.size();
        if (!span_contains_all(gens, targets, n, p)) o.fail(format(f) + ": intermediate outside the span at arity " + std::to_string(n));
      }
    }
  }
  if (o.ok) o.detail = std::to_string(polys) + " polynomials, " + std::to_string(checked) + " intermediates in span";
  return o;
}

// --- 5. Boolean fragments -----------------------------------------------------

Outcome boolean_fragments() {
  Outcome o;
  const PrimeModulus p(2);
  const std::vector<std::pair<PMinorSubset, std::size_t>> cases{
      {full_n(p), 8}, {close({1}, p), 4}, {close({0, 1}, p), 8}, {full_n0(p), 16}};
  std::ostringstream got;
  for (const auto& [mask, want] : cases) {
    const auto frag = span_of(mask);
    std::size_t count = 0;
    for (const auto& v : testing::all_points(2, 4)) count += frag.contains(v);
    got << ' ' << to_string(mask) << ':' << count;
    if (count != want) o.fail(to_string(mask) + " has " + std::to_string(count) + " tables, expected " + std::to_string(want));
  }
  if (o.ok) o.detail = "arity-2 tables" + got.str();
  return o;
}

// --- 6. automorphism subgroups versus progression masks ----------------------

Outcome galois_correspondence() {
  Outcome o;
  const auto a = run_cli({"galois", "verify", "--p", "3", "--arity", "2"});
  if (!a.at("exhaustive").get<bool>()) o.fail("p=3 arity 2 not compared exactly");
  if (a.at("mismatches").get<int>() != 0) o.fail("p=3 mismatches");
  const auto& ma = a.at("matches");
  if (ma.size() != 2) {
    o.fail("p=3 subgroup count");
  } else {
    const auto n = ma[0].at("mask").at("elements").get<std::string>();
    const auto odd = ma[1].at("mask").at("elements").get<std::string>();
    if (n != to_string(full_n(PrimeModulus(3)))) o.fail("p=3 trivial subgroup matched " + n);
    if (odd != to_string(arithmetic_progression(PrimeModulus(3), 2))) o.fail("p=3 full subgroup matched " + odd);
  }
  const auto b = run_cli({"galois", "verify", "--p", "5", "--arity", "1"});
  if (b.at("mismatches").get<int>() != 0) o.fail("p=5 mismatches");
  if (b.at("matches").size() != 3) o.fail("p=5 subgroup count");
  for (const auto& m : b.at("matches")) {
    if (m.at("divisor").is_null() || m.at("divisor").get<std::size_t>() != m.at("order").get<std::size_t>()) {
      o.fail("p=5 subgroup of order " + m.at("order").dump() + " unmatched");
    }
  }
  if (!b.at("bijective").get<bool>() || !a.at("bijective").get<bool>()) o.fail("not a bijection");
  if (o.ok) o.detail = "p=3 n=2: 2 subgroups -> N, odd; p=5 n=1: 3 subgroups; 0 mismatches";
  return o;
}

// --- 7. embedding chain -------------------------------------------------------

Outcome embedding_chain() {
  Outcome o;
  int code = 0;
  const auto j = run_cli({"embed", "chain", "--p", "3", "--depth", std::to_string(kChainDepth)}, &code);
  if (code != 0) o.fail("chain command reported failure");
  const auto& masks = j.at("masks");
  if (masks.size() != kChainDepth + 1) o.fail("expected " + std::to_string(kChainDepth + 1) + " masks");
  std::vector<PMinorSubset> chain;
  for (const auto& m : masks) {
    chain.push_back(mask_from_json(m));
    if (m.at("finitely_generated").get<bool>()) o.fail(m.at("elements").get<std::string>() + " finitely generated");
    if (chain.back().is_finite()) o.fail(m.at("elements").get<std::string>() + " is finite");
  }
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!is_subset(chain[i], chain[i + 1]) || chain[i] == chain[i + 1]) o.fail("not strictly increasing at " + std::to_string(i));
  }
  for (const auto& l : j.at("links")) {
    if (!l.at("verified").get<bool>()) o.fail("separator " + l.at("separator").get<std::string>() + " not verified");
  }
  std::uint64_t samples = 0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto r = closure_check(Clonoid(chain[i]), kClosureSamples, 2, 7 + i);
    samples += r.samples;
    if (!r.passed()) o.fail("closure of " + to_string(chain[i]) + ": " + r.first_failure);
  }
  if (o.ok) {
    o.detail = std::to_string(chain.size()) + " masks, " + std::to_string(j.at("links").size()) + " separators, " +
               std::to_string(samples) + " closure samples";
  }
  return o;
}

// --- 8. non-finitely generated masks -----------------------------------------

Outcome non_fg_census() {
  Outcome o;
  const PrimeModulus p2(2);
  // every 2-minor subset whose finite part is bounded by 8: {1..s}, N, with or without 0
  std::vector<PMinorSubset> all;
  for (bool zero : {false, true}) {
    all.emplace_back(p2, zero, std::vector{ClassBound::empty()});
    all.emplace_back(p2, zero, std::vector{ClassBound::infinite()});
    for (std::uint64_t s = 1; s <= 8; ++s) all.emplace_back(p2, zero, std::vector{ClassBound::finite(s)});
  }
  std::set<std::string> flagged;
  for (const auto& m : all) {
    if (!is_finitely_generated(Clonoid(m))) flagged.insert(to_string(m));
  }
  if (flagged != std::set<std::string>{to_string(full_n(p2)), to_string(full_n0(p2))}) {
    o.fail("p=2 flagged " + std::to_string(flagged.size()) + " masks");
  }
  const PrimeModulus p3(3);
  for (std::uint64_t n = 0; n <= kNonFgChainLimit; ++n) {
    if (is_finitely_generated(Clonoid(chain_mask(p3, n, 1, 2)))) o.fail("chain_mask(" + std::to_string(n) + ",1,2) finitely generated");
  }
  if (o.ok) o.detail = "p=2: 2 of " + std::to_string(all.size()) + " masks (N, N_0); p=3: chain_mask(n,1,2), n<=10";
  return o;
}

struct Criterion {
  const char* name;
  double limit;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"census counts", kCensusSeconds, census_counts},
      {"mask membership equals span membership", kOracleSeconds, oracle_equivalence},
      {"mask lattice equals fragment lattice", 0, lattice_isomorphism},
      {"witness traces replay inside the span", kWitnessSeconds, witness_soundness},
      {"Boolean fragment sizes", 0, boolean_fragments},
      {"automorphism subgroups match progressions", 0, galois_correspondence},
      {"non-finitely generated chain of clones", kChainSeconds, embedding_chain},
      {"non-finitely generated masks", 0, non_fg_census},
  };
  std::vector<std::size_t> which;
  if (argc > 1) {
    const auto n = std::strtoul(argv[1], nullptr, 10);
    if (n < 1 || n > criteria.size()) {
      std::cerr << "usage: acceptance [1-" << criteria.size() << "]\n";
      return 2;
    }
    which.push_back(n - 1);
  } else {
    for (std::size_t i = 0; i < criteria.size(); ++i) which.push_back(i);
  }
  bool all_ok = true;
  for (auto i : which) {
    const auto& c = criteria[i];
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (c.limit > 0 && secs > c.limit) o.fail("took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit) + " s");
    all_ok = all_ok && o.ok;
    std::printf("%s c%zu %s: %s (%.2f s)\n", o.ok ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(), secs);
  }
  return all_ok ? 0 : 1;
}
