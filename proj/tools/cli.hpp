#pragma once

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcc/lcc.hpp"

namespace lcc::cli {

/// Failures caused by the input values rather than the command line shape.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::uint32_t p = 0;
  std::uint32_t arity = 2;
  std::vector<std::string> generators;
  std::string poly;
  std::string mask;
  std::string table;
  std::vector<std::string> subs;
  std::vector<VarIndex> positions;
  std::vector<Residue> point;
  std::optional<std::uint64_t> budget;
  std::optional<std::uint64_t> degree;
  std::uint32_t depth = 5;
  std::uint32_t m1 = 1, m2 = 2;
  std::uint64_t bound = 6;
  bool no_zero = false;
  std::string kind = "minor";
  std::string trace_file;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  bool json = false;
  bool plain = false;

  bool want_json(bool json_by_default) const {
    if (json) return true;
    if (plain) return false;
    return json_by_default;
  }
  std::uint64_t effective_budget() const { return budget.value_or(default_budget()); }
};

inline PrimeModulus modulus_of(const Options& o) {
  if (!PrimeModulus::is_prime(o.p)) throw DomainError("p = " + std::to_string(o.p) + " is not prime");
  return PrimeModulus(o.p);
}

inline std::vector<Polynomial> parse_all(const std::vector<std::string>& texts, PrimeModulus p) {
  std::vector<Polynomial> out;
  for (const auto& t : texts) out.push_back(parse(t, p));
  return out;
}

inline std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string bool_text(bool b) { return b ? "true" : "false"; }

/// The clonoid named by --mask or generated by --generators.
inline Clonoid clonoid_of(const Options& o, PrimeModulus p) {
  if (!o.mask.empty()) {
    auto m = parse_mask(o.mask);
    require_same_modulus(p, m.modulus());
    return Clonoid(std::move(m));
  }
  const auto gens = parse_all(o.generators, p);
  return generate(gens, p);
}

inline std::string describe(const WitnessStep& s) {
  std::ostringstream out;
  out << step_kind(s);
  std::visit(
      [&](const auto& st) {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, step::SubstituteZero>) {
          for (auto v : st.positions) out << " x" << v;
        } else if constexpr (std::is_same_v<T, step::SubtractShifted>) {
          out << " x" << st.position;
        } else if constexpr (std::is_same_v<T, step::SubstituteSum>) {
          out << " x" << st.position << " -> x" << st.position << " + x" << st.fresh;
        } else if constexpr (std::is_same_v<T, step::Scale>) {
          out << ' ' << st.factor;
        } else if constexpr (std::is_same_v<T, step::Relabel>) {
          for (const auto& [a, b] : st.mapping) out << " x" << a << "->x" << b;
        } else {
          out << " keep<=" << st.degree << " (" << st.subtraces.size() << " nested)";
        }
      },
      s);
  return out.str();
}

inline void print_trace(std::ostream& out, const WitnessTrace& t) {
  out << "start: " << format(t.start) << '\n';
  for (std::size_t i = 0; i < t.steps.size(); ++i) out << i + 1 << ". " << describe(t.steps[i]) << '\n';
  out << "result: " << format(t.claimed_result) << '\n';
  out << "length: " << t.length() << '\n';
}

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linearly closed clonoids on Z_p", "lcc"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool p_required = true) {
    sub->add_option("--p", o.p, "prime modulus")->required(p_required);
    sub->add_flag("--json", o.json, "JSON output");
    sub->add_flag("--plain", o.plain, "plain text output");
  };
  auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--budget", o.budget, "composition budget (default 10^7, env CLONOID_BUDGET)");
  };
  auto add_clonoid = [&](CLI::App* sub) {
    sub->add_option("--generators", o.generators, "comma-separated generator polynomials")->delimiter(',');
    sub->add_option("--mask", o.mask, "mask JSON, e.g. {\"p\":3,\"zero\":false,\"sups\":[\"inf\",2]}");
  };

  auto* reduce = app.add_subcommand("reduce", "print the p-representative of a polynomial");
  add_common(reduce);
  reduce->add_option("poly", o.poly, "polynomial")->required();

  auto* compose = app.add_subcommand("compose", "substitute polynomials at variable positions");
  add_common(compose);
  compose->add_option("poly", o.poly, "outer polynomial")->required();
  compose->add_option("--at", o.positions, "comma-separated variable positions")->delimiter(',')->required();
  compose->add_option("--subs", o.subs, "comma-separated substitutes")->delimiter(',')->required();

  auto* evaluate_cmd = app.add_subcommand("evaluate", "evaluate at a point, or print the function table");
  add_common(evaluate_cmd);
  evaluate_cmd->add_option("poly", o.poly, "polynomial")->required();
  evaluate_cmd->add_option("--point", o.point, "comma-separated point")->delimiter(',');
  evaluate_cmd->add_option("--arity", o.arity, "table arity");

  auto* interp = app.add_subcommand("interpolate", "reduced polynomial of a table (\"p n\" then values; stdin)");
  add_common(interp, false);
  interp->add_option("--table", o.table, "table text instead of stdin");

  auto* gen = app.add_subcommand("generate", "mask of the clonoid generated by polynomials");
  add_common(gen);
  gen->add_option("--generators", o.generators, "comma-separated generator polynomials")
      ->delimiter(',')
      ->required();

  auto* member = app.add_subcommand("member", "membership of a polynomial or table");
  add_common(member);
  add_clonoid(member);
  member->add_option("--poly", o.poly, "candidate polynomial");
  member->add_option("--table", o.table, "candidate table");

  auto* classify = app.add_subcommand("classify", "iterative algebra, clone and finite generation flags");
  add_common(classify);
  add_clonoid(classify);

  auto* census = app.add_subcommand("census", "count clones containing + and iterative algebras");
  add_common(census);

  auto* lattice = app.add_subcommand("lattice", "DOT graph of a lattice");
  add_common(lattice);
  lattice->add_option("--kind", o.kind, "minor | clones | iterative")
      ->check(CLI::IsMember({"minor", "clones", "iterative"}));
  lattice->add_option("--bound", o.bound, "largest element for --kind minor");
  lattice->add_flag("--no-zero", o.no_zero, "exclude masks containing 0");

  auto* witness = app.add_subcommand("witness", "derivation of x1...xd from a polynomial");
  add_common(witness, false);  // `witness replay` reads p from the trace
  witness->add_option("--poly", o.poly, "polynomial");
  witness->add_option("--degree", o.degree, "target total degree (default: maximum)");
  auto* replay_cmd = witness->add_subcommand("replay", "replay a JSON trace (stdin or --trace); exit 0 iff sound");
  replay_cmd->add_option("--trace", o.trace_file, "trace file");
  replay_cmd->add_flag("--json", o.json, "JSON output");
  replay_cmd->add_flag("--plain", o.plain, "plain text output");

  auto* oracle = app.add_subcommand("oracle", "cross-validate mask membership against the span oracle");
  add_common(oracle);
  oracle->add_option("--generators", o.generators, "comma-separated generator polynomials")
      ->delimiter(',')
      ->required();
  oracle->add_option("--arity", o.arity, "fragment arity");
  oracle->add_option("--trials", o.trials, "random tables when not exhaustive");
  oracle->add_option("--seed", o.seed, "random seed");
  add_budget(oracle);

  auto* galois = app.add_subcommand("galois", "polymorphism characterization");
  galois->require_subcommand(1);
  auto* verify = galois->add_subcommand("verify", "match automorphism subgroups to progression masks");
  add_common(verify);
  verify->add_option("--arity", o.arity, "fragment arity");
  add_budget(verify);

  auto* embed_cmd = app.add_subcommand("embed", "clones on Z_p x Z_p");
  embed_cmd->require_subcommand(1);
  auto* chain = embed_cmd->add_subcommand("chain", "ascending chain of non-finitely generated clones");
  add_common(chain);
  chain->add_option("--depth", o.depth, "chain length");
  chain->add_option("--m1", o.m1, "residue of the infinite class");
  chain->add_option("--m2", o.m2, "residue of the growing class");
  add_budget(chain);

  std::vector<const char*> argv{"lcc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (replay_cmd->parsed()) {
      std::string text;
      if (o.trace_file.empty()) {
        text = read_all(in);
      } else {
        std::ifstream f(o.trace_file);
        if (!f) throw DomainError("cannot read " + o.trace_file);
        text = read_all(f);
      }
      const auto trace = trace_from_json(json::parse(text));
      std::optional<Polynomial> result;
      std::string failure;
      try {
        result = replay(trace);
      } catch (const ReplayError& e) {
        failure = e.what();
      }
      const bool sound = result && *result == trace.claimed_result;
      if (o.want_json(true)) {
        json j{{"sound", sound}, {"result", result ? format(*result) : ""}, {"claimed", format(trace.claimed_result)}};
        if (!failure.empty()) j["error"] = failure;
        out << j.dump(2) << '\n';
      } else {
        out << (sound ? "sound" : "unsound") << '\n';
      }
      return sound ? 0 : 1;
    }

    if (reduce->parsed()) {
      const auto p = modulus_of(o);
      const auto f = p_representative(parse(o.poly, p));
      if (o.want_json(false)) {
        out << json{{"p", o.p}, {"result", format(f)}}.dump() << '\n';
      } else {
        out << format(f) << '\n';
      }
    } else if (compose->parsed()) {
      const auto p = modulus_of(o);
      const auto subs = parse_all(o.subs, p);
      if (subs.size() != o.positions.size()) throw DomainError("--at and --subs must have the same length");
      const auto f = compose_at(parse(o.poly, p), o.positions, subs);
      if (o.want_json(false)) {
        out << json{{"p", o.p}, {"result", format(f)}}.dump() << '\n';
      } else {
        out << format(f) << '\n';
      }
    } else if (evaluate_cmd->parsed()) {
      const auto p = modulus_of(o);
      const auto f = parse(o.poly, p);
      if (!o.point.empty()) {
        if (o.point.size() < f.max_index()) throw DomainError("point has fewer coordinates than variables");
        for (auto& x : o.point) x = p.reduce(x);
        const auto v = evaluate_at(f, o.point);
        if (o.want_json(false)) {
          out << json{{"p", o.p}, {"value", v}}.dump() << '\n';
        } else {
          out << v << '\n';
        }
      } else {
        const auto t = evaluate(f, std::max<std::uint32_t>(o.arity, std::max<VarIndex>(1, f.max_index())));
        if (o.want_json(false)) {
          out << to_json(t).dump() << '\n';
        } else {
          out << serialize(t);
        }
      }
    } else if (interp->parsed()) {
      // the table header carries p; --p only cross-checks it
      const auto t = deserialize_table(o.table.empty() ? read_all(in) : o.table);
      if (o.p != 0) require_same_modulus(modulus_of(o), t.modulus());
      const auto f = interpolate(t);
      if (o.want_json(false)) {
        out << json{{"p", t.modulus().value()}, {"arity", t.arity()}, {"result", format(f)}}.dump() << '\n';
      } else {
        out << format(f) << '\n';
      }
    } else if (gen->parsed()) {
      const auto p = modulus_of(o);
      const auto c = generate(parse_all(o.generators, p), p);
      if (o.want_json(false)) {
        out << to_json(c.mask()).dump() << '\n';
      } else {
        out << to_string(c.mask()) << '\n';
      }
    } else if (member->parsed()) {
      const auto p = modulus_of(o);
      if (o.mask.empty() && o.generators.empty()) throw CLI::RequiredError("--generators or --mask");
      if (o.poly.empty() == o.table.empty()) throw CLI::RequiredError("exactly one of --poly or --table");
      const auto c = clonoid_of(o, p);
      bool is_member = false;
      if (!o.poly.empty()) {
        is_member = member_poly(c, parse(o.poly, p));
      } else {
        const auto t = deserialize_table(o.table);
        require_same_modulus(p, t.modulus());
        is_member = member_table(c, t);
      }
      if (o.want_json(false)) {
        out << json{{"member", is_member}, {"mask", to_json(c.mask())}}.dump() << '\n';
      } else {
        out << bool_text(is_member) << '\n';
      }
    } else if (classify->parsed()) {
      const auto p = modulus_of(o);
      if (o.mask.empty() && o.generators.empty()) throw CLI::RequiredError("--generators or --mask");
      const auto c = clonoid_of(o, p);
      const bool ia = is_iterative_algebra(c), cl = is_clone_with_plus(c), fg = is_finitely_generated(c);
      if (o.want_json(false)) {
        out << json{{"mask", to_json(c.mask())},
                    {"iterative_algebra", ia},
                    {"clone", cl},
                    {"finitely_generated", fg}}
                   .dump()
            << '\n';
      } else {
        out << "mask: " << to_string(c.mask()) << ", iterative_algebra: " << bool_text(ia)
            << ", clone: " << bool_text(cl) << ", finitely_generated: " << bool_text(fg) << '\n';
      }
    } else if (census->parsed()) {
      const auto p = modulus_of(o);
      const auto clones = enumerate_clones(p);
      const auto algebras = enumerate_iterative_algebras(p);
      if (o.want_json(false)) {
        json jc = json::array(), ja = json::array();
        for (const auto& c : clones) jc.push_back(to_string(c.mask()));
        for (const auto& c : algebras) ja.push_back(to_string(c.mask()));
        out << json{{"p", o.p}, {"clones", clones.size()}, {"iterative_algebras", algebras.size()},
                    {"clone_masks", jc}, {"iterative_algebra_masks", ja}}
                   .dump(2)
            << '\n';
      } else {
        out << "clones: " << clones.size() << ", iterative_algebras: " << algebras.size() << '\n';
      }
    } else if (lattice->parsed()) {
      const auto p = modulus_of(o);
      MaskLattice lat;
      std::string name;
      if (o.kind == "minor") {
        lat = hasse(bounded_masks(p, o.bound, !o.no_zero));
        name = std::to_string(o.p) + "-minor subsets <= " + std::to_string(o.bound);
      } else if (o.kind == "clones") {
        lat = hasse(masks_of(enumerate_clones(p)));
        name = "clones on Z_" + std::to_string(o.p) + " containing +";
      } else {
        lat = hasse(masks_of(enumerate_iterative_algebras(p)));
        name = "linearly closed iterative algebras on Z_" + std::to_string(o.p);
      }
      if (o.kind != "minor" && o.no_zero) {
        std::vector<PMinorSubset> kept;
        for (const auto& m : lat.nodes) {
          if (!m.contains_zero()) kept.push_back(m);
        }
        lat = hasse(std::move(kept));
      }
      out << to_dot(lat, name);
    } else if (witness->parsed()) {
      if (o.p == 0) throw CLI::RequiredError("--p");
      if (o.poly.empty()) throw CLI::RequiredError("--poly");
      const auto p = modulus_of(o);
      const auto f = p_representative(parse(o.poly, p));
      if (f.is_zero()) throw DomainError("the zero polynomial has no witness");
      const auto trace = o.degree ? extract_degree_witness(f, *o.degree) : extract_monomial_witness(f);
      if (o.want_json(true)) {
        out << to_json(trace).dump(2) << '\n';
      } else {
        print_trace(out, trace);
      }
    } else if (oracle->parsed()) {
      const auto p = modulus_of(o);
      const auto gens = parse_all(o.generators, p);
      const auto rep = cross_validate(gens, o.arity, p, o.trials, o.seed, o.effective_budget());
      if (o.want_json(true)) {
        out << to_json(rep).dump(2) << '\n';
      } else {
        out << "dimension: " << rep.dimension << ", agree: " << bool_text(rep.agree()) << '\n';
      }
      return rep.agree() ? 0 : 1;
    } else if (verify->parsed()) {
      const auto p = modulus_of(o);
      const auto rep = verify_subgroup_correspondence(p, o.arity, o.effective_budget());
      if (o.want_json(true)) {
        out << to_json(rep).dump(2) << '\n';
      } else {
        for (const auto& m : rep.matches) {
          out << "subgroup <" << m.subgroup.generator << "> of order " << m.subgroup.order() << " -> ";
          if (m.divisor) {
            out << "m = " << *m.divisor << ' ' << to_string(arithmetic_progression(p, *m.divisor)) << '\n';
          } else {
            out << "no match\n";
          }
        }
        out << "mismatches: " << rep.mismatches << '\n';
      }
      return rep.mismatches == 0 ? 0 : 1;
    } else if (chain->parsed()) {
      const auto p = modulus_of(o);
      const auto rep = ascending_chain(p, o.depth, o.m1, o.m2, o.effective_budget());
      if (o.want_json(true)) {
        out << to_json(rep).dump(2) << '\n';
      } else {
        for (std::size_t i = 0; i < rep.chain.size(); ++i) {
          out << "M" << i << " = " << to_string(rep.chain[i].mask())
              << (rep.finitely_generated[i] ? "" : " (not finitely generated)") << '\n';
          if (i < rep.links.size()) {
            out << "  separator " << format(rep.links[i].separator)
                << (rep.links[i].verified() ? " verified" : " NOT verified") << '\n';
          }
        }
      }
      return rep.passed() ? 0 : 1;
    }
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace lcc::cli
