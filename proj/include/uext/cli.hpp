#pragma once

// Command-line front end. Every verb prints exactly one JSON document.
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uext/acceptance.hpp"
#include "uext/expr_parser.hpp"
#include "uext/json_io.hpp"

namespace uext::cli {

using json = nlohmann::json;

namespace detail {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::uint64_t env_budget() {
  if (const char* v = std::getenv("UEXT_BUDGET")) {
    try {
      return std::stoull(v);
    } catch (const std::exception&) {
      throw UsageError(std::string("UEXT_BUDGET is not a number: ") + v);
    }
  }
  return kWitnessBudget;
}

/// Inline JSON, or the path of a file holding JSON.
inline json load_json(const std::string& arg) {
  auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return json::parse(arg);
  std::ifstream in(arg);
  if (!in) throw InvalidArgument("'" + arg + "' is neither inline JSON nor a readable file");
  return json::parse(in);
}

/// Accepts either the bare object or a verb's output wrapping it.
inline const json& unwrap(const json& j, const char* key, const char* field) {
  if (j.is_object() && !j.contains(field) && j.contains(key)) return j.at(key);
  return j;
}

/// A group as an expression ("Z(4)+Z^2"), inline JSON or a JSON file.
inline FinGenAb load_group(const std::string& arg) {
  auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') return json_io::read_group(unwrap(json::parse(arg), "group", "rank"));
  if (std::filesystem::is_regular_file(arg)) return json_io::read_group(unwrap(load_json(arg), "group", "rank"));
  return parse_group(arg);
}

inline AbMap load_map(const std::string& arg) { return json_io::read_map(unwrap(load_json(arg), "map", "matrix")); }
inline ExtClass load_class(const std::string& arg) { return json_io::read_ext_class(unwrap(load_json(arg), "class", "coords")); }
inline ShortExactSeq load_sequence(const std::string& arg) {
  return json_io::read_sequence(unwrap(load_json(arg), "sequence", "f"));
}

inline json error_json(const std::string& code, const std::string& message, std::optional<std::size_t> pos = {}) {
  json e = {{"code", code}, {"message", message}};
  if (pos) e["position"] = std::to_string(*pos);
  return {{"error", e}};
}

inline std::string seconds(double s) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(3);
  o << s;
  return o.str();
}

}  // namespace detail

/// Runs one command; args excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out) {
  CLI::App app{"uext: exact Hom/Ext computations, universal extensions and torsion-group classification", "uext"};
  app.require_subcommand(1);
  app.fallthrough();

  bool pretty = false;
  std::uint64_t seed = acceptance::Options{}.seed;
  std::optional<std::uint64_t> budget_flag;
  app.add_flag("--pretty", pretty, "indent the JSON output");
  app.add_option("--seed", seed, "seed for any sampling");
  app.add_option("--budget", budget_flag, "bound on exhaustive searches (default: $UEXT_BUDGET or 2^24)");

  json result;
  int status = 0;
  std::function<void()> action;
  auto verb = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };

  // integer linear algebra and presentations
  std::string matrix_arg;
  auto* snf_cmd = verb("snf", "Smith normal form D = U M V");
  snf_cmd->add_option("--matrix", matrix_arg, "integer matrix (JSON rows)")->required();
  snf_cmd->callback([&] {
    action = [&] {
      IntMatrix m = json_io::read_matrix(detail::unwrap(detail::load_json(matrix_arg), "matrix", ""));
      SnfDecomposition d = snf(m);
      result = {{"U", json_io::matrix(d.U)}, {"D", json_io::matrix(d.D)}, {"V", json_io::matrix(d.V)},
                {"diagonal", json_io::vector(smith_diagonal(m))}};
    };
  });

  std::string relations_arg, group_arg;
  std::size_t generators = 0;
  auto* canon_cmd = verb("canon", "canonical form of a presented group");
  auto* rel_opt = canon_cmd->add_option("--relations", relations_arg, "relation rows (JSON)");
  canon_cmd->add_option("--generators", generators, "number of generators (needed when there are no relations)");
  auto* grp_opt = canon_cmd->add_option("--group", group_arg, "group expression or JSON");
  rel_opt->excludes(grp_opt);
  canon_cmd->callback([&] {
    action = [&] {
      if (relations_arg.empty() && group_arg.empty()) throw detail::UsageError("canon needs --relations or --group");
      if (!group_arg.empty()) {
        FinGenAb g = detail::load_group(group_arg);
        result = {{"group", json_io::group(g)}};
        return;
      }
      IntMatrix rel = json_io::read_matrix(detail::load_json(relations_arg), generators);
      if (generators != 0 && rel.cols() != generators) throw DimensionMismatch("relations do not have --generators columns");
      CanonicalForm f = canonicalize(rel);
      result = {{"group", json_io::group(f.group)},
                {"to_canonical", json_io::matrix(f.to_canonical)},
                {"from_canonical", json_io::matrix(f.from_canonical)}};
    };
  });

  // Hom and Ext
  std::string a_arg, b_arg;
  auto* hom_cmd = verb("hom", "Hom(A, B)");
  hom_cmd->add_option("--A", a_arg)->required();
  hom_cmd->add_option("--B", b_arg)->required();
  hom_cmd->callback([&] {
    action = [&] { result = {{"group", json_io::group(hom_group(detail::load_group(a_arg), detail::load_group(b_arg)).carrier())}}; };
  });

  auto* ext_cmd = verb("ext", "Ext^1(A, B), classes of sequences B -> E -> A");
  ext_cmd->add_option("--A", a_arg)->required();
  ext_cmd->add_option("--B", b_arg)->required();
  ext_cmd->callback([&] {
    action = [&] { result = {{"group", json_io::group(ext_group(detail::load_group(a_arg), detail::load_group(b_arg)).group())}}; };
  });

  std::string class_arg, seq_arg;
  auto* realize_cmd = verb("realize", "short exact sequence representing a class");
  realize_cmd->add_option("--class", class_arg)->required();
  realize_cmd->callback([&] {
    action = [&] { result = {{"sequence", json_io::sequence(realize(detail::load_class(class_arg)))}}; };
  });

  auto* classify_cmd = verb("classify", "class of a short exact sequence");
  classify_cmd->add_option("--sequence", seq_arg)->required();
  classify_cmd->callback([&] {
    action = [&] { result = {{"class", json_io::ext_class(classify(detail::load_sequence(seq_arg)))}}; };
  });

  std::string x_arg, y_arg;
  bool negate_flag = false;
  auto* baer_cmd = verb("baer", "Baer sum x + y, or -x with --negate");
  baer_cmd->add_option("--x", x_arg)->required();
  baer_cmd->add_option("--y", y_arg);
  baer_cmd->add_flag("--negate", negate_flag);
  baer_cmd->callback([&] {
    action = [&] {
      if (negate_flag == !y_arg.empty()) throw detail::UsageError("baer needs exactly one of --y and --negate");
      ExtClass x = detail::load_class(x_arg);
      result = {{"class", json_io::ext_class(negate_flag ? negate(x) : baer_sum(x, detail::load_class(y_arg)))}};
    };
  });

  std::string pull_arg, push_arg;
  auto* act_cmd = verb("act", "pull a class back along a map, or push it out");
  act_cmd->add_option("--class", class_arg)->required();
  auto* pull_opt = act_cmd->add_option("--pullback", pull_arg, "map A' -> A");
  auto* push_opt = act_cmd->add_option("--pushout", push_arg, "map B -> B'");
  pull_opt->excludes(push_opt);
  act_cmd->callback([&] {
    action = [&] {
      if (pull_arg.empty() && push_arg.empty()) throw detail::UsageError("act needs --pullback or --pushout");
      ExtClass c = detail::load_class(class_arg);
      ExtClass r = pull_arg.empty() ? pushout_action(c, detail::load_map(push_arg)) : pullback_action(c, detail::load_map(pull_arg));
      result = {{"class", json_io::ext_class(r)}};
    };
  });

  std::string t_arg;
  bool covariant = false;
  auto* delta_cmd = verb("delta", "connecting map Hom(T, A) -> Ext^1(T, B) of B -> E -> A");
  delta_cmd->add_option("--sequence", seq_arg)->required();
  delta_cmd->add_option("--T", t_arg)->required();
  delta_cmd->add_flag("--covariant", covariant, "use Hom(B, T) -> Ext^1(A, T) instead");
  delta_cmd->callback([&] {
    action = [&] {
      ShortExactSeq s = detail::load_sequence(seq_arg);
      FinGenAb t = detail::load_group(t_arg);
      ConnectingMap d = covariant ? connecting_hom_covariant(s, t) : connecting_hom(s, t);
      result = {{"hom", json_io::group(d.hom.carrier())}, {"ext", json_io::group(d.ext.group())}, {"map", json_io::map(d.map)}};
    };
  });

  std::vector<std::string> family;
  bool dual = false;
  auto* psi_cmd = verb("psi", "comparison map Ext^1(+A_i, B) -> prod Ext^1(A_i, B)");
  psi_cmd->add_option("--A", family, "summand (repeatable)");
  psi_cmd->add_option("--B", b_arg)->required();
  psi_cmd->add_flag("--dual", dual, "Ext^1(B, prod A_i) -> prod Ext^1(B, A_i) instead");
  psi_cmd->callback([&] {
    action = [&] {
      std::vector<FinGenAb> groups;
      for (const auto& g : family) groups.push_back(detail::load_group(g));
      FinGenAb b = detail::load_group(b_arg);
      auto emit = [&](const auto& p) {
        result = {{"domain", json_io::group(p.domain.group())}, {"codomain", json_io::group(p.codomain.total)},
                  {"map", json_io::map(p.map)}, {"injective", p.injective}, {"bijective", p.bijective}};
      };
      if (dual) emit(phi(b, groups));
      else emit(psi(groups, b));
    };
  });

  // universal extensions
  bool full = false;
  auto universal_verb = [&](const char* name, const char* help, bool co) {
    auto* cmd = verb(name, help);
    cmd->add_option("--B", b_arg)->required();
    cmd->add_option("--A", a_arg)->required();
    cmd->add_flag("--full", full, "include the sequence, index set and delta witnesses");
    cmd->callback([&, co] {
      action = [&, co] {
        FinGenAb b = detail::load_group(b_arg), a = detail::load_group(a_arg);
        result = json_io::certificate(co ? build_universal_coextension(b, a) : build_universal_extension(b, a), full);
      };
    });
  };
  universal_verb("univ-ext", "canonical universal extension A -> E -> B^(X)", false);
  universal_verb("univ-coext", "canonical universal co-extension B^X -> E -> A", true);

  std::size_t samples = 5;
  auto* cyclic_cmd = verb("cyclic-check", "Ext^1(B^(X), A) is generated by eta over End(B^(X))");
  cyclic_cmd->add_option("--B", b_arg)->required();
  cyclic_cmd->add_option("--A", a_arg)->required();
  cyclic_cmd->add_option("--samples", samples, "number of sampled classes to solve for");
  cyclic_cmd->callback([&] {
    action = [&] {
      auto cert = build_universal_extension(detail::load_group(b_arg), detail::load_group(a_arg));
      auto r = cyclic_generation_check(cert, seed, samples);
      json ws = json::array();
      for (const auto& w : r.witnesses) ws.push_back({{"target", json_io::ext_class(w.target)}, {"gamma", json_io::map(w.gamma)}});
      result = {{"pass", r.pass}, {"generators", std::to_string(r.generators)}, {"ext", json_io::group(r.ext)}, {"witnesses", ws}};
    };
  });

  // torsion groups
  std::string expr;
  std::vector<std::string> primes;
  auto* parse_cmd = verb("parse", "normal form of a torsion-group expression");
  parse_cmd->add_option("expr", expr)->required();
  parse_cmd->callback([&] {
    action = [&] {
      TorsionExpr e = parse_torsion(expr);
      result = {{"normal_form", e.to_string()}, {"terms", json_io::torsion_terms(e)}};
    };
  });

  auto* ct_cmd = verb("classify-torsion", "co-Ext^1-universality in T_Z (and T_p with --p)");
  ct_cmd->add_option("expr", expr)->required();
  ct_cmd->add_option("--p", primes, "prime for a T_p verdict (repeatable)");
  ct_cmd->callback([&] {
    action = [&] {
      TorsionExpr e = parse_torsion(expr);
      ClassificationReport r = classify_torsion(e);
      result = json_io::torsion_report(r);
      if (!primes.empty()) {
        json tp = json::object();
        for (const auto& p : primes) {
          Integer q = parse_decimal(p);
          tp[to_decimal(q)] = classify_torsion(p_component(e, q)).verdict_tz;
        }
        result["universal_Tp"] = tp;
      }
    };
  });

  auto* cot_cmd = verb("cotorsion", "divisible + bounded decomposition, if any");
  cot_cmd->add_option("expr", expr)->required();
  cot_cmd->callback([&] {
    action = [&] {
      CotorsionResult r = is_cotorsion(parse_torsion(expr));
      result = {{"cotorsion", r.cotorsion},
                {"bound", r.bound ? json_io::integer(*r.bound) : json(nullptr)},
                {"divisible", r.decomposition.divisible.to_string()},
                {"reduced", r.decomposition.reduced.to_string()}};
    };
  });

  std::string p_arg;
  unsigned n_arg = 0;
  bool no_fast = false;
  auto witness_verb = [&](const char* name, const char* help, bool ab4) {
    auto* cmd = verb(name, help);
    cmd->add_option("--p", p_arg)->required();
    cmd->add_option("--N", n_arg)->required();
    cmd->add_flag("--no-fast-path", no_fast, "fail instead of using the unit argument beyond the budget");
    cmd->callback([&, ab4] {
      action = [&, ab4] {
        std::uint64_t budget = budget_flag ? *budget_flag : detail::env_budget();
        Integer p = parse_decimal(p_arg);
        result = json_io::witness(ab4 ? ab4star_failure_witness(p, n_arg, budget, !no_fast)
                                      : counterexample_witness(p, n_arg, budget, !no_fast));
      };
    });
  };
  witness_verb("witness", "minimal order of x - p*alpha in prod_{n<=N} Z(p^n)", false);
  witness_verb("ab4-witness", "minimal order of a preimage of all-ones under prod Z(p^n) -> Z(p)", true);

  std::vector<int> only;
  auto* suite_cmd = verb("suite", "run the acceptance criteria and print a scorecard");
  suite_cmd->add_option("--only", only, "criterion ids to run");
  suite_cmd->callback([&] {
    action = [&] {
      acceptance::Options o;
      o.seed = seed;
      if (budget_flag) o.budget = *budget_flag;
      else if (std::getenv("UEXT_BUDGET")) o.budget = detail::env_budget();
      json rows = json::array();
      bool all = true;
      for (const auto& r : acceptance::run_suite(o, only)) {
        rows.push_back({{"id", std::to_string(r.id)}, {"name", r.name}, {"pass", r.pass},
                        {"seconds", detail::seconds(r.seconds)}, {"cases", std::to_string(r.cases)}, {"detail", r.detail}});
        all = all && r.pass;
      }
      result = {{"criteria", rows}, {"pass", all}};
      if (!all) status = 1;
    };
  });

  auto emit = [&](const json& j) { out << (pretty ? j.dump(2) : j.dump()) << '\n'; };

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    emit(detail::error_json("usage", e.what()));
    return 2;
  }

  try {
    action();
    emit(result);
    return status;
  } catch (const detail::UsageError& e) {
    emit(detail::error_json("usage", e.what()));
    return 2;
  } catch (const Error& e) {
    emit(detail::error_json(e.code(), e.what(), e.position()));
    return 1;
  } catch (const json::parse_error& e) {
    emit(detail::error_json("invalid-json", e.what(), e.byte));
    return 1;
  } catch (const json::exception& e) {
    emit(detail::error_json("invalid-json", e.what()));
    return 1;
  } catch (const std::exception& e) {
    emit(detail::error_json("internal", e.what()));
    return 1;
  }
}

inline int run(int argc, char** argv, std::ostream& out = std::cout) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out);
}

}  // namespace uext::cli
