#include "hors/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hors/error.hpp"
#include "hors/model_ops.hpp"
#include "hors/scheme.hpp"
#include "hors/semantics.hpp"
#include "hors/syntax.hpp"
#include "hors/term_graph.hpp"

namespace hors::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RecursionScheme load_scheme(const std::string& path, bool inline_flag) {
  RecursionScheme s;
  try {
    s = parse_scheme(read_file(path));
  } catch (const ParseError& e) {
    throw Error(path + ":" + e.what());
  }
  return inline_flag ? inline_aliases(s) : s;
}

const std::string& first_nonterminal(const RecursionScheme& s) { return s.rules.front().name; }

struct Options {
  std::string file;
  std::string file2;
  bool inline_aliases = false;
  std::string format = "text";
  std::string out_path;
  std::string nonterminal;
  std::size_t depth = 8;
  std::string model;
  std::string ops;
  std::string golden;
  std::string solution;
  std::size_t budget = kDefaultCellBudget;
};

int cmd_check(const Options& o, std::ostream& out) {
  auto s = load_scheme(o.file, o.inline_aliases);
  if (auto w = check_guarded(s)) {
    out << "unguarded: " << *w << '\n';
    return kExitNegative;
  }
  out << "guarded\n";
  return kExitOk;
}

int cmd_flatten(const Options& o, std::ostream& out) {
  auto s = load_scheme(o.file, o.inline_aliases);
  out << print_scheme(flatten(s).scheme);
  return kExitOk;
}

int cmd_solve(const Options& o, std::ostream& out) {
  auto s = load_scheme(o.file, o.inline_aliases);
  auto sol = solve(s);
  std::string text;
  if (o.format == "dot") {
    for (const auto& r : s.rules) text += to_dot(sol.at(r.name), r.name);
  } else {
    text = print_solution(s, sol);
  }
  if (o.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw Error("cannot write '" + o.out_path + "'");
    f << text;
  }
  return kExitOk;
}

int cmd_unfold(const Options& o, std::ostream& out) {
  auto s = load_scheme(o.file, o.inline_aliases);
  std::string p = o.nonterminal.empty() ? first_nonterminal(s) : o.nonterminal;
  if (s.find(p) == nullptr) throw Error("no nonterminal '" + p + "' in " + o.file);
  auto sol = solve(s);
  out << print_term(unfold(sol.at(p), o.depth), s.ctx, s.sig) << '\n';
  return kExitOk;
}

int cmd_alphaeq(const Options& o, const std::optional<std::size_t>& depth, std::ostream& out) {
  auto a = load_scheme(o.file, o.inline_aliases);
  auto b = load_scheme(o.file2, o.inline_aliases);
  if (!(a.ctx == b.ctx)) throw Error("the two schemes have different contexts");
  TermGraph ga = solve(a).at(first_nonterminal(a));
  TermGraph gb = solve(b).at(first_nonterminal(b));
  bool equal = depth ? alpha_eq_finite(unfold(ga, *depth), a.ctx, unfold(gb, *depth), b.ctx) : bisim_eq(ga, gb);
  out << (equal ? "equal" : "different") << '\n';
  return equal ? kExitOk : kExitNegative;
}

int cmd_interpret(const Options& o, std::ostream& out, std::ostream& err) {
  auto s = load_scheme(o.file, o.inline_aliases);
  std::optional<TowerSpec> tower;
  if (!o.model.empty()) tower = parse_tower_spec(o.model);
  Model m;
  if (!o.ops.empty()) {
    try {
      m = load_model(read_file(o.ops), s.sig, tower);
    } catch (const ParseError& e) {
      throw Error(o.ops + ":" + e.what());
    }
  } else {
    m = load_model(tower.value_or(TowerSpec{}), s.sig);
  }
  auto result = solve_interpreted(s, m, o.budget);
  auto status = check_interpreted(s, m, result.solution, o.budget);
  if (status != FixedPointStatus::kFixed) {
    throw InvariantError("interpreted solution fails the fixed-point square (" + to_string(status) + ")");
  }
  std::string text = print_interpreted(s, m, result);
  out << text;
  if (!o.golden.empty() && read_file(o.golden) != text) {
    err << "output differs from golden file '" << o.golden << "'\n";
    return kExitNegative;
  }
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  auto s = load_scheme(o.file, o.inline_aliases);
  GraphSolution cand;
  try {
    cand = parse_solution(read_file(o.solution), s);
  } catch (const ParseError& e) {
    throw Error(o.solution + ":" + e.what());
  }
  bool ok = verify_solution(s, cand);
  out << (ok ? "ok" : "not a solution") << '\n';
  return ok ? kExitOk : kExitNegative;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solve higher-order recursion schemes", "hors"};
  app.require_subcommand(1);
  Options o;
  std::optional<std::size_t> alphaeq_depth;

  auto* check = app.add_subcommand("check", "Report whether a scheme is guarded");
  check->add_option("FILE", o.file)->required();
  check->add_flag("--inline", o.inline_aliases, "Inline one level of bare aliases first");

  auto* flat = app.add_subcommand("flatten", "Print the flattened scheme");
  flat->add_option("FILE", o.file)->required();
  flat->add_flag("--inline", o.inline_aliases, "Inline one level of bare aliases first");

  auto* solve_cmd = app.add_subcommand("solve", "Print the solution graphs");
  solve_cmd->add_option("FILE", o.file)->required();
  solve_cmd->add_option("--format", o.format, "text or dot")->check(CLI::IsMember({"text", "dot"}));
  solve_cmd->add_option("--out", o.out_path, "Write to PATH instead of standard output");
  solve_cmd->add_flag("--inline", o.inline_aliases, "Inline one level of bare aliases first");

  auto* unfold_cmd = app.add_subcommand("unfold", "Print the cut of a solution");
  unfold_cmd->add_option("FILE", o.file)->required();
  unfold_cmd->add_option("--nonterminal", o.nonterminal, "Nonterminal (default: the first)");
  unfold_cmd->add_option("--depth", o.depth, "Cut depth")->capture_default_str();
  unfold_cmd->add_flag("--inline", o.inline_aliases, "Inline one level of bare aliases first");

  auto* alphaeq = app.add_subcommand("alphaeq", "Compare the first nonterminals of two schemes");
  alphaeq->add_option("FILE1", o.file)->required();
  alphaeq->add_option("FILE2", o.file2)->required();
  alphaeq->add_option("--depth", alphaeq_depth, "Compare cuts at this depth instead of bisimulation");
  alphaeq->add_flag("--inline", o.inline_aliases, "Inline one level of bare aliases first");

  auto* interp = app.add_subcommand("interpret", "Least interpreted solution in a tower model");
  interp->add_option("FILE", o.file)->required();
  interp->add_option("--model", o.model, "tower:N (default: from the ops file, else tower:2)");
  interp->add_option("--ops", o.ops, "Model ops file");
  interp->add_option("--golden", o.golden, "Compare the output with this file");
  interp->add_option("--budget", o.budget, "Maximum table cells")->capture_default_str();
  interp->add_flag("--inline", o.inline_aliases, "Inline one level of bare aliases first");

  auto* verify = app.add_subcommand("verify", "Check a candidate solution file");
  verify->add_option("FILE", o.file)->required();
  verify->add_option("--solution", o.solution, "Solution file")->required();
  verify->add_flag("--inline", o.inline_aliases, "Inline one level of bare aliases first");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (check->parsed()) return cmd_check(o, out);
    if (flat->parsed()) return cmd_flatten(o, out);
    if (solve_cmd->parsed()) return cmd_solve(o, out);
    if (unfold_cmd->parsed()) return cmd_unfold(o, out);
    if (alphaeq->parsed()) return cmd_alphaeq(o, alphaeq_depth, out);
    if (interp->parsed()) return cmd_interpret(o, out, err);
    if (verify->parsed()) return cmd_verify(o, out);
  } catch (const UnguardedError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNegative;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace hors::cli
