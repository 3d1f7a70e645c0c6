// Command-line front end: parsing, rewriting, evaluation, compilation,
// satisfiability, model checking, and instance generation.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phs/compile.hpp"
#include "phs/corpus.hpp"
#include "phs/hybrid.hpp"
#include "phs/parse.hpp"
#include "phs/print.hpp"
#include "phs/procedures.hpp"
#include "phs/rewrite.hpp"
#include "phs/semantics.hpp"

using json = nlohmann::ordered_json;
using namespace phs;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitFile = 66;
constexpr int kExitResource = 3;
constexpr int kExitData = 1;

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write " + path);
  out << text;
}

bool is_budget_error(const std::exception& e) {
  return std::string(e.what()).find("budget") != std::string::npos;
}

// Emits one report record: a JSON line or an indented text block.
struct Reporter {
  bool json_mode = false;
  void emit(const json& rec) const {
    if (json_mode) {
      std::cout << rec.dump() << "\n";
      return;
    }
    for (const auto& [k, v] : rec.items())
      std::cout << k << ": "
                << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
};

Dialect dialect_of(const std::string& name) {
  if (name == "phs") return Dialect::Phs;
  if (name == "pltl") return Dialect::Pltl;
  if (name == "hl") return Dialect::Hl;
  throw CLI::ValidationError("--dialect", "unknown dialect " + name);
}

Valuation parse_valuation(const std::vector<std::string>& items) {
  Valuation v;
  for (const std::string& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      auto eq = part.find('=');
      if (eq == std::string::npos)
        throw CLI::ValidationError("--valuation", "expected name=value");
      v[part.substr(0, eq)] = std::stoll(part.substr(eq + 1));
    }
  }
  return v;
}

json valuation_json(const Valuation& v) {
  json out = json::object();
  for (const auto& [p, n] : v) out[p] = n;
  return out;
}

json lasso_json(const Lasso& w) { return render_lasso(w); }

json report_json(const CompilationReport& rep) {
  json out;
  out["complementations"] = rep.complementations;
  out["peak_states"] = rep.peak_states;
  out["cache_hits"] = rep.cache_hits;
  json subs = json::array();
  for (const auto& e : rep.subformulas)
    subs.push_back({{"formula", e.formula}, {"states", e.states}});
  out["subformulas"] = subs;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parametric interval temporal logic toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Reporter rep;
  app.add_flag("--json", rep.json_mode, "emit JSON-lines reports");

  long long default_budget = 200000;
  if (const char* env = std::getenv("PHS_BUDGET")) default_budget = std::atoll(env);

  // parse
  auto* cmd_parse = app.add_subcommand("parse", "parse and re-render a formula");
  std::string parse_file, parse_dialect = "phs";
  cmd_parse->add_option("file", parse_file)->required();
  cmd_parse->add_option("--dialect", parse_dialect, "phs|pltl|hl");

  // rewrite
  auto* cmd_rewrite = app.add_subcommand("rewrite", "apply a rewrite stage");
  std::string rw_file, rw_stage, rw_color = "c";
  cmd_rewrite->add_option("file", rw_file)->required();
  cmd_rewrite->add_option("--stage", rw_stage, "pnf|drop-uu|prompt|colorize|pipeline")
      ->required();
  cmd_rewrite->add_option("--color", rw_color, "color proposition");

  // eval
  auto* cmd_eval = app.add_subcommand("eval", "horizon-bounded evaluation");
  std::string ev_trace, ev_formula, ev_interval = "0:0", ev_dialect = "phs";
  std::vector<std::string> ev_val;
  long long ev_horizon = -1;
  cmd_eval->add_option("--trace", ev_trace)->required();
  cmd_eval->add_option("--formula", ev_formula)->required();
  cmd_eval->add_option("--valuation", ev_val, "name=value[,name=value...]");
  cmd_eval->add_option("--interval", ev_interval, "lo:hi (default 0:0)");
  cmd_eval->add_option("--horizon", ev_horizon);
  cmd_eval->add_option("--dialect", ev_dialect, "phs|pltl");

  // compile
  auto* cmd_compile = app.add_subcommand("compile", "compile to automaton or hybrid logic");
  std::string co_file, co_to = "nba", co_fragment = "auto", co_emit = "hoa", co_out;
  long long co_budget = default_budget;
  bool co_report = false;
  cmd_compile->add_option("file", co_file)->required();
  cmd_compile->add_option("--to", co_to, "nba|hl");
  cmd_compile->add_option("--fragment", co_fragment, "auto|hl1|hl2");
  cmd_compile->add_option("--budget", co_budget, "state budget");
  cmd_compile->add_option("--emit", co_emit, "hoa|dot");
  cmd_compile->add_option("--out", co_out, "output path (default stdout)");
  cmd_compile->add_flag("--report", co_report, "include the compilation report");

  // sat
  auto* cmd_sat = app.add_subcommand("sat", "parametric satisfiability");
  std::string sat_file, sat_witness;
  long long sat_budget = default_budget;
  bool sat_minimize = false;
  cmd_sat->add_option("file", sat_file)->required();
  cmd_sat->add_option("--emit-witness", sat_witness, "write the witness lasso");
  cmd_sat->add_flag("--minimize", sat_minimize, "sweep the minimal upward value on the witness");
  cmd_sat->add_option("--budget", sat_budget, "state budget");

  // mc
  auto* cmd_mc = app.add_subcommand("mc", "parametric model checking");
  std::string mc_model, mc_formula;
  long long mc_budget = default_budget;
  cmd_mc->add_option("--model", mc_model)->required();
  cmd_mc->add_option("--formula", mc_formula)->required();
  cmd_mc->add_option("--budget", mc_budget, "state budget");

  // gen
  auto* cmd_gen = app.add_subcommand("gen", "generate constructive families");
  std::string gen_family, gen_dir = ".";
  int gen_n = 1;
  cmd_gen->add_option("family", gen_family, "yardstick|sat-lb|mc-lb|succinct")
      ->required();
  cmd_gen->add_option("--n", gen_n, "family index (>= 1)");
  cmd_gen->add_option("--out", gen_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError&) {
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (*cmd_parse) {
      ParsedFormula p = parse_formula(read_file(parse_file), dialect_of(parse_dialect));
      json rec;
      rec["command"] = "parse";
      rec["formula"] = render_formula(p.formula, p.decl);
      rec["upward"] = p.decl.upward;
      rec["downward"] = p.decl.downward;
      rep.emit(rec);
      return 0;
    }

    if (*cmd_rewrite) {
      Formula f = parse_formula(read_file(rw_file), Dialect::Phs).formula;
      Formula out;
      if (rw_stage == "pnf") out = to_pnf(f);
      else if (rw_stage == "drop-uu") out = drop_universal_upward(f);
      else if (rw_stage == "prompt") out = to_prompt(f);
      else if (rw_stage == "colorize") out = colorize(f, rw_color);
      else if (rw_stage == "pipeline")
        out = colorize(to_prompt(drop_universal_upward(to_pnf(f))), rw_color);
      else throw CLI::ValidationError("--stage", "unknown stage " + rw_stage);
      json rec;
      rec["command"] = "rewrite";
      rec["stage"] = rw_stage;
      rec["formula"] = render_formula(out);
      rep.emit(rec);
      return 0;
    }

    if (*cmd_eval) {
      Lasso w = parse_lasso(read_file(ev_trace));
      Formula f = parse_formula(read_file(ev_formula), dialect_of(ev_dialect)).formula;
      Valuation alpha = parse_valuation(ev_val);
      auto colon = ev_interval.find(':');
      if (colon == std::string::npos)
        throw CLI::ValidationError("--interval", "expected lo:hi");
      Interval iv{std::stoll(ev_interval.substr(0, colon)),
                  std::stoll(ev_interval.substr(colon + 1))};
      EvalOptions opt;
      opt.horizon = ev_horizon;
      TriBool r = eval_interval(w, iv, alpha, f, opt);
      json rec;
      rec["command"] = "eval";
      rec["verdict"] = tri_name(r);
      rep.emit(rec);
      return r == TriBool::True ? 0 : r == TriBool::False ? 1 : 2;
    }

    if (*cmd_compile) {
      Formula f = parse_formula(read_file(co_file), Dialect::Phs).formula;
      Fragment frag = co_fragment == "hl1"   ? Fragment::Hl1
                      : co_fragment == "hl2" ? Fragment::Hl2
                      : co_fragment == "auto"
                          ? Fragment::Auto
                          : throw CLI::ValidationError("--fragment",
                                                       "unknown fragment");
      json rec;
      rec["command"] = "compile";
      std::string artifact;
      if (co_to == "hl") {
        Formula g = to_pnf(f);
        Formula hl = frag == Fragment::Hl1 ||
                             (frag == Fragment::Auto && in_abbbarw(g))
                         ? abb_to_hl1(g)
                         : hs_to_hl2(to_core_fragment(g, CoreTarget::BBbarEEbar));
        artifact = render_formula(hl) + "\n";
        rec["formula"] = render_formula(hl);
      } else if (co_to == "nba") {
        CompileOptions opts;
        opts.state_budget = co_budget;
        Compiled c = hs_to_nba(f, frag, opts);
        artifact = co_emit == "dot" ? to_dot(c.automaton) : to_hoa(c.automaton);
        rec["states"] = c.automaton.size();
        if (co_report) rec["report"] = report_json(c.report);
      } else {
        throw CLI::ValidationError("--to", "unknown target " + co_to);
      }
      if (co_out.empty()) {
        rep.emit(rec);
        std::cout << artifact;
      } else {
        write_file(co_out, artifact);
        rec["out"] = co_out;
        rep.emit(rec);
      }
      return 0;
    }

    if (*cmd_sat) {
      Formula f = parse_formula(read_file(sat_file), Dialect::Phs).formula;
      CompileOptions opts;
      opts.state_budget = sat_budget;
      SatResult r = check_sat(f, opts);
      json rec;
      rec["command"] = "sat";
      rec["verdict"] = r.verdict == SatResult::Verdict::Nonempty ? "nonempty"
                       : r.verdict == SatResult::Verdict::Empty  ? "empty"
                                                                 : "undecided";
      rec["valuation"] = valuation_json(r.valuation);
      rec["k"] = r.k;
      rec["automaton_states"] = r.automaton_states;
      if (r.witness) {
        rec["witness"] = lasso_json(*r.witness);
        rec["witness_verified"] = r.witness_verified;
        if (sat_minimize) {
          Valuation up;
          for (const auto& [p, v] : r.valuation) up[p] = v;
          long long hi = r.valuation.empty() ? 1 : 2 * r.k;
          auto mv = min_upward_alpha(f, *r.witness, hi);
          if (mv) rec["min_upward_value"] = *mv;
        }
        if (!sat_witness.empty()) {
          write_file(sat_witness, render_lasso(*r.witness));
          rec["witness_file"] = sat_witness;
        }
      }
      if (!r.note.empty()) rec["note"] = r.note;
      rep.emit(rec);
      switch (r.verdict) {
        case SatResult::Verdict::Nonempty: return 0;
        case SatResult::Verdict::Empty: return 1;
        case SatResult::Verdict::Undecided: return kExitResource;
      }
    }

    if (*cmd_mc) {
      Kripke k = parse_kripke(read_file(mc_model));
      Formula f = parse_formula(read_file(mc_formula), Dialect::Phs).formula;
      CompileOptions opts;
      opts.state_budget = mc_budget;
      McResult r = check_mc(k, f, opts);
      json rec;
      rec["command"] = "mc";
      rec["verdict"] = r.verdict == McResult::Verdict::Holds  ? "holds"
                       : r.verdict == McResult::Verdict::Empty ? "empty"
                                                                : "undecided";
      rec["valuation"] = valuation_json(r.valuation);
      rec["automaton_states"] = r.automaton_states;
      rec["kripke_states"] = r.kripke_states;
      if (r.counterexample) rec["counterexample"] = lasso_json(r.counterexample->word);
      if (!r.note.empty()) rec["note"] = r.note;
      rep.emit(rec);
      switch (r.verdict) {
        case McResult::Verdict::Holds: return 0;
        case McResult::Verdict::Empty: return 1;
        case McResult::Verdict::Undecided: return kExitResource;
      }
    }

    if (*cmd_gen) {
      if (gen_n < 1) throw CLI::ValidationError("--n", "must be >= 1");
      std::string base = gen_dir + "/";
      std::string suffix = std::to_string(gen_n);
      json rec;
      rec["command"] = "gen";
      rec["family"] = gen_family;
      rec["n"] = gen_n;
      std::vector<std::string> files;
      if (gen_family == "yardstick") {
        write_file(base + "yardstick_" + suffix + ".lasso",
                   render_lasso(yardstick_trace(gen_n)));
        write_file(base + "yardstick_" + suffix + ".phs",
                   render_formula(yardstick_formula(gen_n)) + "\n");
        files = {"yardstick_" + suffix + ".lasso", "yardstick_" + suffix + ".phs"};
      } else if (gen_family == "sat-lb") {
        write_file(base + "sat_lb_" + suffix + ".phs",
                   render_formula(sat_lowerbound_formula(gen_n)) + "\n");
        files = {"sat_lb_" + suffix + ".phs"};
      } else if (gen_family == "mc-lb") {
        auto [k, f] = mc_lowerbound_instance(gen_n);
        write_file(base + "mc_lb_" + suffix + ".kripke", render_kripke(k));
        write_file(base + "mc_lb_" + suffix + ".phs", render_formula(f) + "\n");
        files = {"mc_lb_" + suffix + ".kripke", "mc_lb_" + suffix + ".phs"};
      } else if (gen_family == "succinct") {
        write_file(base + "succinct_" + suffix + ".phs",
                   render_formula(succinct_family(gen_n)) + "\n");
        files = {"succinct_" + suffix + ".phs"};
      } else {
        throw CLI::ValidationError("family", "unknown family " + gen_family);
      }
      rec["files"] = files;
      rep.emit(rec);
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFile;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_budget_error(e) ? kExitResource : kExitData;
  }
  return kExitUsage;
}
