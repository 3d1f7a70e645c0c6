#include "phs/compile.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <memory>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "phs/hybrid.hpp"
#include "phs/print.hpp"
#include "phs/rewrite.hpp"

namespace phs {

std::string marker_eval() { return "@e"; }
std::string marker_var(const std::string& var) { return "@v_" + var; }

NBA well_marked(const std::vector<std::string>& atoms,
                const std::vector<std::string>& markers) {
  NBA a;
  a.atoms = atoms;
  std::vector<int> bits;
  for (const std::string& m : markers) bits.push_back(a.atom_index(m));
  int n = static_cast<int>(bits.size());
  int full = (1 << n) - 1;
  for (int s = 0; s <= full; ++s) a.add_state(s == full);
  for (int s = 0; s <= full; ++s) {
    int rest = full & ~s;
    // Any subset of the still-unseen markers may appear in the next letter;
    // already-seen markers must not reappear.
    for (int t = rest;; t = (t - 1) & rest) {
      Guard g = Guard::tt();
      for (int i = 0; i < n; ++i) {
        if ((s >> i) & 1)
          g = g.conj(Guard::atom(bits[i], false));
        else
          g = g.conj(Guard::atom(bits[i], ((t >> i) & 1) != 0));
      }
      a.add_edge(s, g, s | t);
      if (t == 0) break;
    }
  }
  return a;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Pushes negations inward where a sound dual exists: through boolean
// connectives, X (every position has a successor), the F/G pair, and
// binders (self-dual). Negations remain only on literals and on P/Y, whose
// duals are not expressible without extra primitives.
Formula push_not(const Formula& f, bool neg) {
  switch (f->kind) {
    case Kind::True:
      return neg ? mk_false() : mk_true();
    case Kind::Prop:
    case Kind::Var:
      return neg ? mk_not(f) : f;
    case Kind::Not:
      return push_not(f->lhs, !neg);
    case Kind::And: {
      Formula a = push_not(f->lhs, neg), b = push_not(f->rhs, neg);
      return neg ? mk_or(a, b) : mk_and(a, b);
    }
    case Kind::Or: {
      Formula a = push_not(f->lhs, neg), b = push_not(f->rhs, neg);
      return neg ? mk_and(a, b) : mk_or(a, b);
    }
    case Kind::Implies: {
      Formula a = push_not(f->lhs, !neg), b = push_not(f->rhs, neg);
      return neg ? mk_and(a, b) : mk_or(a, b);
    }
    case Kind::Next:
      return mk_next(push_not(f->lhs, neg));
    case Kind::Future:
      return neg ? mk_always(push_not(f->lhs, true))
                 : mk_future(push_not(f->lhs, false));
    case Kind::Always:
      return neg ? mk_future(push_not(f->lhs, true))
                 : mk_always(push_not(f->lhs, false));
    case Kind::Past: {
      Formula body = mk_past(push_not(f->lhs, false));
      return neg ? mk_not(body) : body;
    }
    case Kind::Yesterday: {
      Formula body = mk_yesterday(push_not(f->lhs, false));
      return neg ? mk_not(body) : body;
    }
    case Kind::Bind:
      return mk_bind(f->name, push_not(f->lhs, neg));
    default:
      throw std::runtime_error(
          "hl_to_nba: operator outside the hybrid-logic dialect");
  }
}

struct Compiler {
  std::vector<std::string> atoms;
  CompileOptions opts;
  CompilationReport rep;
  std::unordered_map<Formula, std::shared_ptr<const NBA>, FormulaHash,
                     FormulaEq>
      memo;

  int eval_bit = -1;

  void note(const NBA& a) {
    rep.peak_states = std::max(rep.peak_states, a.size());
  }

  NBA reduce(NBA a) {
    note(a);
    a = reduce_nba(a);
    note(a);
    return a;
  }

  // 2-state leaf: `bit` has value `positive` at the evaluation mark.
  NBA leaf_at_mark(int bit, bool positive, bool wait_guard_excludes_bit) {
    NBA a;
    a.atoms = atoms;
    a.add_state(false);
    a.add_state(true);
    Guard wait = Guard::atom(eval_bit, false);
    if (wait_guard_excludes_bit) wait = wait.conj(Guard::atom(bit, false));
    a.add_edge(0, wait, 0);
    a.add_edge(0, Guard::atom(eval_bit, true).conj(Guard::atom(bit, positive)),
               1);
    a.add_edge(1, wait, 1);
    return a;
  }

  std::vector<std::string> free_markers(const Formula& f) {
    std::vector<std::string> ms{marker_eval()};
    for (const std::string& v : free_variables(f)) ms.push_back(marker_var(v));
    return ms;
  }

  // Complement relative to well-marked words for f's free variables.
  NBA negate(const NBA& a, const Formula& f) {
    ComplementOptions co;
    co.state_budget = opts.state_budget;
    co.context = render_formula_body(f);
    ++rep.complementations;
    NBA c = complement(a, co);
    note(c);
    return reduce(intersect(c, well_marked(atoms, free_markers(f))));
  }

  const NBA& compile(const Formula& f) {
    auto it = memo.find(f);
    if (it != memo.end()) {
      ++rep.cache_hits;
      return *it->second;
    }
    NBA a = build(f);
    auto stored = std::make_shared<const NBA>(std::move(a));
    memo.emplace(f, stored);
    rep.subformulas.push_back({render_formula_body(f), stored->size()});
    return *stored;
  }

  NBA build(const Formula& f) {
    switch (f->kind) {
      case Kind::True:
        return nba_true(atoms);
      case Kind::Prop:
        return leaf_at_mark(atom_bit(f->name), true, false);
      case Kind::Var:
        return leaf_at_mark(var_bit(f->name), true, true);
      case Kind::And:
        return reduce(intersect(compile(f->lhs), compile(f->rhs)));
      case Kind::Or:
        return reduce(nba_union(compile(f->lhs), compile(f->rhs)));
      case Kind::Not:
        if (is_false(f)) return nba_false(atoms);
        if (f->lhs->kind == Kind::Prop)
          return leaf_at_mark(atom_bit(f->lhs->name), false, false);
        if (f->lhs->kind == Kind::Var)
          return leaf_at_mark(var_bit(f->lhs->name), false, false);
        return negate(compile(f->lhs), f->lhs);
      case Kind::Next:
        return reduce(
            retarget_marker(compile(f->lhs), marker_eval(), MarkerMove::Next));
      case Kind::Yesterday:
        return reduce(retarget_marker(compile(f->lhs), marker_eval(),
                                      MarkerMove::Previous));
      case Kind::Future:
        return reduce(retarget_marker(compile(f->lhs), marker_eval(),
                                      MarkerMove::Future));
      case Kind::Past:
        return reduce(
            retarget_marker(compile(f->lhs), marker_eval(), MarkerMove::Past));
      case Kind::Always: {
        // G phi = !F!phi; one complementation.
        Formula dual = push_not(mk_not(f->lhs), false);
        return negate(compile(mk_future(dual)), f);
      }
      case Kind::Bind:
        return reduce(retarget_marker(compile(f->lhs), marker_var(f->name),
                                      MarkerMove::BindToE, marker_eval()));
      default:
        throw std::runtime_error(
            "hl_to_nba: operator outside the hybrid-logic dialect");
    }
  }

  int atom_bit(const std::string& p) {
    for (size_t i = 0; i < atoms.size(); ++i)
      if (atoms[i] == p) return static_cast<int>(i);
    throw std::logic_error("compile: unknown proposition " + p);
  }
  int var_bit(const std::string& v) { return atom_bit(marker_var(v)); }
};

std::vector<std::string> variable_names(const Formula& f) {
  std::set<std::string> vars;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (!g) return;
    if (g->kind == Kind::Var || g->kind == Kind::Bind) vars.insert(g->name);
    go(g->lhs);
    go(g->rhs);
  };
  go(f);
  return {vars.begin(), vars.end()};
}

}  // namespace

Compiled hl_to_nba(const Formula& f, const CompileOptions& opts) {
  auto t0 = Clock::now();
  Compiler c;
  c.opts = opts;
  c.atoms = collect_atoms(f);
  c.atoms.push_back(marker_eval());
  for (const std::string& v : variable_names(f))
    c.atoms.push_back(marker_var(v));
  if (c.atoms.size() > 30)
    throw std::runtime_error("hl_to_nba: atom inventory too large");
  c.eval_bit = c.atom_bit(marker_eval());

  Formula g = push_not(f, false);
  NBA open = c.compile(g);
  c.rep.stages.push_back({"compile", ms_since(t0)});

  if (!free_variables(g).empty())
    return {open, std::move(c.rep)};

  // Sentence closing: force "@e" to sit exactly at position 0, then project
  // all marker tracks away (bound variables are already oblivious after
  // bind-to-e).
  auto t1 = Clock::now();
  NBA at0;
  at0.atoms = c.atoms;
  at0.add_state(false);
  at0.add_state(true);
  at0.add_edge(0, Guard::atom(c.eval_bit, true), 1);
  at0.add_edge(1, Guard::atom(c.eval_bit, false), 1);
  NBA closed = c.reduce(intersect(open, at0));
  std::vector<std::string> markers{marker_eval()};
  for (const std::string& v : variable_names(g)) markers.push_back(marker_var(v));
  NBA out = c.reduce(project_markers(closed, markers));
  c.rep.stages.push_back({"close", ms_since(t1)});
  return {std::move(out), std::move(c.rep)};
}

Compiled hs_to_nba(const Formula& f, Fragment fragment,
                   const CompileOptions& opts) {
  if (has_parameters(f))
    throw std::runtime_error(
        "hs_to_nba: formula has parameters; run the rewrite pipeline first");
  Formula g = to_pnf(f);
  bool hl1 = fragment == Fragment::Hl1 ||
             (fragment == Fragment::Auto && in_abbbarw(g));
  auto t0 = Clock::now();
  Formula hl;
  double rewrite_ms = 0;
  if (hl1) {
    hl = abb_to_hl1(g);
  } else {
    Formula core = to_core_fragment(g, CoreTarget::BBbarEEbar);
    rewrite_ms = ms_since(t0);
    t0 = Clock::now();
    hl = hs_to_hl2(core);
  }
  double hybrid_ms = ms_since(t0);
  Compiled out = hl_to_nba(hl, opts);
  out.report.stages.insert(out.report.stages.begin(),
                           {{"core-fragment", rewrite_ms},
                            {"hybrid", hybrid_ms}});
  return out;
}

}  // namespace phs
