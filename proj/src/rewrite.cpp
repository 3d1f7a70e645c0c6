#include "phs/rewrite.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>

namespace phs {

namespace {

Formula with_children(const Formula& f, Formula l, Formula r) {
  switch (f->kind) {
    case Kind::True:
    case Kind::Prop:
    case Kind::Var:
      return f;
    case Kind::Not: return mk_not(std::move(l), f->loc);
    case Kind::And: return mk_and(std::move(l), std::move(r), f->loc);
    case Kind::Or: return mk_or(std::move(l), std::move(r), f->loc);
    case Kind::Implies: return mk_implies(std::move(l), std::move(r), f->loc);
    case Kind::Modal:
      return mk_modal(f->rel, f->universal, f->constraint, std::move(l), f->loc);
    case Kind::Next: return mk_next(std::move(l), f->loc);
    case Kind::Until: return mk_until(std::move(l), std::move(r), f->loc);
    case Kind::Always: return mk_always(std::move(l), f->loc);
    case Kind::Future: return mk_future(std::move(l), f->loc);
    case Kind::Past: return mk_past(std::move(l), f->loc);
    case Kind::Yesterday: return mk_yesterday(std::move(l), f->loc);
    case Kind::BoundedEventually:
      return mk_bounded_eventually(f->name, std::move(l), f->loc);
    case Kind::BoundedAlways:
      return mk_bounded_always(f->name, std::move(l), f->loc);
    case Kind::Bind: return mk_bind(f->name, std::move(l), f->loc);
  }
  throw std::logic_error("unreachable");
}

using LocalRule = std::function<std::optional<Formula>(const Formula&)>;

struct RuleSet {
  std::vector<std::pair<std::string, LocalRule>> rules;
};

Formula rebuild(const Formula& f, const std::vector<int>& path, size_t idx,
                const Formula& repl) {
  if (idx == path.size()) return repl;
  if (path[idx] == 0)
    return with_children(f, rebuild(f->lhs, path, idx + 1, repl), f->rhs);
  return with_children(f, f->lhs, rebuild(f->rhs, path, idx + 1, repl));
}

bool find_redex(const Formula& f, const RuleSet& rs, std::vector<int>& path,
                std::string& rule, Formula& repl) {
  for (auto& [name, fn] : rs.rules) {
    if (auto r = fn(f)) {
      rule = name;
      repl = *r;
      return true;
    }
  }
  if (f->lhs) {
    path.push_back(0);
    if (find_redex(f->lhs, rs, path, rule, repl)) return true;
    path.pop_back();
  }
  if (f->rhs) {
    path.push_back(1);
    if (find_redex(f->rhs, rs, path, rule, repl)) return true;
    path.pop_back();
  }
  return false;
}

Formula run_rules(Formula f, const RuleSet& rs, RewriteTrace* trace) {
  for (size_t guard = 0;; ++guard) {
    if (guard > 2'000'000)
      throw std::runtime_error("rewrite did not terminate");
    std::vector<int> path;
    std::string rule;
    Formula repl;
    if (!find_redex(f, rs, path, rule, repl)) return f;
    if (trace) trace->steps.push_back({rule, path});
    f = rebuild(f, path, 0, repl);
  }
}

bool is_literal(const Formula& f) {
  return f->kind == Kind::Prop || f->kind == Kind::True ||
         f->kind == Kind::Var;
}

// ---- positive normal form ----

std::optional<Formula> r_not_not(const Formula& f) {
  if (f->kind == Kind::Not && f->lhs->kind == Kind::Not)
    return f->lhs->lhs;
  return std::nullopt;
}
std::optional<Formula> r_not_and(const Formula& f) {
  if (f->kind == Kind::Not && f->lhs->kind == Kind::And)
    return mk_or(mk_not(f->lhs->lhs), mk_not(f->lhs->rhs));
  return std::nullopt;
}
std::optional<Formula> r_not_or(const Formula& f) {
  if (f->kind == Kind::Not && f->lhs->kind == Kind::Or)
    return mk_and(mk_not(f->lhs->lhs), mk_not(f->lhs->rhs));
  return std::nullopt;
}
std::optional<Formula> r_not_implies(const Formula& f) {
  if (f->kind == Kind::Not && f->lhs->kind == Kind::Implies)
    return mk_and(f->lhs->lhs, mk_not(f->lhs->rhs));
  return std::nullopt;
}
std::optional<Formula> r_not_modal(const Formula& f) {
  if (f->kind == Kind::Not && f->lhs->kind == Kind::Modal) {
    const auto& m = f->lhs;
    return mk_modal(m->rel, !m->universal, m->constraint, mk_not(m->lhs));
  }
  return std::nullopt;
}
std::optional<Formula> r_implies(const Formula& f) {
  if (f->kind == Kind::Implies) return mk_or(mk_not(f->lhs), f->rhs);
  return std::nullopt;
}

const RuleSet& pnf_rules() {
  static const RuleSet rs{{
      {"pnf/not_not", r_not_not},
      {"pnf/not_and", r_not_and},
      {"pnf/not_or", r_not_or},
      {"pnf/not_implies", r_not_implies},
      {"pnf/not_modal", r_not_modal},
      {"pnf/implies", r_implies},
  }};
  return rs;
}

Formula pnf_of(const Formula& f) { return run_rules(f, pnf_rules(), nullptr); }

// ---- core-fragment expansions (interval-relation completeness) ----

Formula not_len1() { return mk_modal(Rel::B, false, {}, mk_true()); }  // <B>true
Formula len1_e() { return mk_modal(Rel::E, true, {}, mk_false()); }    // [E]!true

Formula ex(Rel r, Formula body) { return mk_modal(r, false, {}, std::move(body)); }
Formula exc(Rel r, const std::optional<Constraint>& c, Formula body) {
  return mk_modal(r, false, c, std::move(body));
}

// Existential expansion of a non-core modality into B/Bbar/Bbar_w/E/Ebar/
// Ebar_w. The weak closures carry the length constraint so that length-1
// selected intervals are not lost.
Formula core_existential(Rel rel, const std::optional<Constraint>& c,
                         const Formula& body) {
  Formula len1 = len_formula(1);
  switch (rel) {
    case Rel::A: {
      Formula w = c ? exc(Rel::BbarW, c, body)
                    : mk_or(body, ex(Rel::Bbar, body));
      Formula at_end = mk_and(len1_e(), w);
      return mk_or(at_end, ex(Rel::E, at_end));
    }
    case Rel::Abar: {
      Formula w = exc(Rel::EbarW, c, body);
      Formula at_start = mk_and(len1, w);
      return mk_or(at_start, ex(Rel::B, at_start));
    }
    case Rel::L:
      return ex(Rel::Bbar,
                ex(Rel::E, mk_and(len1, exc(Rel::BbarW, c, body))));
    case Rel::Lbar:
      return ex(Rel::Ebar,
                ex(Rel::B, mk_and(len1, exc(Rel::EbarW, c, body))));
    case Rel::D:
      return ex(Rel::B, exc(Rel::E, c, body));
    case Rel::Dbar:
      return ex(Rel::Bbar, exc(Rel::Ebar, c, body));
    case Rel::O:
      return ex(Rel::E, mk_and(not_len1(), exc(Rel::Bbar, c, body)));
    case Rel::Obar:
      return ex(Rel::B, mk_and(not_len1(), exc(Rel::Ebar, c, body)));
    default:
      throw std::logic_error("core_existential on core modality");
  }
}

Formula core_expand(const Formula& m) {
  if (!m->universal) return core_existential(m->rel, m->constraint, m->lhs);
  // Dual: [X]_c phi = pnf(! <X>_c !phi) expanded.
  Formula e = core_existential(m->rel, m->constraint, pnf_of(mk_not(m->lhs)));
  return pnf_of(mk_not(e));
}

bool is_core_rel(Rel r) {
  switch (r) {
    case Rel::B: case Rel::Bbar: case Rel::BbarW:
    case Rel::E: case Rel::Ebar: case Rel::EbarW:
      return true;
    default:
      return false;
  }
}

const RuleSet& core_rules() {
  static const RuleSet rs = [] {
    RuleSet r;
    r.rules.emplace_back("core/expand", [](const Formula& f) -> std::optional<Formula> {
      if (f->kind == Kind::Modal && !is_core_rel(f->rel)) return core_expand(f);
      return std::nullopt;
    });
    return r;
  }();
  return rs;
}

// ---- universal upward-bound elimination ----

Cmp dual_upper(Cmp lower) { return lower == Cmp::Ge ? Cmp::Lt : Cmp::Le; }

std::optional<Formula> r_drop_uu(const Formula& f) {
  if (f->kind != Kind::Modal || !f->universal || !f->constraint ||
      cmp_is_upper(f->constraint->cmp))
    return std::nullopt;
  const Constraint upper{dual_upper(f->constraint->cmp), f->constraint->param};
  const Formula& body = f->lhs;
  switch (f->rel) {
    case Rel::B:
      return mk_modal(Rel::B, true, {},
                      mk_or(body, exc(Rel::BbarW, upper, mk_true())));
    case Rel::E:
      return mk_modal(Rel::E, true, {},
                      mk_or(body, exc(Rel::EbarW, upper, mk_true())));
    case Rel::Bbar:
      return mk_or(exc(Rel::Bbar, upper, mk_modal(Rel::Bbar, true, {}, body)),
                   mk_modal(Rel::Bbar, true, {}, body));
    case Rel::Ebar:
      return mk_or(exc(Rel::Ebar, upper, mk_modal(Rel::Ebar, true, {}, body)),
                   mk_modal(Rel::Ebar, true, {}, body));
    case Rel::BbarW:
      return mk_or(exc(Rel::BbarW, upper, mk_modal(Rel::Bbar, true, {}, body)),
                   mk_modal(Rel::BbarW, true, {}, body));
    case Rel::EbarW:
      return mk_or(exc(Rel::EbarW, upper, mk_modal(Rel::Ebar, true, {}, body)),
                   mk_modal(Rel::EbarW, true, {}, body));
    case Rel::A:
      if (f->constraint->cmp == Cmp::Gt)
        return exc(Rel::A, upper, mk_modal(Rel::Bbar, true, {}, body));
      // [A]_{>=u}: land on the right endpoint, then bound the weak right
      // closures; valid for every parameter value including 1.
      return ex(Rel::A,
                mk_and(len_formula(1),
                       mk_modal(Rel::BbarW, true, f->constraint, body)));
    default:
      // Route the remaining relations through their core expansion; the
      // constraint reappears on a core universal and is dropped next.
      return core_expand(f);
  }
}

const RuleSet& drop_uu_rules() {
  static const RuleSet rs{{{"drop_uu/eliminate", r_drop_uu}}};
  return rs;
}

// ---- downward-parameter elimination (value-1 instancing) ----

std::optional<Formula> r_prompt(const Formula& f) {
  if (f->kind != Kind::Modal || !f->constraint) return std::nullopt;
  bool upper = cmp_is_upper(f->constraint->cmp);
  if (!f->universal && upper) return std::nullopt;  // stays parameterized
  if (f->universal && !upper)
    throw std::runtime_error(
        "universal lower-bound operator left; run drop_universal_upward first");
  if (!f->universal) {  // <X>_{>=l} / <X>_{>l}
    if (f->constraint->cmp == Cmp::Ge)
      return mk_modal(f->rel, false, {}, f->lhs);
    return mk_modal(f->rel, false, {}, mk_and(not_len1(), f->lhs));
  }
  // [X]_{<=l} / [X]_{<l}
  if (f->constraint->cmp == Cmp::Le)
    return mk_modal(f->rel, true, {}, mk_or(not_len1(), f->lhs));
  return mk_true();
}

const RuleSet& prompt_rules() {
  static const RuleSet rs{{{"prompt/value1", r_prompt}}};
  return rs;
}

// ---- PLTL embedding into the A/B fragment ----

Formula at_next_point(const Formula& body) {
  // <A>(len_1 & body): body evaluated at the singleton [j,j].
  return ex(Rel::A, mk_and(len_formula(1), body));
}

Formula pltl_tr(const Formula& f) {
  switch (f->kind) {
    case Kind::True:
    case Kind::Prop:
      return f;
    case Kind::Not: return mk_not(pltl_tr(f->lhs));
    case Kind::And: return mk_and(pltl_tr(f->lhs), pltl_tr(f->rhs));
    case Kind::Or: return mk_or(pltl_tr(f->lhs), pltl_tr(f->rhs));
    case Kind::Implies: return mk_implies(pltl_tr(f->lhs), pltl_tr(f->rhs));
    case Kind::Next:
      return ex(Rel::A, mk_and(len_formula(2), at_next_point(pltl_tr(f->lhs))));
    case Kind::Until:
      return ex(Rel::A,
                mk_and(at_next_point(pltl_tr(f->rhs)),
                       mk_modal(Rel::B, true, {}, at_next_point(pltl_tr(f->lhs)))));
    case Kind::Always:
      return mk_modal(Rel::A, true, {}, at_next_point(pltl_tr(f->lhs)));
    case Kind::Future:
      return ex(Rel::A, at_next_point(pltl_tr(f->lhs)));
    case Kind::BoundedEventually: {
      // Offsets run from 0 through the parameter value, so offset 0 is
      // handled separately and the rest are reached from position i+1.
      Formula body = at_next_point(pltl_tr(f->lhs));
      Formula from_next =
          ex(Rel::A, mk_and(len_formula(2),
                            exc(Rel::A, Constraint{Cmp::Le, f->name}, body)));
      return mk_or(at_next_point(pltl_tr(f->lhs)), from_next);
    }
    case Kind::BoundedAlways: {
      Formula body = at_next_point(pltl_tr(f->lhs));
      Formula from_next = ex(
          Rel::A, mk_and(len_formula(2),
                         mk_modal(Rel::A, true, Constraint{Cmp::Le, f->name},
                                  body)));
      return mk_and(at_next_point(pltl_tr(f->lhs)), from_next);
    }
    default:
      throw std::runtime_error("not a PLTL formula");
  }
}

}  // namespace

Formula len_formula(int k) {
  if (k < 1) throw std::invalid_argument("len_formula requires k >= 1");
  Formula f = mk_not(mk_true());
  for (int i = 0; i < k; ++i) f = mk_modal(Rel::B, true, {}, f);
  if (k == 1) return f;
  Formula pre = mk_true();
  for (int i = 0; i < k - 1; ++i) pre = mk_modal(Rel::B, false, {}, pre);
  return mk_and(pre, f);
}

RewriteResult to_pnf_traced(const Formula& f) {
  RewriteResult res;
  res.formula = run_rules(f, pnf_rules(), &res.trace);
  return res;
}
Formula to_pnf(const Formula& f) { return pnf_of(f); }

RewriteResult drop_universal_upward_traced(const Formula& f) {
  if (!is_pnf(f))
    throw std::runtime_error("drop_universal_upward expects a PNF formula");
  RewriteResult res;
  res.formula = run_rules(f, drop_uu_rules(), &res.trace);
  return res;
}
Formula drop_universal_upward(const Formula& f) {
  return drop_universal_upward_traced(f).formula;
}

RewriteResult to_core_fragment_traced(const Formula& f, CoreTarget target) {
  if (!is_pnf(f))
    throw std::runtime_error("to_core_fragment expects a PNF formula");
  RewriteResult res;
  if (target == CoreTarget::ABBbar) {
    if (!in_abbbarw(f))
      throw std::runtime_error("fragment violation: not an A/B/Bbar/Bbar_w formula");
    res.formula = f;
    return res;
  }
  res.formula = run_rules(f, core_rules(), &res.trace);
  return res;
}
Formula to_core_fragment(const Formula& f, CoreTarget target) {
  return to_core_fragment_traced(f, target).formula;
}

RewriteResult to_prompt_traced(const Formula& f) {
  if (!is_pnf(f)) throw std::runtime_error("to_prompt expects a PNF formula");
  RewriteResult res;
  res.formula = run_rules(f, prompt_rules(), &res.trace);
  return res;
}
Formula to_prompt(const Formula& f) { return to_prompt_traced(f).formula; }

RewriteResult pltl_to_pab_traced(const Formula& f) {
  RewriteResult res;
  res.formula = pltl_tr(f);
  res.trace.steps.push_back({"pltl_to_pab", {}});
  return res;
}
Formula pltl_to_pab(const Formula& f) { return pltl_tr(f); }

Formula colorize_rel(const Formula& f, const std::string& c) {
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    if (g->kind == Kind::Modal && g->constraint) {
      if (g->universal || !cmp_is_upper(g->constraint->cmp))
        throw std::runtime_error("colorize expects a PromptHS formula");
      Formula color = mk_prop(c);
      auto theta = [&](Formula d) {
        Formula dn = pnf_of(mk_not(d));
        Formula left = ex(Rel::A, mk_and(len_formula(1), d));
        Formula right = mk_modal(
            Rel::B, true, {},
            mk_implies(ex(Rel::A, mk_and(len_formula(1), dn)),
                       mk_modal(Rel::B, true, {},
                                ex(Rel::A, mk_and(len_formula(1), dn)))));
        return mk_and(left, right);
      };
      Formula blocks = mk_or(theta(color), theta(mk_not(color)));
      return mk_modal(g->rel, false, {}, mk_and(go(g->lhs), blocks));
    }
    if (!g->lhs) return g;
    if (!g->rhs) return with_children(g, go(g->lhs), nullptr);
    return with_children(g, go(g->lhs), go(g->rhs));
  };
  return go(f);
}

Formula alt_formula(const std::string& c) {
  auto half = [&](Formula lit) {
    return mk_modal(Rel::A, true, {},
                    ex(Rel::A, ex(Rel::A, mk_and(len_formula(1), lit))));
  };
  return mk_and(half(mk_prop(c)), half(mk_not(mk_prop(c))));
}

Formula colorize(const Formula& f, const std::string& c) {
  if (!is_prompt(f))
    throw std::runtime_error("colorize expects a PromptHS formula");
  for (auto& a : collect_atoms(f))
    if (a == c)
      throw std::runtime_error("color atom '" + c + "' collides with the formula alphabet");
  return mk_and(colorize_rel(f, c), alt_formula(c));
}

RewriteResult colorize_traced(const Formula& f, const std::string& c) {
  RewriteResult res;
  res.formula = colorize(f, c);
  res.trace.steps.push_back({"colorize:" + c, {}});
  return res;
}

namespace {

std::optional<Formula> apply_named(const std::string& rule, const Formula& f) {
  for (const RuleSet* rs : {&pnf_rules(), &drop_uu_rules(), &core_rules(),
                            &prompt_rules()}) {
    for (auto& [name, fn] : rs->rules)
      if (name == rule) return fn(f);
  }
  if (rule == "pltl_to_pab") return pltl_to_pab(f);
  if (rule.rfind("colorize:", 0) == 0) return colorize(f, rule.substr(9));
  throw std::runtime_error("unknown rewrite rule '" + rule + "'");
}

}  // namespace

Formula replay_trace(const Formula& input, const RewriteTrace& trace) {
  Formula f = input;
  for (auto& step : trace.steps) {
    // Navigate to the recorded position.
    Formula node = f;
    for (int d : step.path) {
      node = d == 0 ? node->lhs : node->rhs;
      if (!node) throw std::runtime_error("replay path out of bounds");
    }
    auto repl = apply_named(step.rule, node);
    if (!repl)
      throw std::runtime_error("replay step does not apply: " + step.rule);
    f = rebuild(f, step.path, 0, *repl);
  }
  return f;
}

}  // namespace phs
