#include "phs/formula.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_set>

namespace phs {

const char* rel_name(Rel r) {
  switch (r) {
    case Rel::A: return "A";
    case Rel::Abar: return "Abar";
    case Rel::L: return "L";
    case Rel::Lbar: return "Lbar";
    case Rel::B: return "B";
    case Rel::Bbar: return "Bbar";
    case Rel::BbarW: return "Bbar_w";
    case Rel::E: return "E";
    case Rel::Ebar: return "Ebar";
    case Rel::EbarW: return "Ebar_w";
    case Rel::D: return "D";
    case Rel::Dbar: return "Dbar";
    case Rel::O: return "O";
    case Rel::Obar: return "Obar";
  }
  return "?";
}

const char* cmp_name(Cmp c) {
  switch (c) {
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
  }
  return "?";
}

bool cmp_holds(long long lhs, Cmp c, long long rhs) {
  switch (c) {
    case Cmp::Lt: return lhs < rhs;
    case Cmp::Le: return lhs <= rhs;
    case Cmp::Gt: return lhs > rhs;
    case Cmp::Ge: return lhs >= rhs;
  }
  return false;
}

bool cmp_is_upper(Cmp c) { return c == Cmp::Lt || c == Cmp::Le; }

bool ParamDecl::is_upward(const std::string& p) const {
  return std::find(upward.begin(), upward.end(), p) != upward.end();
}
bool ParamDecl::is_downward(const std::string& p) const {
  return std::find(downward.begin(), downward.end(), p) != downward.end();
}
bool ParamDecl::declared(const std::string& p) const {
  return is_upward(p) || is_downward(p);
}
void ParamDecl::add_upward(const std::string& p) {
  if (!is_upward(p)) upward.push_back(p);
}
void ParamDecl::add_downward(const std::string& p) {
  if (!is_downward(p)) downward.push_back(p);
}
void ParamDecl::merge(const ParamDecl& other) {
  for (auto& p : other.upward) add_upward(p);
  for (auto& p : other.downward) add_downward(p);
}

namespace {

size_t hash_combine(size_t seed, size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

Formula mk_node(Kind kind, std::string name, Rel rel, bool universal,
                std::optional<Constraint> constraint, Formula lhs, Formula rhs,
                SourceLoc loc) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->name = std::move(name);
  n->rel = rel;
  n->universal = universal;
  n->constraint = std::move(constraint);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->loc = loc;
  size_t h = static_cast<size_t>(kind) * 31 + 7;
  h = hash_combine(h, std::hash<std::string>{}(n->name));
  h = hash_combine(h, static_cast<size_t>(n->rel) * 2 + (n->universal ? 1 : 0));
  if (n->constraint) {
    h = hash_combine(h, static_cast<size_t>(n->constraint->cmp) + 11);
    h = hash_combine(h, std::hash<std::string>{}(n->constraint->param));
  }
  if (n->lhs) h = hash_combine(h, n->lhs->hash);
  if (n->rhs) h = hash_combine(h, n->rhs->hash);
  n->hash = h;
  return n;
}

}  // namespace

Formula mk_true() {
  static Formula t = mk_node(Kind::True, "", Rel::A, false, {}, nullptr, nullptr, {});
  return t;
}
Formula mk_false() {
  static Formula f = mk_not(mk_true());
  return f;
}
Formula mk_prop(const std::string& name, SourceLoc loc) {
  return mk_node(Kind::Prop, name, Rel::A, false, {}, nullptr, nullptr, loc);
}
Formula mk_var(const std::string& name, SourceLoc loc) {
  return mk_node(Kind::Var, name, Rel::A, false, {}, nullptr, nullptr, loc);
}
Formula mk_not(Formula f, SourceLoc loc) {
  return mk_node(Kind::Not, "", Rel::A, false, {}, std::move(f), nullptr, loc);
}
Formula mk_and(Formula a, Formula b, SourceLoc loc) {
  return mk_node(Kind::And, "", Rel::A, false, {}, std::move(a), std::move(b), loc);
}
Formula mk_or(Formula a, Formula b, SourceLoc loc) {
  return mk_node(Kind::Or, "", Rel::A, false, {}, std::move(a), std::move(b), loc);
}
Formula mk_implies(Formula a, Formula b, SourceLoc loc) {
  return mk_node(Kind::Implies, "", Rel::A, false, {}, std::move(a), std::move(b), loc);
}
Formula mk_modal(Rel rel, bool universal, std::optional<Constraint> c,
                 Formula body, SourceLoc loc) {
  return mk_node(Kind::Modal, "", rel, universal, std::move(c), std::move(body),
                 nullptr, loc);
}
Formula mk_next(Formula f, SourceLoc loc) {
  return mk_node(Kind::Next, "", Rel::A, false, {}, std::move(f), nullptr, loc);
}
Formula mk_until(Formula a, Formula b, SourceLoc loc) {
  return mk_node(Kind::Until, "", Rel::A, false, {}, std::move(a), std::move(b), loc);
}
Formula mk_always(Formula f, SourceLoc loc) {
  return mk_node(Kind::Always, "", Rel::A, false, {}, std::move(f), nullptr, loc);
}
Formula mk_future(Formula f, SourceLoc loc) {
  return mk_node(Kind::Future, "", Rel::A, false, {}, std::move(f), nullptr, loc);
}
Formula mk_past(Formula f, SourceLoc loc) {
  return mk_node(Kind::Past, "", Rel::A, false, {}, std::move(f), nullptr, loc);
}
Formula mk_yesterday(Formula f, SourceLoc loc) {
  return mk_node(Kind::Yesterday, "", Rel::A, false, {}, std::move(f), nullptr, loc);
}
Formula mk_bounded_eventually(const std::string& param, Formula f, SourceLoc loc) {
  return mk_node(Kind::BoundedEventually, param, Rel::A, false, {}, std::move(f),
                 nullptr, loc);
}
Formula mk_bounded_always(const std::string& param, Formula f, SourceLoc loc) {
  return mk_node(Kind::BoundedAlways, param, Rel::A, false, {}, std::move(f),
                 nullptr, loc);
}
Formula mk_bind(const std::string& var, Formula body, SourceLoc loc) {
  return mk_node(Kind::Bind, var, Rel::A, false, {}, std::move(body), nullptr, loc);
}

Formula mk_and_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return mk_true();
  Formula acc = fs.back();
  for (size_t i = fs.size() - 1; i-- > 0;) acc = mk_and(fs[i], acc);
  return acc;
}
Formula mk_or_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return mk_false();
  Formula acc = fs.back();
  for (size_t i = fs.size() - 1; i-- > 0;) acc = mk_or(fs[i], acc);
  return acc;
}
Formula mk_iff(Formula a, Formula b) {
  return mk_and(mk_implies(a, b), mk_implies(b, a));
}

bool is_false(const Formula& f) {
  return f && f->kind == Kind::Not && f->lhs->kind == Kind::True;
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->hash != b->hash || a->kind != b->kind || a->name != b->name)
    return false;
  if (a->kind == Kind::Modal) {
    if (a->rel != b->rel || a->universal != b->universal ||
        a->constraint != b->constraint)
      return false;
  }
  if (!!a->lhs != !!b->lhs || !!a->rhs != !!b->rhs) return false;
  if (a->lhs && !structurally_equal(a->lhs, b->lhs)) return false;
  if (a->rhs && !structurally_equal(a->rhs, b->rhs)) return false;
  return true;
}

namespace {

void walk(const Formula& f, const std::function<void(const Formula&)>& fn) {
  if (!f) return;
  fn(f);
  walk(f->lhs, fn);
  walk(f->rhs, fn);
}

}  // namespace

size_t distinct_subformula_count(const Formula& f) {
  std::unordered_set<Formula, FormulaHash, FormulaEq> seen;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (!g || seen.count(g)) return;
    seen.insert(g);
    go(g->lhs);
    go(g->rhs);
  };
  go(f);
  return seen.size();
}

size_t node_count(const Formula& f) {
  size_t n = 0;
  walk(f, [&](const Formula&) { ++n; });
  return n;
}

std::vector<std::string> collect_atoms(const Formula& f) {
  std::set<std::string> s;
  walk(f, [&](const Formula& g) {
    if (g->kind == Kind::Prop) s.insert(g->name);
  });
  return {s.begin(), s.end()};
}

std::vector<std::string> collect_params(const Formula& f) {
  std::set<std::string> s;
  walk(f, [&](const Formula& g) {
    if (g->kind == Kind::Modal && g->constraint) s.insert(g->constraint->param);
    if (g->kind == Kind::BoundedEventually || g->kind == Kind::BoundedAlways)
      s.insert(g->name);
  });
  return {s.begin(), s.end()};
}

std::vector<std::string> free_variables(const Formula& f) {
  std::set<std::string> acc;
  std::function<void(const Formula&, std::set<std::string>&)> go =
      [&](const Formula& g, std::set<std::string>& bound) {
        if (!g) return;
        if (g->kind == Kind::Var) {
          if (!bound.count(g->name)) acc.insert(g->name);
          return;
        }
        if (g->kind == Kind::Bind) {
          bool fresh = bound.insert(g->name).second;
          go(g->lhs, bound);
          if (fresh) bound.erase(g->name);
          return;
        }
        go(g->lhs, bound);
        go(g->rhs, bound);
      };
  std::set<std::string> bound;
  go(f, bound);
  return {acc.begin(), acc.end()};
}

bool is_pnf(const Formula& f) {
  if (!f) return true;
  if (f->kind == Kind::Not)
    return f->lhs->kind == Kind::Prop || f->lhs->kind == Kind::True ||
           f->lhs->kind == Kind::Var;
  if (f->kind == Kind::Implies) return false;
  return is_pnf(f->lhs) && is_pnf(f->rhs);
}

std::optional<KindError> check_kinds(const Formula& f, const ParamDecl& decl) {
  std::optional<KindError> err;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (!g || err) return;
    auto need = [&](const std::string& p, bool upward, const SourceLoc& loc,
                    const std::string& what) {
      if (!decl.declared(p)) {
        err = KindError{"parameter '" + p + "' is not declared", loc};
      } else if (upward && !decl.is_upward(p)) {
        err = KindError{"parameter '" + p + "' must be upward in " + what, loc};
      } else if (!upward && !decl.is_downward(p)) {
        err = KindError{"parameter '" + p + "' must be downward in " + what, loc};
      }
    };
    if (g->kind == Kind::Modal && g->constraint) {
      const auto& c = *g->constraint;
      bool upper = cmp_is_upper(c.cmp);
      // <X>_{<u}, [X]_{>l} take upward; <X>_{>l}, [X]_{<l} take downward.
      bool wants_upward = (g->universal != upper);
      std::string what = std::string(g->universal ? "[" : "<") + rel_name(g->rel) +
                         (g->universal ? "]" : ">") + "_{" + cmp_name(c.cmp) + c.param + "}";
      need(c.param, wants_upward, g->loc, what);
    }
    if (g->kind == Kind::BoundedEventually)
      need(g->name, true, g->loc, "F_{<=" + g->name + "}");
    if (g->kind == Kind::BoundedAlways)
      need(g->name, false, g->loc, "G_{<=" + g->name + "}");
    go(g->lhs);
    go(g->rhs);
  };
  go(f);
  return err;
}

bool uses_only(const Formula& f, const std::vector<Rel>& allowed) {
  bool ok = true;
  walk(f, [&](const Formula& g) {
    if (g->kind == Kind::Modal &&
        std::find(allowed.begin(), allowed.end(), g->rel) == allowed.end())
      ok = false;
  });
  return ok;
}

bool in_abbbarw(const Formula& f) {
  return is_interval_formula(f) &&
         uses_only(f, {Rel::A, Rel::B, Rel::Bbar, Rel::BbarW});
}

bool in_bbbar_eebar_core(const Formula& f) {
  return is_interval_formula(f) &&
         uses_only(f, {Rel::B, Rel::Bbar, Rel::BbarW, Rel::E, Rel::Ebar, Rel::EbarW});
}

bool is_interval_formula(const Formula& f) {
  bool ok = true;
  walk(f, [&](const Formula& g) {
    switch (g->kind) {
      case Kind::Next:
      case Kind::Until:
      case Kind::Always:
      case Kind::Future:
      case Kind::Past:
      case Kind::Yesterday:
      case Kind::BoundedEventually:
      case Kind::BoundedAlways:
      case Kind::Bind:
      case Kind::Var:
        ok = false;
        break;
      default:
        break;
    }
  });
  return ok;
}

bool is_pltl_formula(const Formula& f) {
  bool ok = true;
  walk(f, [&](const Formula& g) {
    switch (g->kind) {
      case Kind::Modal:
      case Kind::Past:
      case Kind::Yesterday:
      case Kind::Bind:
      case Kind::Var:
        ok = false;
        break;
      default:
        break;
    }
  });
  return ok;
}

bool is_hl_formula(const Formula& f) {
  bool ok = true;
  walk(f, [&](const Formula& g) {
    switch (g->kind) {
      case Kind::Modal:
      case Kind::Until:
      case Kind::BoundedEventually:
      case Kind::BoundedAlways:
        ok = false;
        break;
      default:
        break;
    }
  });
  return ok;
}

bool has_parameters(const Formula& f) { return !collect_params(f).empty(); }

bool is_prompt(const Formula& f) {
  bool ok = is_pnf(f);
  walk(f, [&](const Formula& g) {
    if (g->kind == Kind::Modal && g->constraint &&
        (g->universal || !cmp_is_upper(g->constraint->cmp)))
      ok = false;
    if (g->kind == Kind::BoundedAlways) ok = false;
  });
  return ok;
}

}  // namespace phs
