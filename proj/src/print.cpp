#include "phs/print.hpp"

#include <functional>
#include <sstream>

namespace phs {

namespace {

// Precedence: implies < or < and < until < unary/atom.
enum Prec { PrecImplies = 0, PrecOr = 1, PrecAnd = 2, PrecUntil = 3, PrecUnary = 4 };

int prec_of(const Formula& f) {
  switch (f->kind) {
    case Kind::Implies: return PrecImplies;
    case Kind::Or: return PrecOr;
    case Kind::And: return PrecAnd;
    case Kind::Until: return PrecUntil;
    case Kind::Bind: return PrecImplies;  // binder extends maximally right
    default: return PrecUnary;
  }
}

std::string constraint_str(const Constraint& c) {
  return std::string("_{") + cmp_name(c.cmp) + c.param + "}";
}

void render(const Formula& f, int min_prec, std::string& out) {
  int p = prec_of(f);
  bool paren = p < min_prec;
  if (paren) out += "(";
  switch (f->kind) {
    case Kind::True: out += "true"; break;
    case Kind::Prop:
    case Kind::Var: out += f->name; break;
    case Kind::Not:
      out += "!";
      render(f->lhs, PrecUnary, out);
      break;
    case Kind::And:
      render(f->lhs, PrecAnd + 1, out);
      out += " & ";
      render(f->rhs, PrecAnd, out);
      break;
    case Kind::Or:
      render(f->lhs, PrecOr + 1, out);
      out += " | ";
      render(f->rhs, PrecOr, out);
      break;
    case Kind::Implies:
      render(f->lhs, PrecImplies + 1, out);
      out += " -> ";
      render(f->rhs, PrecImplies, out);
      break;
    case Kind::Modal:
      out += f->universal ? "[" : "<";
      out += rel_name(f->rel);
      out += f->universal ? "]" : ">";
      if (f->constraint) out += constraint_str(*f->constraint);
      out += " ";
      render(f->lhs, PrecUnary, out);
      break;
    case Kind::Next:
      out += "X ";
      render(f->lhs, PrecUnary, out);
      break;
    case Kind::Until:
      render(f->lhs, PrecUntil + 1, out);
      out += " U ";
      render(f->rhs, PrecUntil, out);
      break;
    case Kind::Always:
      out += "G ";
      render(f->lhs, PrecUnary, out);
      break;
    case Kind::Future:
      out += "F ";
      render(f->lhs, PrecUnary, out);
      break;
    case Kind::Past:
      out += "P ";
      render(f->lhs, PrecUnary, out);
      break;
    case Kind::Yesterday:
      out += "Y ";
      render(f->lhs, PrecUnary, out);
      break;
    case Kind::BoundedEventually:
      out += "F_{<=" + f->name + "} ";
      render(f->lhs, PrecUnary, out);
      break;
    case Kind::BoundedAlways:
      out += "G_{<=" + f->name + "} ";
      render(f->lhs, PrecUnary, out);
      break;
    case Kind::Bind:
      out += "down " + f->name + ". ";
      render(f->lhs, PrecImplies, out);
      break;
  }
  if (paren) out += ")";
}

}  // namespace

std::optional<ParamDecl> infer_param_kinds(const Formula& f) {
  ParamDecl decl;
  bool ok = true;
  std::function<void(const Formula&, bool)> go = [&](const Formula& g, bool neg) {
    if (!g || !ok) return;
    auto put = [&](const std::string& p, bool upward) {
      if (upward) {
        if (decl.is_downward(p)) { ok = false; return; }
        decl.add_upward(p);
      } else {
        if (decl.is_upward(p)) { ok = false; return; }
        decl.add_downward(p);
      }
    };
    switch (g->kind) {
      case Kind::Not:
        go(g->lhs, !neg);
        return;
      case Kind::Implies:
        go(g->lhs, !neg);
        go(g->rhs, neg);
        return;
      case Kind::Modal:
        if (g->constraint) {
          bool universal = g->universal != neg;  // effective polarity
          bool upper = cmp_is_upper(g->constraint->cmp);
          put(g->constraint->param, universal != upper);
        }
        go(g->lhs, neg);
        return;
      case Kind::BoundedEventually:
        put(g->name, !neg);
        go(g->lhs, neg);
        return;
      case Kind::BoundedAlways:
        put(g->name, neg);
        go(g->lhs, neg);
        return;
      default:
        go(g->lhs, neg);
        go(g->rhs, neg);
        return;
    }
  };
  go(f, false);
  if (!ok) return std::nullopt;
  return decl;
}

std::string render_formula_body(const Formula& f) {
  std::string out;
  render(f, PrecImplies, out);
  return out;
}

std::string render_formula(const Formula& f, const ParamDecl& decl_in) {
  ParamDecl decl = decl_in;
  if (decl.empty()) {
    if (auto inferred = infer_param_kinds(f)) decl = *inferred;
  }
  std::string out;
  auto emit_decl = [&](const char* kw, const std::vector<std::string>& ps) {
    if (ps.empty()) return;
    out += kw;
    out += " ";
    for (size_t i = 0; i < ps.size(); ++i) {
      if (i) out += ", ";
      out += ps[i];
    }
    out += "; ";
  };
  emit_decl("upward", decl.upward);
  emit_decl("downward", decl.downward);
  out += render_formula_body(f);
  return out;
}

std::string render_kripke(const Kripke& k) {
  std::ostringstream os;
  for (size_t s = 0; s < k.state_names.size(); ++s) {
    os << "state " << k.state_names[s] << " {";
    bool first = true;
    for (size_t a = 0; a < k.atoms.size(); ++a) {
      if ((k.labels[s] >> a) & 1u) {
        if (!first) os << ",";
        os << k.atoms[a];
        first = false;
      }
    }
    os << "}\n";
  }
  os << "init " << k.state_names[k.initial] << "\n";
  for (size_t s = 0; s < k.state_names.size(); ++s)
    for (int t : k.successors[s])
      os << "edge " << k.state_names[s] << " " << k.state_names[t] << "\n";
  return os.str();
}

std::string render_lasso(const Lasso& w) {
  auto letter = [&](uint32_t m) {
    std::string s = "{";
    bool first = true;
    for (size_t a = 0; a < w.atoms.size(); ++a)
      if ((m >> a) & 1u) {
        if (!first) s += ",";
        s += w.atoms[a];
        first = false;
      }
    return s + "}";
  };
  std::string out = "stem";
  for (uint32_t m : w.stem) out += " " + letter(m);
  out += "\nloop";
  for (uint32_t m : w.loop) out += " " + letter(m);
  out += "\n";
  return out;
}

}  // namespace phs
