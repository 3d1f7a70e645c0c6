#include "phs/hybrid.hpp"

#include <stdexcept>

namespace phs {

namespace {

Formula xl() { return mk_var("xL"); }
Formula xr() { return mk_var("xR"); }
Formula xo() { return mk_var("x"); }

[[noreturn]] void reject(const Formula& g, const char* fragment) {
  if (g->constraint)
    throw std::runtime_error(
        "hybrid translation rejects parameterized modalities; "
        "run the color transformation first");
  throw std::runtime_error(std::string("modality <") + rel_name(g->rel) +
                           "> outside the " + fragment + " fragment");
}

// Two-variable mapping; evaluated at the left endpoint.
Formula f2(const Formula& g) {
  switch (g->kind) {
    case Kind::True: return g;
    case Kind::Prop:
      // Homogeneity: p everywhere up to (and including) the right endpoint.
      return mk_always(mk_implies(mk_future(xr()), g));
    case Kind::Not: return mk_not(f2(g->lhs));
    case Kind::And: return mk_and(f2(g->lhs), f2(g->rhs));
    case Kind::Or: return mk_or(f2(g->lhs), f2(g->rhs));
    case Kind::Implies: return mk_implies(f2(g->lhs), f2(g->rhs));
    case Kind::Modal: {
      if (g->constraint) reject(g, "B/Bbar/E/Ebar");
      if (g->universal)
        return mk_not(
            f2(mk_modal(g->rel, false, {}, mk_not(g->lhs))));
      switch (g->rel) {
        case Rel::B:
          // Shrink the right endpoint, then jump back to the left one.
          return mk_future(
              mk_and(mk_next(mk_future(xr())),
                     mk_bind("xR", mk_past(mk_and(xl(), f2(g->lhs))))));
        case Rel::Bbar:
          // Extend the right endpoint strictly past the current one.
          return mk_future(mk_and(
              xr(),
              mk_next(mk_future(
                  mk_bind("xR", mk_past(mk_and(xl(), f2(g->lhs))))))));
        case Rel::BbarW:
          return f2(mk_or(g->lhs, mk_modal(Rel::Bbar, false, {}, g->lhs)));
        case Rel::E:
          return mk_next(
              mk_future(mk_and(mk_future(xr()), mk_bind("xL", f2(g->lhs)))));
        case Rel::Ebar:
          return mk_yesterday(mk_past(mk_bind("xL", f2(g->lhs))));
        case Rel::EbarW:
          return f2(mk_or(g->lhs, mk_modal(Rel::Ebar, false, {}, g->lhs)));
        default:
          reject(g, "B/Bbar/E/Ebar");
      }
    }
    default:
      throw std::runtime_error("not an interval formula");
  }
}

// One-variable mapping; evaluated at the right endpoint.
Formula h1(const Formula& g) {
  switch (g->kind) {
    case Kind::True: return g;
    case Kind::Prop:
      // No position from the left endpoint onwards falsifies p.
      return mk_not(mk_past(mk_and(mk_past(xo()), mk_not(g))));
    case Kind::Not: return mk_not(h1(g->lhs));
    case Kind::And: return mk_and(h1(g->lhs), h1(g->rhs));
    case Kind::Or: return mk_or(h1(g->lhs), h1(g->rhs));
    case Kind::Implies: return mk_implies(h1(g->lhs), h1(g->rhs));
    case Kind::Modal: {
      if (g->constraint) reject(g, "A/B/Bbar/Bbar_w");
      if (g->universal)
        return mk_not(
            h1(mk_modal(g->rel, false, {}, mk_not(g->lhs))));
      switch (g->rel) {
        case Rel::A:
          // The meeting interval starts where this one ends.
          return mk_bind("x", mk_future(h1(g->lhs)));
        case Rel::B:
          return mk_yesterday(
              mk_past(mk_and(h1(g->lhs), mk_past(xo()))));
        case Rel::Bbar:
          return mk_next(mk_future(h1(g->lhs)));
        case Rel::BbarW:
          return h1(mk_or(g->lhs, mk_modal(Rel::Bbar, false, {}, g->lhs)));
        default:
          reject(g, "A/B/Bbar/Bbar_w");
      }
    }
    default:
      throw std::runtime_error("not an interval formula");
  }
}

}  // namespace

Formula hs_to_hl2_open(const Formula& f) { return f2(f); }

Formula hs_to_hl2(const Formula& f) {
  return mk_bind("xL", mk_bind("xR", f2(f)));
}

Formula abb_to_hl1_open(const Formula& f) { return h1(f); }

Formula abb_to_hl1(const Formula& f) { return mk_bind("x", h1(f)); }

}  // namespace phs
