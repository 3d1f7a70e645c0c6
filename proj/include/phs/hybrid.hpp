#pragma once

#include "phs/formula.hpp"

namespace phs {

// Translations from non-parametric interval formulas to linear-time hybrid
// logic with binders.
//
// Two-variable route (input fragment B/Bbar/Bbar_w/E/Ebar/Ebar_w): the
// current position is the left endpoint, xL/xR name the endpoints.
// Correctness law: [i,j] |= phi on w iff (w, i, {xL=i, xR=j}) |= result.
Formula hs_to_hl2_open(const Formula& f);
// Sentence form: down xL. down xR. f(phi); trace satisfaction at [0,0]
// corresponds to evaluation at position 0.
Formula hs_to_hl2(const Formula& f);

// One-variable route (input fragment A/B/Bbar/Bbar_w): the current position
// is the right endpoint, x names the left endpoint.
// Correctness law: [i,j] |= phi on w iff (w, j, {x=i}) |= result.
Formula abb_to_hl1_open(const Formula& f);
// Sentence form: down x. h(phi).
Formula abb_to_hl1(const Formula& f);

}  // namespace phs
