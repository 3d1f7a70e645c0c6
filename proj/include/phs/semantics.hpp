#pragma once

#include <map>
#include <string>

#include "phs/formula.hpp"
#include "phs/trace.hpp"

namespace phs {

// Horizon-bounded, three-valued evaluation. Candidate intervals whose
// endpoints stay within the horizon are enumerated exhaustively; when a
// quantifier's candidate set is truncated by the horizon, the answer is
// conclusive only if the scan covered at least two full loop periods of
// all-agreeing results, otherwise Unknown (the evaluator refuses to
// over-claim about the unexplored tail).
struct EvalOptions {
  long long horizon = -1;  // -1: |stem| + 4|loop| + max upward value
};

long long default_horizon(const Lasso& w, const Valuation& alpha);

// Interval satisfaction (I, alpha) |= f on w under homogeneity.
TriBool eval_interval(const Lasso& w, Interval I, const Valuation& alpha,
                      const Formula& f, EvalOptions opt = {});

// Trace satisfaction: evaluation at [0,0].
TriBool eval_trace(const Lasso& w, const Valuation& alpha, const Formula& f,
                   EvalOptions opt = {});

// PLTL satisfaction at position i. Exact on lassos (never Unknown).
TriBool eval_pltl(const Lasso& w, long long i, const Valuation& alpha,
                  const Formula& f);

// Hybrid-logic satisfaction at position i under variable assignment g.
// F/P are reflexive, X/Y strict. Throws on unbound free variables.
using Assignment = std::map<std::string, long long>;
TriBool eval_hl(const Lasso& w, long long i, const Assignment& g,
                const Formula& f, EvalOptions opt = {});

}  // namespace phs
