#pragma once

#include <string>
#include <vector>

#include "phs/formula.hpp"

namespace phs {

// Audit log of rule applications. `path` addresses the rewritten subformula
// in the tree as it stood when the rule fired (0 = lhs, 1 = rhs per level),
// so replaying the steps in order on the original input reproduces the
// output exactly.
struct RewriteStep {
  std::string rule;
  std::vector<int> path;
};
struct RewriteTrace {
  std::vector<RewriteStep> steps;
};

struct RewriteResult {
  Formula formula;
  RewriteTrace trace;
};

// Replays a recorded trace; throws if a step does not apply.
Formula replay_trace(const Formula& input, const RewriteTrace& trace);

// len_k: holds exactly on intervals of length k. k=1 is [B]!true.
Formula len_formula(int k);

// Positive normal form; parameter kinds flip polarity under negation.
RewriteResult to_pnf_traced(const Formula& f);
Formula to_pnf(const Formula& f);

// Eliminates universal modalities with upward (lower-bound) constraints.
RewriteResult drop_universal_upward_traced(const Formula& f);
Formula drop_universal_upward(const Formula& f);

enum class CoreTarget { BBbarEEbar, ABBbar };

// Rewrites every modality into the target fragment (B/Bbar/Bbar_w/E/Ebar/
// Ebar_w); for the ABBbar target the input must already be there and is
// only validated. Throws "fragment violation" otherwise.
RewriteResult to_core_fragment_traced(const Formula& f, CoreTarget target);
Formula to_core_fragment(const Formula& f, CoreTarget target);

// Replaces downward-parameter operators by their value-1 instances,
// preserving satisfaction under the all-ones downward valuation.
RewriteResult to_prompt_traced(const Formula& f);
Formula to_prompt(const Formula& f);

// Embedding of PLTL into the A/B fragment: point satisfaction at i maps to
// interval satisfaction at [i,i].
RewriteResult pltl_to_pab_traced(const Formula& f);
Formula pltl_to_pab(const Formula& f);

// Alternating-color transformation. rel part replaces each <X>_{<u} by a
// color-block bound; alt part requires infinitely many color changes.
Formula colorize_rel(const Formula& f, const std::string& color_atom);
Formula alt_formula(const std::string& color_atom);
Formula colorize(const Formula& f, const std::string& color_atom = "c");
RewriteResult colorize_traced(const Formula& f, const std::string& color_atom = "c");

}  // namespace phs
