#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phs/compile.hpp"
#include "phs/fairproduct.hpp"
#include "phs/formula.hpp"
#include "phs/semantics.hpp"
#include "phs/trace.hpp"

namespace phs {

// Parametric satisfiability. On nonempty the reported valuation sets every
// downward parameter to 1 and every upward parameter to 2k, where k is the
// color-block bound used by the search (2N+1 for an N-state automaton).
struct SatResult {
  enum class Verdict { Empty, Nonempty, Undecided };
  Verdict verdict = Verdict::Empty;
  std::optional<Lasso> witness;  // over AP, color track stripped
  Valuation valuation;
  long long k = 0;                // color-block bound used
  long long automaton_states = 0; // N: states of the colored-formula automaton
  bool witness_verified = false;  // oracle confirmed the witness
  std::string note;
  CompilationReport report;
};

SatResult check_sat(const Formula& f, const CompileOptions& opts = {});

// Parametric model checking. Holds reports a valuation with
// alpha(u) = 2(|Q||S|+1); Empty carries a pumpable fair counterexample in
// the Kripke/automaton product.
struct McResult {
  enum class Verdict { Holds, Empty, Undecided };
  Verdict verdict = Verdict::Holds;
  Valuation valuation;
  std::optional<LassoWitness> counterexample;
  long long automaton_states = 0;  // |Q|
  long long kripke_states = 0;     // |S|
  std::string note;
  CompilationReport report;
};

McResult check_mc(const Kripke& k, const Formula& f,
                  const CompileOptions& opts = {});

// Sampled check of the two directions of the coloring lemma on a concrete
// word: (1) if (w, alpha) satisfies the prompt formula f then every k-spaced
// coloring satisfies the colored formula (k = max upward value); (2) every
// k-bounded coloring satisfying the colored formula forces (w, 2k) to
// satisfy f. Inconclusive oracle calls are skipped, not counted.
struct Lemma2Report {
  int part1_checked = 0;
  int part1_violations = 0;
  int part2_checked = 0;
  int part2_violations = 0;
  int skipped = 0;
  std::vector<std::string> violations;  // offending colorings, rendered
};

Lemma2Report verify_lemma2(const Formula& f, const Lasso& w,
                           const Valuation& alpha, int samples = 20,
                           uint64_t seed = 1);

// Smallest uniform upward value in [1, hi] under which f holds on w
// (downward parameters fixed to 1); nullopt if none is conclusive-true.
std::optional<long long> min_upward_alpha(const Formula& f, const Lasso& w,
                                          long long hi, EvalOptions opt = {});

// Adds a k-spaced or sampled k-bounded color track to a word (exposed for
// tests). Block boundaries fall every `k` positions for the spaced variant.
Lasso spaced_coloring(const Lasso& w, long long k, bool first_color,
                      const std::string& color_atom = "c");

}  // namespace phs
