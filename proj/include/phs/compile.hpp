#pragma once

#include <string>
#include <vector>

#include "phs/formula.hpp"
#include "phs/nba.hpp"

namespace phs {

// Marker atoms used by the compiler's word encoding: "@e" marks the
// evaluation position, "@v_x" the binding of position variable x. '@' never
// occurs in surface identifiers, so markers cannot collide with propositions.
std::string marker_eval();
std::string marker_var(const std::string& var);

struct CompileOptions {
  size_t state_budget = 200000;  // forwarded to complementation
};

// Observability of the compilation: per-subformula automaton sizes (after
// the reduction passes), complementation count, the largest intermediate
// automaton seen, and wall-clock per pipeline stage.
struct CompilationReport {
  struct Entry {
    std::string formula;
    int states;
  };
  struct Stage {
    std::string name;
    double ms;
  };
  std::vector<Entry> subformulas;  // one entry per distinct subformula
  std::vector<Stage> stages;
  int complementations = 0;
  int peak_states = 0;
  int cache_hits = 0;  // memo lookups that found an existing automaton
};

struct Compiled {
  NBA automaton;
  CompilationReport report;
};

// Automaton requiring exactly one occurrence of each listed marker (other
// atoms unconstrained). Used to discharge the well-markedness side condition
// after complementation.
NBA well_marked(const std::vector<std::string>& atoms,
                const std::vector<std::string>& markers);

// Compiles a hybrid-logic formula over marker-encoded words. For a sentence
// the result reads plain traces: L = { w : (w, 0, {}) |= f }. For an open
// formula the result keeps the marker atoms in its inventory and is correct
// on well-marked words (exactly one "@e" and one "@v_x" per free x),
// arbitrary on ill-marked ones.
Compiled hl_to_nba(const Formula& f, const CompileOptions& opts = {});

enum class Fragment { Auto, Hl1, Hl2 };

// End-to-end interval-formula route: L = { w : w satisfies f at [0,0] }.
// Auto picks the one-variable route when f stays within A/B/Bbar/Bbar_w,
// otherwise rewrites into the B/Bbar/E/Ebar core and takes the two-variable
// route. The formula must be parameter-free.
Compiled hs_to_nba(const Formula& f, Fragment fragment = Fragment::Auto,
                   const CompileOptions& opts = {});

}  // namespace phs
