#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phs/trace.hpp"

namespace phs {

// Conjunction of literals over the atom inventory, encoded as bitmasks over
// atom indices. A letter is a subset of atoms (uint32_t mask).
struct Cube {
  uint32_t pos = 0;
  uint32_t neg = 0;
  bool contradictory() const { return (pos & neg) != 0; }
  bool sat(uint32_t letter) const {
    return (letter & pos) == pos && (letter & neg) == 0;
  }
  bool operator==(const Cube&) const = default;
};

// Disjunction of cubes; an empty cube list is the unsatisfiable guard.
struct Guard {
  std::vector<Cube> cubes;

  bool sat(uint32_t letter) const;
  bool is_false() const;
  static Guard tt();
  static Guard ff();
  static Guard atom(int bit, bool positive);

  Guard conj(const Guard& other) const;
  Guard disj(const Guard& other) const;
  // Existential elimination of the given atom bits.
  Guard without_bits(uint32_t bits) const;
  // Substitution of a constant for one atom bit.
  Guard with_bit(int bit, bool value) const;
  // Reindexes atom bits; bit_map[i] < 0 drops cubes mentioning bit i.
  Guard remap(const std::vector<int>& bit_map) const;
};

struct Edge {
  Guard guard;
  int dst;
};

// Nondeterministic Büchi automaton over letters = subsets of `atoms`.
struct NBA {
  std::vector<std::string> atoms;
  int initial = 0;
  std::vector<char> accepting;           // per state
  std::vector<std::vector<Edge>> trans;  // per state

  int size() const { return static_cast<int>(accepting.size()); }
  int atom_index(const std::string& a) const;
  uint32_t atom_mask() const {
    return atoms.size() >= 32 ? ~0u : (1u << atoms.size()) - 1u;
  }
  int add_state(bool acc);
  void add_edge(int src, Guard g, int dst);
};

// Accepting lasso: the word plus the run that accepts it. The run visits an
// accepting state inside the loop.
struct LassoWitness {
  Lasso word;
  std::vector<int> stem_states;  // aligned with word.stem
  std::vector<int> loop_states;  // aligned with word.loop
};

NBA nba_true(const std::vector<std::string>& atoms);
NBA nba_false(const std::vector<std::string>& atoms);

// Removes unreachable states and states from which no accepting run exists.
NBA prune(const NBA& a);
// Bisimulation quotient (letter-exact); optional reduction pass.
NBA quotient_bisim(const NBA& a);
// Backward-bisimulation quotient (merges states with the same incoming
// behavior); language-preserving, complements the forward quotient.
NBA quotient_bisim_bwd(const NBA& a);
// Alternates the two quotients until neither shrinks the automaton.
NBA reduce_nba(const NBA& a);

NBA intersect(const NBA& a, const NBA& b);
NBA nba_union(const NBA& a, const NBA& b);

struct ComplementOptions {
  size_t state_budget = 200000;
  std::string context;  // reported when the budget trips
};
// L(result) = complement of L(a). Dispatches on structure: deterministic,
// inherently weak, or rank-based with a state budget.
NBA complement(const NBA& a, const ComplementOptions& opts = {});

// Marker-track transformations over marker-encoded words.
enum class MarkerMove { Next, Previous, Future, Past, BindToE };
NBA retarget_marker(const NBA& a, const std::string& marker, MarkerMove move,
                    const std::string& eval_marker = "@e");
NBA project_markers(const NBA& a, const std::vector<std::string>& markers);

// Returns an accepting lasso iff the language is nonempty.
std::optional<LassoWitness> is_empty(const NBA& a);
bool replay_witness(const NBA& a, const LassoWitness& w);

// Exact ultimately-periodic word membership.
bool membership(const NBA& a, const Lasso& w);

// Restriction to words whose color blocks all have length <= k.
NBA bound_counter(const NBA& a, int k, const std::string& color_atom);

// Maps a lasso letter into the automaton's atom indexing (atoms absent from
// the lasso read as false).
uint32_t project_letter(const NBA& a, const Lasso& w, long long pos);

// HOA subset and DOT export / import.
std::string to_hoa(const NBA& a);
NBA from_hoa(const std::string& text);
std::string to_dot(const NBA& a);

}  // namespace phs
